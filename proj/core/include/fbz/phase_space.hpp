#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace fbz {

using Velocity = std::array<double, 2>;

/// Periodic-in-x, truncated-in-v lattice with an angular quadrature on S^1.
///
/// Spatial nodes sit at x_i = i * dx_cell on [0, Lx)^dx. Velocity nodes are
/// cell-centred, v_j = -vmax + (j + 1/2) dv_cell, so the grid is symmetric
/// under v -> -v. Flat indices are row-major with the spatial block outermost:
/// value(ix, iv) lives at ix * velocity_count() + iv, and a velocity index
/// iv = i1 * Nv + i2.
class PhaseGrid {
 public:
  PhaseGrid() = default;

  int dx() const noexcept { return dx_; }
  static constexpr int dv() noexcept { return 2; }
  double Lx() const noexcept { return Lx_; }
  int Nx() const noexcept { return Nx_; }
  double vmax() const noexcept { return vmax_; }
  int Nv() const noexcept { return Nv_; }
  int Nomega() const noexcept { return Nomega_; }

  double dx_cell() const noexcept { return Lx_ / Nx_; }
  double dv_cell() const noexcept { return 2.0 * vmax_ / Nv_; }
  /// Spatial cell volume dx_cell^dx.
  double x_volume() const noexcept { return x_volume_; }
  /// Velocity cell volume dv_cell^2.
  double v_volume() const noexcept { return v_volume_; }
  double phase_volume() const noexcept { return x_volume_ * v_volume_; }
  double dw() const noexcept { return dw_; }

  std::size_t space_count() const noexcept { return space_count_; }
  std::size_t velocity_count() const noexcept { return std::size_t(Nv_) * Nv_; }
  std::size_t size() const noexcept { return space_count_ * velocity_count(); }

  double v_node(int j) const noexcept { return v_axis_[j]; }
  Velocity velocity(std::size_t iv) const noexcept {
    return {v_axis_[iv / Nv_], v_axis_[iv % Nv_]};
  }
  std::span<const double> v_axis() const noexcept { return v_axis_; }

  /// Unit vectors w_k at angles (k + 1/2) 2pi / Nomega. The second half is the
  /// exact negation of the first: w_{k + Nomega/2} == -w_k bitwise.
  std::span<const Velocity> omegas() const noexcept { return omegas_; }

  /// Spatial multi-index of a flat spatial index (second entry 0 when dx == 1).
  std::array<int, 2> space_index(std::size_t ix) const noexcept {
    if (dx_ == 1) return {static_cast<int>(ix), 0};
    return {static_cast<int>(ix / Nx_), static_cast<int>(ix % Nx_)};
  }
  /// Node coordinate on [0, Lx) along an axis.
  double x_node(int i) const noexcept { return i * dx_cell(); }
  /// Representative of a node in [-Lx/2, Lx/2).
  double x_centered(int i) const noexcept {
    return (2 * i < Nx_ ? i : i - Nx_) * dx_cell();
  }

  bool same_shape(const PhaseGrid& o) const noexcept {
    return dx_ == o.dx_ && Nx_ == o.Nx_ && Nv_ == o.Nv_ && Nomega_ == o.Nomega_ &&
           Lx_ == o.Lx_ && vmax_ == o.vmax_;
  }
  friend bool operator==(const PhaseGrid& a, const PhaseGrid& b) { return a.same_shape(b); }

 private:
  friend PhaseGrid make_grid(int, double, int, double, int, int);

  int dx_ = 1;
  double Lx_ = 1.0;
  int Nx_ = 2;
  double vmax_ = 1.0;
  int Nv_ = 4;
  int Nomega_ = 4;
  double x_volume_ = 0.0;
  double v_volume_ = 0.0;
  double dw_ = 0.0;
  std::size_t space_count_ = 0;
  std::vector<double> v_axis_;
  std::vector<Velocity> omegas_;
};

/// Throws ValidationError on Nx < 2, odd or small Nv / Nomega, dx outside
/// {1, 2}, or nonpositive extents.
PhaseGrid make_grid(int dx, double Lx, int Nx, double vmax, int Nv, int Nomega);

/// Nonnegative density on a PhaseGrid. Values are stored flat (see PhaseGrid).
class DistributionFunction {
 public:
  DistributionFunction() = default;
  explicit DistributionFunction(PhaseGrid grid);
  DistributionFunction(PhaseGrid grid, std::vector<double> values);

  const PhaseGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> slice(std::size_t ix) const noexcept {
    return std::span<const double>(values_).subspan(ix * grid_.velocity_count(),
                                                    grid_.velocity_count());
  }
  std::span<double> slice(std::size_t ix) noexcept {
    return std::span<double>(values_).subspan(ix * grid_.velocity_count(),
                                              grid_.velocity_count());
  }
  double& operator()(std::size_t ix, std::size_t iv) noexcept {
    return values_[ix * grid_.velocity_count() + iv];
  }
  double operator()(std::size_t ix, std::size_t iv) const noexcept {
    return values_[ix * grid_.velocity_count() + iv];
  }

  /// Throws ValidationError when any value is negative or non-finite.
  void validate() const;
  bool operator==(const DistributionFunction& o) const = default;

 private:
  PhaseGrid grid_;
  std::vector<double> values_;
};

struct MomentVector {
  double mass = 0.0;
  Velocity momentum{0.0, 0.0};
  /// Unweighted second moment, sum |v|^2 f (no factor 1/2).
  double energy = 0.0;
  double t = 0.0;
};

/// Sequential sums in storage order.
MomentVector moments(const DistributionFunction& f);

/// sum (<x>^p + <v>^q) f with <z> = sqrt(1 + |z|^2); x uses the centred
/// torus representative.
double weighted_norm(const DistributionFunction& f, double p, double q);

/// sum |f - g| over phase space. Throws ValidationError on grid mismatch.
double l1_distance(const DistributionFunction& f, const DistributionFunction& g);

/// Samples rho(x) (2 pi T)^{-1} exp(-|v - u|^2 / 2T) at the nodes; the
/// density profile is evaluated at each spatial node.
template <class DensityFn>
DistributionFunction sample_maxwellian(const PhaseGrid& grid, DensityFn&& rho, Velocity u,
                                       double T);

}  // namespace fbz

#include "fbz/detail/phase_space_inl.hpp"

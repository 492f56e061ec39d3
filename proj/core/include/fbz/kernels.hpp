#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fbz/phase_space.hpp"

namespace fbz {

/// Variable-hard-sphere collision kernel B(g, w) = |g|^mu b(theta), with
/// cos(theta) = |<g, w>| / |g|. The angular profile is tabulated at
/// kProfileNodes uniform nodes on [0, pi] and linearly interpolated.
class CollisionKernelSpec {
 public:
  static constexpr int kProfileNodes = 256;

  /// b == value everywhere.
  static CollisionKernelSpec constant(double mu, double value);
  /// Arbitrary nonnegative bounded profile sampled at the table nodes.
  template <class Profile>
  static CollisionKernelSpec tabulated(double mu, Profile&& b);
  /// Resamples `samples` (uniform on [0, pi], at least two) onto the table.
  static CollisionKernelSpec from_samples(double mu, const std::vector<double>& samples);

  double mu() const noexcept { return mu_; }
  double sup_b() const noexcept { return sup_b_; }
  /// Declared cap C_B with 0 <= B <= C_B <g>^mu; equals sup_b.
  double cap() const noexcept { return sup_b_; }
  bool is_constant() const noexcept { return constant_; }
  double b(double theta) const noexcept;
  const std::vector<double>& table() const noexcept { return table_; }

 private:
  void finish();

  double mu_ = 0.0;
  bool constant_ = true;
  double sup_b_ = 0.0;
  std::vector<double> table_;
};

/// |g|^mu b(theta). For g == 0: 0 when mu > 0, b(pi/2) when mu == 0.
/// Throws ValidationError when | |w| - 1 | > 1e-12.
double eval_B(const CollisionKernelSpec& spec, Velocity g, Velocity w);

/// sum_k B(g, w_k) dw over the grid's angular nodes.
double eval_A(const CollisionKernelSpec& spec, const PhaseGrid& grid, Velocity g);

/// Largest B / <g>^mu over all grid relative velocities and angular nodes.
double scan_kernel_cap(const CollisionKernelSpec& spec, const PhaseGrid& grid);

/// || exp(-<x>) ||_{L^1(R^d)} for d = 1 (2 K_1(1)) and d = 2 (4 pi / e).
double mollifier_normaliser(int d);

/// Periodised, renormalised sampling of kappa^sigma(x) = sigma^{-d/2}
/// kappa(x / sqrt(sigma)) on the spatial offsets of a grid.
struct SpatialKernel {
  double sigma = 1.0;
  int K_images = 3;
  int dx = 1;
  int Nx = 2;
  double x_volume = 1.0;
  /// Indexed like a spatial slice: weights[ix] is the weight at offset ix.
  std::vector<double> weights;

  double max_weight() const;
  /// Weight at offset (a - b) mod Nx per axis.
  double at(std::array<int, 2> a, std::array<int, 2> b) const noexcept {
    const int o0 = ((a[0] - b[0]) % Nx + Nx) % Nx;
    if (dx == 1) return weights[o0];
    const int o1 = ((a[1] - b[1]) % Nx + Nx) % Nx;
    return weights[std::size_t(o0) * Nx + o1];
  }
};

/// Classical limit: collisions only between particles at the same point.
struct LocalCollisions {};

using SpatialCoupling = std::variant<LocalCollisions, SpatialKernel>;

/// Throws ValidationError unless 0 < sigma <= 1 and K_images >= 1.
SpatialKernel build_spatial_kernel(double sigma, const PhaseGrid& grid, int K_images = 3);

/// ff(x, v) = sum_{x*} f(x*, v) w(x - x*) dx^d per velocity node. Evaluated as
/// f(x) + sum_k w_k dx^d (f(x - k) - f(x)), which returns x-uniform slices
/// unchanged bitwise. Throws ValidationError on grid mismatch.
DistributionFunction convolve_x(const DistributionFunction& f, const SpatialKernel& k,
                                unsigned workers = 1);

/// convolve_x for a SpatialKernel, a copy of f for LocalCollisions.
DistributionFunction mollify(const DistributionFunction& f, const SpatialCoupling& coupling,
                             unsigned workers = 1);

std::string describe(const SpatialCoupling& coupling);

template <class Profile>
CollisionKernelSpec CollisionKernelSpec::tabulated(double mu, Profile&& b) {
  std::vector<double> samples(kProfileNodes);
  for (int i = 0; i < kProfileNodes; ++i)
    samples[i] = b(3.14159265358979323846 * i / (kProfileNodes - 1));
  CollisionKernelSpec s = from_samples(mu, samples);
  return s;
}

}  // namespace fbz

#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "fbz/kernels.hpp"
#include "fbz/phase_space.hpp"

namespace fbz {

namespace detail {
class StencilSet;
}

/// v' = v - <v - v*, w> w,  v*' = v* + <v - v*, w> w.
/// Throws ValidationError when | |w| - 1 | > 1e-12.
std::pair<Velocity, Velocity> collision_transform(Velocity v, Velocity v_star, Velocity w);

/// Gain and loss rates on a grid, plus the conservative net field once
/// projected. All arrays are flat and indexed like DistributionFunction.
struct CollisionField {
  PhaseGrid grid;
  std::vector<double> gain;
  std::vector<double> loss;
  /// L(ff), the loss rate; loss == f * rate.
  std::vector<double> rate;
  /// gain - loss - f sum_j lambda_j psi_j; empty until projected.
  std::vector<double> net;
  /// Per spatial node: 1 when the local Gram matrix was singular and the
  /// correction was skipped.
  std::vector<std::uint8_t> skipped;
  /// sum |f sum_j lambda_j psi_j| dx^d dv^2.
  double projection_l1 = 0.0;

  bool projected() const noexcept { return !net.empty(); }
};

/// Result of the per-node Lagrange projection onto span{1, v1, v2, |v|^2} f.
struct Projection {
  std::vector<double> net;
  std::vector<std::uint8_t> skipped;
  double correction_l1 = 0.0;
};

/// Solves, per spatial node, the 4x4 system that makes
/// sum_v (gain - loss - f sum_j lambda_j psi_j) psi_k dv^2 = 0 for all k.
/// Nodes with a rank-deficient Gram matrix are left uncorrected and flagged.
Projection conserve_project(const CollisionField& cf, const DistributionFunction& f,
                            unsigned workers = 1);

/// Discrete collision operator on a fixed grid and kernel. Construction
/// tabulates the interpolation stencils of every (G, w) pair once; evaluation
/// then costs O(Nx^d Nv^4 Nomega / 2) and parallelises over spatial nodes.
class CollisionOperator {
 public:
  CollisionOperator(PhaseGrid grid, CollisionKernelSpec spec, unsigned workers = 1);
  ~CollisionOperator();
  CollisionOperator(CollisionOperator&&) noexcept;
  CollisionOperator& operator=(CollisionOperator&&) noexcept;

  const PhaseGrid& grid() const noexcept { return grid_; }
  const CollisionKernelSpec& kernel() const noexcept { return spec_; }
  unsigned workers() const noexcept { return workers_; }
  void set_workers(unsigned w) noexcept { workers_ = w; }
  const detail::StencilSet& stencils() const noexcept { return *stencils_; }

  /// L(f)(x, v) = sum_{v*} f(x, v*) A(v - v*) dv^2.
  std::vector<double> loss_rate(const DistributionFunction& f) const;

  /// sum_{v*, w} B f~(x, v') ff~(x, v*') dv^2 dw with bilinear, zero-extended
  /// interpolation of both arguments.
  std::vector<double> gain(const DistributionFunction& f, const DistributionFunction& ff) const;

  /// Raw gain(f, ff) and loss f L(ff), unprojected.
  CollisionField raw(const DistributionFunction& f, const DistributionFunction& ff) const;

  /// Mollifies f per the coupling, then computes raw fields and the projection.
  CollisionField evaluate(const DistributionFunction& f, const SpatialCoupling& coupling) const;

  CollisionField fuzzy(const DistributionFunction& f, const SpatialKernel& k) const {
    return evaluate(f, SpatialCoupling{k});
  }
  CollisionField classical(const DistributionFunction& f) const {
    return evaluate(f, SpatialCoupling{LocalCollisions{}});
  }

  /// raw(f, ff) with gain and loss divided by (1 + alpha f). alpha == 0 returns
  /// raw(f, ff) unchanged. Throws ValidationError for alpha < 0.
  CollisionField renormalized(const DistributionFunction& f, const DistributionFunction& ff,
                              double alpha) const;

 private:
  PhaseGrid grid_;
  CollisionKernelSpec spec_;
  unsigned workers_;
  std::unique_ptr<detail::StencilSet> stencils_;
};

/// Divides every populated array of `cf` pointwise by (1 + alpha f).
CollisionField renormalize(CollisionField cf, const DistributionFunction& f, double alpha);

}  // namespace fbz

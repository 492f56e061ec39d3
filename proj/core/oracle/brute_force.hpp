#pragma once

#include <vector>

#include "fbz/kernels.hpp"
#include "fbz/phase_space.hpp"

// Naive reference implementations used to cross-check the production
// operators on tiny grids. Every sum is written out in physical coordinates
// with no tabulation, padding or symmetry reduction.
namespace fbz::oracle {

/// Periodised kappa^sigma weights, rebuilt from the closed form.
std::vector<double> spatial_weights(double sigma, const PhaseGrid& grid, int K_images);

/// sum_y w(x - y) f(y, v) dx^d.
DistributionFunction convolve(const DistributionFunction& f, double sigma, int K_images);

/// Zero-extended bilinear interpolation of one velocity slice at v.
double interpolate(const DistributionFunction& f, std::size_t ix, Velocity v);

double kernel_B(const CollisionKernelSpec& spec, Velocity g, Velocity w);

/// sum_{v*} sum_{all k} B(v - v*, w_k) f~(x, v') ff~(x, v*') dv^2 dw.
std::vector<double> gain(const DistributionFunction& f, const DistributionFunction& ff,
                         const CollisionKernelSpec& spec);

/// sum_{v*} sum_k B(v - v*, w_k) ff(x, v*) dv^2 dw.
std::vector<double> loss_rate(const DistributionFunction& ff, const CollisionKernelSpec& spec);

/// Dissipation integrand h(x, v); sigma <= 0 selects local collisions.
std::vector<double> dissipation_field(const DistributionFunction& f,
                                      const CollisionKernelSpec& spec, double sigma,
                                      int K_images);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace fbz::oracle

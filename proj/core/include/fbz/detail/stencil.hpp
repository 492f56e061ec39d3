#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fbz/kernels.hpp"
#include "fbz/phase_space.hpp"

namespace fbz::detail {

/// One (relative-velocity offset G, angular pair {w_k, -w_k}) term of the
/// velocity collision sum. For node v (index i) with partner v* = v - G:
///   v'  sits at index i + a,  v*' at index i - G - a,  a = -(G.w) w,
/// and both are read by bilinear interpolation from a zero-padded copy of the
/// slice. `weight` carries 2 B(G dv, w) dw dv^2 (both members of the pair).
struct CollisionStencil {
  std::array<int, 2> G;
  int k;
  double weight;
  std::ptrdiff_t off_prime;   // padded-array offset of the v' interpolation base
  std::ptrdiff_t off_partner; // padded-array offset of the v*' interpolation base
  std::array<double, 4> w_prime;
  std::array<double, 4> w_partner;
  int i_lo, i_hi, j_lo, j_hi;  // nodes whose partner v - G lies inside the box
};

class StencilSet {
 public:
  StencilSet(const PhaseGrid& grid, const CollisionKernelSpec& spec);

  std::span<const CollisionStencil> stencils() const noexcept { return stencils_; }
  int pad() const noexcept { return pad_; }
  int stride() const noexcept { return stride_; }
  std::size_t padded_size() const noexcept { return std::size_t(stride_) * stride_; }

  /// Copies a velocity slice into a zeroed padded buffer.
  void pad_slice(std::span<const double> slice, std::span<double> padded) const;
  /// Padded index of node (i, j).
  std::ptrdiff_t padded_index(int i, int j) const noexcept {
    return std::ptrdiff_t(i + pad_) * stride_ + (j + pad_);
  }

  /// A(G dv) = sum over all angular nodes of B dw, indexed by offset_index(G).
  std::span<const double> angular_average() const noexcept { return A_; }
  std::size_t offset_index(int g0, int g1) const noexcept {
    const int span = 2 * nv_ - 1;
    return std::size_t(g0 + nv_ - 1) * span + std::size_t(g1 + nv_ - 1);
  }

 private:
  int nv_ = 0;
  int pad_ = 0;
  int stride_ = 0;
  std::vector<CollisionStencil> stencils_;
  std::vector<double> A_;
};

/// Bilinear read at a padded base pointer with row stride `stride`.
inline double bilinear(const double* base, std::ptrdiff_t stride,
                       const std::array<double, 4>& w) noexcept {
  return w[0] * base[0] + w[1] * base[1] + w[2] * base[stride] + w[3] * base[stride + 1];
}

}  // namespace fbz::detail

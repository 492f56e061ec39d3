#include "fbz/collision.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fbz/detail/stencil.hpp"
#include "fbz/error.hpp"
#include "fbz/parallel.hpp"

namespace fbz {

namespace detail {

namespace {

// Offsets that hit a node in exact arithmetic read that node exactly, so a zero
// there stays zero instead of picking up ~1e-16 of its neighbour.
double snap_to_lattice(double a) {
  const double r = std::round(a);
  return std::abs(a - r) < 1e-12 ? r : a;
}

}  // namespace

StencilSet::StencilSet(const PhaseGrid& grid, const CollisionKernelSpec& spec) : nv_(grid.Nv()) {
  const int n = grid.Nv();
  const int half = grid.Nomega() / 2;
  const double h = grid.dv_cell();
  const auto omegas = grid.omegas();
  const int span = 2 * n - 1;

  A_.assign(std::size_t(span) * span, 0.0);
  for (int g0 = -(n - 1); g0 <= n - 1; ++g0)
    for (int g1 = -(n - 1); g1 <= n - 1; ++g1)
      A_[offset_index(g0, g1)] = eval_A(spec, grid, Velocity{g0 * h, g1 * h});

  struct Raw {
    CollisionStencil s;
    std::array<int, 2> base_prime, base_partner;
  };
  std::vector<Raw> raw;
  raw.reserve(std::size_t(span) * span * half);
  int need = 1;
  for (int g0 = -(n - 1); g0 <= n - 1; ++g0) {
    for (int g1 = -(n - 1); g1 <= n - 1; ++g1) {
      for (int k = 0; k < half; ++k) {
        const Velocity& w = omegas[k];
        const double B = eval_B(spec, Velocity{g0 * h, g1 * h}, w);
        if (B == 0.0) continue;
        Raw r;
        r.s.G = {g0, g1};
        r.s.k = k;
        r.s.weight = 2.0 * B * grid.dw() * grid.v_volume();
        // Shifts in index units: dot / dv == G . w.
        const double dot = g0 * w[0] + g1 * w[1];
        const double a[2] = {snap_to_lattice(-dot * w[0]), snap_to_lattice(-dot * w[1])};
        const double b[2] = {snap_to_lattice(-g0 - a[0]), snap_to_lattice(-g1 - a[1])};
        double ta[2], tb[2];
        for (int c = 0; c < 2; ++c) {
          const double fa = std::floor(a[c]);
          const double fb = std::floor(b[c]);
          r.base_prime[c] = static_cast<int>(fa);
          r.base_partner[c] = static_cast<int>(fb);
          ta[c] = a[c] - fa;
          tb[c] = b[c] - fb;
        }
        r.s.w_prime = {(1 - ta[0]) * (1 - ta[1]), (1 - ta[0]) * ta[1], ta[0] * (1 - ta[1]),
                       ta[0] * ta[1]};
        r.s.w_partner = {(1 - tb[0]) * (1 - tb[1]), (1 - tb[0]) * tb[1], tb[0] * (1 - tb[1]),
                         tb[0] * tb[1]};
        r.s.i_lo = std::max(0, g0);
        r.s.i_hi = std::min(n, n + g0);
        r.s.j_lo = std::max(0, g1);
        r.s.j_hi = std::min(n, n + g1);
        for (int c = 0; c < 2; ++c) {
          const int lo = c == 0 ? r.s.i_lo : r.s.j_lo;
          const int hi = c == 0 ? r.s.i_hi : r.s.j_hi;
          for (int base : {r.base_prime[c], r.base_partner[c]}) {
            need = std::max(need, -(lo + base));
            need = std::max(need, (hi - 1 + base + 1) - (n - 1));
          }
        }
        raw.push_back(r);
      }
    }
  }
  pad_ = need + 1;
  stride_ = n + 2 * pad_;
  stencils_.reserve(raw.size());
  for (Raw& r : raw) {
    r.s.off_prime = std::ptrdiff_t(r.base_prime[0]) * stride_ + r.base_prime[1];
    r.s.off_partner = std::ptrdiff_t(r.base_partner[0]) * stride_ + r.base_partner[1];
    stencils_.push_back(r.s);
  }
}

void StencilSet::pad_slice(std::span<const double> slice, std::span<double> padded) const {
  std::fill(padded.begin(), padded.end(), 0.0);
  for (int i = 0; i < nv_; ++i)
    std::copy_n(slice.data() + std::size_t(i) * nv_, nv_, padded.data() + padded_index(i, 0));
}

}  // namespace detail

std::pair<Velocity, Velocity> collision_transform(Velocity v, Velocity v_star, Velocity w) {
  const double wn = std::hypot(w[0], w[1]);
  if (!(std::abs(wn - 1.0) <= 1e-12))
    throw ValidationError("collision_transform: omega is not a unit vector");
  const double dot = (v[0] - v_star[0]) * w[0] + (v[1] - v_star[1]) * w[1];
  return {Velocity{v[0] - dot * w[0], v[1] - dot * w[1]},
          Velocity{v_star[0] + dot * w[0], v_star[1] + dot * w[1]}};
}

CollisionOperator::CollisionOperator(PhaseGrid grid, CollisionKernelSpec spec, unsigned workers)
    : grid_(std::move(grid)),
      spec_(std::move(spec)),
      workers_(workers),
      stencils_(std::make_unique<detail::StencilSet>(grid_, spec_)) {}

CollisionOperator::~CollisionOperator() = default;
CollisionOperator::CollisionOperator(CollisionOperator&&) noexcept = default;
CollisionOperator& CollisionOperator::operator=(CollisionOperator&&) noexcept = default;

std::vector<double> CollisionOperator::loss_rate(const DistributionFunction& f) const {
  if (!f.grid().same_shape(grid_)) throw ValidationError("loss_rate: grid mismatch");
  const int n = grid_.Nv();
  const auto A = stencils_->angular_average();
  const double dv2 = grid_.v_volume();
  std::vector<double> out(grid_.size(), 0.0);
  parallel_for(grid_.space_count(), workers_, [&](std::size_t ix) {
    auto src = f.slice(ix);
    double* dst = out.data() + ix * grid_.velocity_count();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int is = 0; is < n; ++is) {
          const double* row = src.data() + std::size_t(is) * n;
          const double* arow = A.data() + stencils_->offset_index(i - is, j);
          // arow[-js] == A(i - is, j - js)
          for (int js = 0; js < n; ++js) sum += row[js] * arow[-js];
        }
        dst[i * n + j] = sum * dv2;
      }
    }
  });
  return out;
}

std::vector<double> CollisionOperator::gain(const DistributionFunction& f,
                                            const DistributionFunction& ff) const {
  if (!f.grid().same_shape(grid_) || !ff.grid().same_shape(grid_))
    throw ValidationError("q_gain: grid mismatch");
  const int n = grid_.Nv();
  const detail::StencilSet& st = *stencils_;
  const std::ptrdiff_t P = st.stride();
  std::vector<double> out(grid_.size(), 0.0);

  parallel_chunks(grid_.space_count(), workers_, [&](std::size_t begin, std::size_t end) {
    std::vector<double> fp(st.padded_size()), gp(st.padded_size());
    for (std::size_t ix = begin; ix < end; ++ix) {
      st.pad_slice(f.slice(ix), fp);
      st.pad_slice(ff.slice(ix), gp);
      double* dst = out.data() + ix * grid_.velocity_count();
      for (const detail::CollisionStencil& s : st.stencils()) {
        const double wt = s.weight;
        const auto& wa = s.w_prime;
        const auto& wb = s.w_partner;
        for (int i = s.i_lo; i < s.i_hi; ++i) {
          const double* pa = fp.data() + st.padded_index(i, 0) + s.off_prime;
          const double* pb = gp.data() + st.padded_index(i, 0) + s.off_partner;
          double* o = dst + std::size_t(i) * n;
          for (int j = s.j_lo; j < s.j_hi; ++j) {
            const double va = wa[0] * pa[j] + wa[1] * pa[j + 1] + wa[2] * pa[j + P] +
                              wa[3] * pa[j + P + 1];
            const double vb = wb[0] * pb[j] + wb[1] * pb[j + 1] + wb[2] * pb[j + P] +
                              wb[3] * pb[j + P + 1];
            o[j] += wt * va * vb;
          }
        }
      }
    }
  });
  return out;
}

CollisionField CollisionOperator::raw(const DistributionFunction& f,
                                      const DistributionFunction& ff) const {
  CollisionField cf;
  cf.grid = grid_;
  cf.gain = gain(f, ff);
  cf.rate = loss_rate(ff);
  cf.loss = cf.rate;
  auto fv = f.values();
  for (std::size_t i = 0; i < cf.loss.size(); ++i) cf.loss[i] *= fv[i];
  return cf;
}

CollisionField CollisionOperator::evaluate(const DistributionFunction& f,
                                           const SpatialCoupling& coupling) const {
  CollisionField cf = std::holds_alternative<LocalCollisions>(coupling)
                          ? raw(f, f)
                          : raw(f, mollify(f, coupling, workers_));
  Projection p = conserve_project(cf, f, workers_);
  cf.net = std::move(p.net);
  cf.skipped = std::move(p.skipped);
  cf.projection_l1 = p.correction_l1;
  return cf;
}

CollisionField CollisionOperator::renormalized(const DistributionFunction& f,
                                               const DistributionFunction& ff,
                                               double alpha) const {
  if (!(alpha >= 0.0)) throw ValidationError("q_renormalized: alpha must be >= 0");
  return renormalize(raw(f, ff), f, alpha);
}

CollisionField renormalize(CollisionField cf, const DistributionFunction& f, double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("renormalize: alpha must be >= 0");
  if (alpha == 0.0) return cf;
  auto fv = f.values();
  auto divide = [&](std::vector<double>& a) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] /= 1.0 + alpha * fv[i];
  };
  divide(cf.gain);
  divide(cf.loss);
  if (cf.projected()) divide(cf.net);
  return cf;
}

Projection conserve_project(const CollisionField& cf, const DistributionFunction& f,
                            unsigned workers) {
  const PhaseGrid& g = cf.grid;
  if (!f.grid().same_shape(g)) throw ValidationError("conserve_project: grid mismatch");
  const std::size_t nv = g.velocity_count();
  Projection p;
  p.net.resize(g.size());
  p.skipped.assign(g.space_count(), 0);
  std::vector<double> corr_l1(g.space_count(), 0.0);

  std::vector<std::array<double, 4>> psi(nv);
  for (std::size_t iv = 0; iv < nv; ++iv) {
    const Velocity v = g.velocity(iv);
    psi[iv] = {1.0, v[0], v[1], v[0] * v[0] + v[1] * v[1]};
  }

  parallel_for(g.space_count(), workers, [&](std::size_t ix) {
    auto fs = f.slice(ix);
    const double* gain = cf.gain.data() + ix * nv;
    const double* loss = cf.loss.data() + ix * nv;
    double* net = p.net.data() + ix * nv;
    for (std::size_t iv = 0; iv < nv; ++iv) net[iv] = gain[iv] - loss[iv];

    Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
    for (std::size_t iv = 0; iv < nv; ++iv)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) gram(a, b) += psi[iv][a] * psi[iv][b] * fs[iv];
    Eigen::FullPivLU<Eigen::Matrix4d> lu(gram);
    if (gram.cwiseAbs().maxCoeff() == 0.0 || lu.rank() < 4) {
      p.skipped[ix] = 1;
      return;
    }
    auto residual = [&] {
      Eigen::Vector4d r = Eigen::Vector4d::Zero();
      for (std::size_t iv = 0; iv < nv; ++iv)
        for (int a = 0; a < 4; ++a) r(a) += net[iv] * psi[iv][a];
      return r;
    };
    Eigen::Vector4d lambda = Eigen::Vector4d::Zero();
    // One refinement pass on top of the first solve.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::Vector4d delta = lu.solve(residual());
      lambda += delta;
      for (std::size_t iv = 0; iv < nv; ++iv) {
        const double c = psi[iv][0] * lambda(0) + psi[iv][1] * lambda(1) +
                         psi[iv][2] * lambda(2) + psi[iv][3] * lambda(3);
        net[iv] = (gain[iv] - loss[iv]) - c * fs[iv];
      }
    }
    double l1 = 0.0;
    for (std::size_t iv = 0; iv < nv; ++iv) l1 += std::abs((gain[iv] - loss[iv]) - net[iv]);
    corr_l1[ix] = l1;
  });
  for (double c : corr_l1) p.correction_l1 += c;
  p.correction_l1 *= g.phase_volume();
  return p;
}

}  // namespace fbz

#include "fbz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fbz/error.hpp"
#include "fbz/parallel.hpp"

namespace fbz {

CollisionKernelSpec CollisionKernelSpec::constant(double mu, double value) {
  CollisionKernelSpec s;
  s.mu_ = mu;
  s.constant_ = true;
  s.table_.assign(kProfileNodes, value);
  s.finish();
  return s;
}

CollisionKernelSpec CollisionKernelSpec::from_samples(double mu,
                                                      const std::vector<double>& samples) {
  if (samples.size() < 2) throw ValidationError("kernel: b profile needs at least two samples");
  CollisionKernelSpec s;
  s.mu_ = mu;
  s.constant_ = false;
  s.table_.resize(kProfileNodes);
  const double last = static_cast<double>(samples.size() - 1);
  for (int i = 0; i < kProfileNodes; ++i) {
    const double pos = last * i / (kProfileNodes - 1);
    const auto lo = std::min<std::size_t>(static_cast<std::size_t>(pos), samples.size() - 2);
    const double t = pos - lo;
    s.table_[i] = samples[lo] + t * (samples[lo + 1] - samples[lo]);
  }
  s.finish();
  return s;
}

void CollisionKernelSpec::finish() {
  if (!(mu_ >= 0.0 && mu_ <= 1.0)) throw ValidationError("kernel: mu must lie in [0, 1]");
  for (double v : table_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("kernel: b profile must be finite and nonnegative");
  sup_b_ = *std::max_element(table_.begin(), table_.end());
  if (!constant_) {
    const double first = table_.front();
    constant_ = std::all_of(table_.begin(), table_.end(), [&](double v) { return v == first; });
  }
}

double CollisionKernelSpec::b(double theta) const noexcept {
  if (constant_) return table_.front();
  const double pos = std::clamp(theta / std::numbers::pi, 0.0, 1.0) * (kProfileNodes - 1);
  const int lo = std::min(static_cast<int>(pos), kProfileNodes - 2);
  const double t = pos - lo;
  return table_[lo] + t * (table_[lo + 1] - table_[lo]);
}

double eval_B(const CollisionKernelSpec& spec, Velocity g, Velocity w) {
  const double wn = std::hypot(w[0], w[1]);
  if (!(std::abs(wn - 1.0) <= 1e-12)) throw ValidationError("eval_B: omega is not a unit vector");
  const double gn = std::hypot(g[0], g[1]);
  if (gn == 0.0) return spec.mu() > 0.0 ? 0.0 : spec.b(0.5 * std::numbers::pi);
  const double speed = spec.mu() == 0.0 ? 1.0 : spec.mu() == 1.0 ? gn : std::pow(gn, spec.mu());
  if (spec.is_constant()) return speed * spec.b(0.0);
  const double c = std::min(1.0, std::abs(g[0] * w[0] + g[1] * w[1]) / gn);
  return speed * spec.b(std::acos(c));
}

double eval_A(const CollisionKernelSpec& spec, const PhaseGrid& grid, Velocity g) {
  double sum = 0.0;
  for (const Velocity& w : grid.omegas()) sum += eval_B(spec, g, w);
  return sum * grid.dw();
}

double scan_kernel_cap(const CollisionKernelSpec& spec, const PhaseGrid& grid) {
  double worst = 0.0;
  const int n = grid.Nv();
  const double h = grid.dv_cell();
  for (int a = -(n - 1); a <= n - 1; ++a) {
    for (int b = -(n - 1); b <= n - 1; ++b) {
      const Velocity g{a * h, b * h};
      const double bracket = std::pow(1.0 + g[0] * g[0] + g[1] * g[1], 0.5 * spec.mu());
      for (const Velocity& w : grid.omegas()) worst = std::max(worst, eval_B(spec, g, w) / bracket);
    }
  }
  return worst;
}

double mollifier_normaliser(int d) {
  if (d == 1) return 2.0 * std::cyl_bessel_k(1.0, 1.0);
  if (d == 2) return 4.0 * std::numbers::pi / std::numbers::e;
  throw ValidationError("mollifier_normaliser: dimension must be 1 or 2");
}

double SpatialKernel::max_weight() const { return *std::max_element(weights.begin(), weights.end()); }

SpatialKernel build_spatial_kernel(double sigma, const PhaseGrid& grid, int K_images) {
  if (!(sigma > 0.0 && sigma <= 1.0))
    throw ValidationError("spatial kernel: sigma must lie in (0, 1]; use mode=local for the classical limit");
  if (K_images < 1) throw ValidationError("spatial kernel: K_images must be >= 1");

  SpatialKernel k;
  k.sigma = sigma;
  k.K_images = K_images;
  k.dx = grid.dx();
  k.Nx = grid.Nx();
  k.x_volume = grid.x_volume();

  const int d = grid.dx();
  const double scale = std::pow(sigma, -0.5 * d) / mollifier_normaliser(d);
  const double L = grid.Lx();
  const double h = grid.dx_cell();
  // kappa is radial, so evaluating at |centred offset| makes w(x) == w(-x) bitwise.
  auto periodised = [&](int m0, int m1) {
    double sum = 0.0;
    for (int k0 = -K_images; k0 <= K_images; ++k0) {
      const double y0 = m0 * h + k0 * L;
      if (d == 1) {
        sum += std::exp(-std::sqrt(1.0 + y0 * y0 / sigma));
        continue;
      }
      for (int k1 = -K_images; k1 <= K_images; ++k1) {
        const double y1 = m1 * h + k1 * L;
        sum += std::exp(-std::sqrt(1.0 + (y0 * y0 + y1 * y1) / sigma));
      }
    }
    return scale * sum;
  };
  auto centred = [&](int i) { return std::abs(2 * i < grid.Nx() ? i : i - grid.Nx()); };

  k.weights.resize(grid.space_count());
  for (std::size_t ix = 0; ix < grid.space_count(); ++ix) {
    const auto idx = grid.space_index(ix);
    k.weights[ix] = periodised(centred(idx[0]), d == 2 ? centred(idx[1]) : 0);
  }
  double total = 0.0;
  for (double w : k.weights) total += w;
  const double norm = 1.0 / (total * grid.x_volume());
  for (double& w : k.weights) w *= norm;
  return k;
}

DistributionFunction convolve_x(const DistributionFunction& f, const SpatialKernel& k,
                                unsigned workers) {
  const PhaseGrid& g = f.grid();
  if (k.dx != g.dx() || k.Nx != g.Nx() || k.weights.size() != g.space_count())
    throw ValidationError("convolve_x: kernel built for a different grid");
  DistributionFunction out(g);
  const std::size_t nv = g.velocity_count();
  const std::size_t ns = g.space_count();
  std::vector<double> scaled(k.weights.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = k.weights[i] * g.x_volume();

  parallel_for(ns, workers, [&](std::size_t ix) {
    const auto xi = g.space_index(ix);
    auto dst = out.slice(ix);
    auto self = f.slice(ix);
    std::copy(self.begin(), self.end(), dst.begin());
    for (std::size_t ko = 1; ko < ns; ++ko) {
      const auto off = g.space_index(ko);
      std::array<int, 2> src_idx{(xi[0] - off[0] + g.Nx()) % g.Nx(),
                                 (xi[1] - off[1] + g.Nx()) % g.Nx()};
      const std::size_t src =
          g.dx() == 1 ? std::size_t(src_idx[0]) : std::size_t(src_idx[0]) * g.Nx() + src_idx[1];
      const double w = scaled[ko];
      auto other = f.slice(src);
      for (std::size_t iv = 0; iv < nv; ++iv) dst[iv] += w * (other[iv] - self[iv]);
    }
    for (double& v : dst) v = std::max(v, 0.0);
  });
  return out;
}

DistributionFunction mollify(const DistributionFunction& f, const SpatialCoupling& coupling,
                             unsigned workers) {
  if (const auto* k = std::get_if<SpatialKernel>(&coupling)) return convolve_x(f, *k, workers);
  return f;
}

std::string describe(const SpatialCoupling& coupling) {
  if (const auto* k = std::get_if<SpatialKernel>(&coupling)) {
    std::ostringstream os;
    os.precision(17);
    os << "fuzzy(sigma=" << k->sigma << ", K_images=" << k->K_images << ")";
    return os.str();
  }
  return "local";
}

}  // namespace fbz

#include "brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fbz::oracle {

std::vector<double> spatial_weights(double sigma, const PhaseGrid& grid, int K_images) {
  const int d = grid.dx();
  const double L = grid.Lx();
  const double Z = d == 1 ? 2.0 * std::cyl_bessel_k(1.0, 1.0) : 4.0 * std::numbers::pi / std::numbers::e;
  auto kappa = [&](double r2) {
    return std::pow(sigma, -0.5 * d) * std::exp(-std::sqrt(1.0 + r2 / sigma)) / Z;
  };
  auto wrap = [&](double y) { return y - L * std::floor(y / L + 0.5); };
  std::vector<double> w(grid.space_count());
  double total = 0.0;
  for (std::size_t ix = 0; ix < w.size(); ++ix) {
    const auto idx = grid.space_index(ix);
    const double y0 = std::abs(wrap(grid.x_node(idx[0])));
    const double y1 = d == 2 ? std::abs(wrap(grid.x_node(idx[1]))) : 0.0;
    double s = 0.0;
    for (int a = -K_images; a <= K_images; ++a) {
      if (d == 1) {
        s += kappa((y0 + a * L) * (y0 + a * L));
        continue;
      }
      for (int b = -K_images; b <= K_images; ++b)
        s += kappa((y0 + a * L) * (y0 + a * L) + (y1 + b * L) * (y1 + b * L));
    }
    w[ix] = s;
    total += s;
  }
  for (double& v : w) v /= total * grid.x_volume();
  return w;
}

DistributionFunction convolve(const DistributionFunction& f, double sigma, int K_images) {
  const PhaseGrid& g = f.grid();
  const auto w = spatial_weights(sigma, g, K_images);
  DistributionFunction out(g);
  const int N = g.Nx();
  for (std::size_t x = 0; x < g.space_count(); ++x) {
    const auto xi = g.space_index(x);
    for (std::size_t y = 0; y < g.space_count(); ++y) {
      const auto yi = g.space_index(y);
      const int o0 = ((xi[0] - yi[0]) % N + N) % N;
      const int o1 = ((xi[1] - yi[1]) % N + N) % N;
      const double wt = w[g.dx() == 1 ? std::size_t(o0) : std::size_t(o0) * N + o1] * g.x_volume();
      for (std::size_t iv = 0; iv < g.velocity_count(); ++iv) out(x, iv) += wt * f(y, iv);
    }
  }
  return out;
}

double interpolate(const DistributionFunction& f, std::size_t ix, Velocity v) {
  const PhaseGrid& g = f.grid();
  const int n = g.Nv();
  const double h = g.dv_cell();
  auto snap = [](double p) {
    const double r = std::round(p);
    return std::abs(p - r) < 1e-12 ? r : p;
  };
  const double p0 = snap((v[0] - g.v_node(0)) / h);
  const double p1 = snap((v[1] - g.v_node(0)) / h);
  const int i0 = static_cast<int>(std::floor(p0));
  const int j0 = static_cast<int>(std::floor(p1));
  const double t0 = p0 - i0;
  const double t1 = p1 - j0;
  auto at = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
    return f(ix, std::size_t(i) * n + j);
  };
  return (1 - t0) * (1 - t1) * at(i0, j0) + (1 - t0) * t1 * at(i0, j0 + 1) +
         t0 * (1 - t1) * at(i0 + 1, j0) + t0 * t1 * at(i0 + 1, j0 + 1);
}

double kernel_B(const CollisionKernelSpec& spec, Velocity g, Velocity w) {
  const double r = std::sqrt(g[0] * g[0] + g[1] * g[1]);
  if (r == 0.0) return spec.mu() > 0.0 ? 0.0 : spec.b(std::numbers::pi / 2);
  const double c = std::min(1.0, std::abs(g[0] * w[0] + g[1] * w[1]) / r);
  return std::pow(r, spec.mu()) * spec.b(std::acos(c));
}

std::vector<double> gain(const DistributionFunction& f, const DistributionFunction& ff,
                         const CollisionKernelSpec& spec) {
  const PhaseGrid& g = f.grid();
  const std::size_t nv = g.velocity_count();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.space_count(); ++x) {
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const Velocity v = g.velocity(iv);
      double sum = 0.0;
      for (std::size_t is = 0; is < nv; ++is) {
        const Velocity vs = g.velocity(is);
        const Velocity rel{v[0] - vs[0], v[1] - vs[1]};
        for (const Velocity& w : g.omegas()) {
          const double dot = rel[0] * w[0] + rel[1] * w[1];
          const Velocity vp{v[0] - dot * w[0], v[1] - dot * w[1]};
          const Velocity vsp{vs[0] + dot * w[0], vs[1] + dot * w[1]};
          sum += kernel_B(spec, rel, w) * interpolate(f, x, vp) * interpolate(ff, x, vsp);
        }
      }
      out[x * nv + iv] = sum * g.v_volume() * g.dw();
    }
  }
  return out;
}

std::vector<double> loss_rate(const DistributionFunction& ff, const CollisionKernelSpec& spec) {
  const PhaseGrid& g = ff.grid();
  const std::size_t nv = g.velocity_count();
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t x = 0; x < g.space_count(); ++x) {
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const Velocity v = g.velocity(iv);
      double sum = 0.0;
      for (std::size_t is = 0; is < nv; ++is) {
        const Velocity vs = g.velocity(is);
        const Velocity rel{v[0] - vs[0], v[1] - vs[1]};
        double A = 0.0;
        for (const Velocity& w : g.omegas()) A += kernel_B(spec, rel, w);
        sum += A * ff(x, is);
      }
      out[x * nv + iv] = sum * g.v_volume() * g.dw();
    }
  }
  return out;
}

std::vector<double> dissipation_field(const DistributionFunction& f,
                                      const CollisionKernelSpec& spec, double sigma,
                                      int K_images) {
  const PhaseGrid& g = f.grid();
  const std::size_t nv = g.velocity_count();
  const std::size_t ns = g.space_count();
  const int N = g.Nx();
  const std::vector<double> w = sigma > 0.0 ? spatial_weights(sigma, g, K_images) : std::vector<double>{};
  const double floor_log = std::log(1e-30);
  auto safe_log = [&](double p) { return p >= 1e-30 ? std::log(p) : floor_log; };

  std::vector<double> h(g.size(), 0.0);
  for (std::size_t x = 0; x < ns; ++x) {
    const auto xi = g.space_index(x);
    for (std::size_t xs = 0; xs < ns; ++xs) {
      double W = 1.0;
      if (sigma > 0.0) {
        const auto yi = g.space_index(xs);
        const int o0 = ((xi[0] - yi[0]) % N + N) % N;
        const int o1 = ((xi[1] - yi[1]) % N + N) % N;
        W = w[g.dx() == 1 ? std::size_t(o0) : std::size_t(o0) * N + o1] * g.x_volume();
      } else if (xs != x) {
        continue;
      }
      for (std::size_t iv = 0; iv < nv; ++iv) {
        const Velocity v = g.velocity(iv);
        double sum = 0.0;
        for (std::size_t is = 0; is < nv; ++is) {
          const Velocity vs = g.velocity(is);
          const Velocity rel{v[0] - vs[0], v[1] - vs[1]};
          const double F = f(x, iv) * f(xs, is);
          for (const Velocity& om : g.omegas()) {
            const double dot = rel[0] * om[0] + rel[1] * om[1];
            const Velocity vp{v[0] - dot * om[0], v[1] - dot * om[1]};
            const Velocity vsp{vs[0] + dot * om[0], vs[1] + dot * om[1]};
            const double Fp = interpolate(f, x, vp) * interpolate(f, xs, vsp);
            const double term = (Fp - F) * (safe_log(Fp) - safe_log(F));
            if (term > 0.0) sum += kernel_B(spec, rel, om) * term;
          }
        }
        h[x * nv + iv] += W * sum * g.v_volume() * g.dw();
      }
    }
  }
  return h;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

}  // namespace fbz::oracle

#include "fbz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/Dense>

#include "fbz/detail/stencil.hpp"
#include "fbz/error.hpp"
#include "fbz/parallel.hpp"

namespace fbz {

double entropy(const DistributionFunction& f) {
  double sum = 0.0;
  for (double v : f.values())
    if (v > 0.0) sum += v * std::log(v);
  return sum * f.grid().phase_volume();
}

double moment_s(const DistributionFunction& f, double s) {
  const PhaseGrid& g = f.grid();
  std::vector<double> weight(g.velocity_count());
  for (std::size_t iv = 0; iv < weight.size(); ++iv) {
    const Velocity v = g.velocity(iv);
    const double r2 = v[0] * v[0] + v[1] * v[1];
    weight[iv] = s == 0.0 ? 1.0 : s == 2.0 ? r2 : std::pow(r2, 0.5 * s);
  }
  double sum = 0.0;
  for (std::size_t ix = 0; ix < g.space_count(); ++ix) {
    auto sl = f.slice(ix);
    for (std::size_t iv = 0; iv < sl.size(); ++iv) sum += weight[iv] * sl[iv];
  }
  return sum * g.phase_volume();
}

std::vector<double> dissipation_field(const DistributionFunction& f,
                                      const SpatialCoupling& coupling,
                                      const CollisionOperator& op) {
  const PhaseGrid& g = op.grid();
  if (!f.grid().same_shape(g)) throw ValidationError("dissipation: grid mismatch");
  const detail::StencilSet& st = op.stencils();
  const std::size_t ns = g.space_count();
  const std::size_t nv = g.velocity_count();
  const int n = g.Nv();
  const std::ptrdiff_t P = st.stride();
  const auto* kernel = std::get_if<SpatialKernel>(&coupling);
  const double log_floor = std::log(kLogFloor);
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<double> padded(ns * st.padded_size());
  std::vector<double> logf(g.size());
  for (std::size_t ix = 0; ix < ns; ++ix)
    st.pad_slice(f.slice(ix), std::span<double>(padded).subspan(ix * st.padded_size(), st.padded_size()));
  {
    auto fv = f.values();
    for (std::size_t i = 0; i < fv.size(); ++i) logf[i] = fv[i] > 0.0 ? std::log(fv[i]) : kNegInf;
  }

  std::vector<double> h(g.size(), 0.0);
  parallel_chunks(ns, op.workers(), [&](std::size_t begin, std::size_t end) {
    // Partners are needed for every x* under a spatial kernel, only the own
    // nodes for local collisions.
    const std::size_t p_begin = kernel ? 0 : begin;
    const std::size_t p_end = kernel ? ns : end;
    std::vector<double> pv((p_end - p_begin) * nv), plog((p_end - p_begin) * nv);
    std::vector<double> av(nv), alog(nv);

    for (const detail::CollisionStencil& s : st.stencils()) {
      for (std::size_t xs = p_begin; xs < p_end; ++xs) {
        const double* base = padded.data() + xs * st.padded_size();
        double* out = pv.data() + (xs - p_begin) * nv;
        double* lout = plog.data() + (xs - p_begin) * nv;
        for (int i = s.i_lo; i < s.i_hi; ++i) {
          const double* pb = base + st.padded_index(i, 0) + s.off_partner;
          for (int j = s.j_lo; j < s.j_hi; ++j) {
            const double val = detail::bilinear(pb + j, P, s.w_partner);
            out[i * n + j] = val;
            lout[i * n + j] = val > 0.0 ? std::log(val) : kNegInf;
          }
        }
      }
      const std::ptrdiff_t shift = std::ptrdiff_t(s.G[0]) * n + s.G[1];
      for (std::size_t x = begin; x < end; ++x) {
        const double* base = padded.data() + x * st.padded_size();
        for (int i = s.i_lo; i < s.i_hi; ++i) {
          const double* pa = base + st.padded_index(i, 0) + s.off_prime;
          for (int j = s.j_lo; j < s.j_hi; ++j) {
            const double val = detail::bilinear(pa + j, P, s.w_prime);
            av[i * n + j] = val;
            alog[i * n + j] = val > 0.0 ? std::log(val) : kNegInf;
          }
        }
        const double* fx = f.slice(x).data();
        const double* lfx = logf.data() + x * nv;
        double* hx = h.data() + x * nv;
        const auto xi = g.space_index(x);
        for (std::size_t xs = p_begin; xs < p_end; ++xs) {
          double W = s.weight;
          if (kernel) {
            W *= kernel->at(xi, g.space_index(xs)) * g.x_volume();
          } else if (xs != x) {
            continue;
          }
          if (W == 0.0) continue;
          const double* fs = f.slice(xs).data();
          const double* lfs = logf.data() + xs * nv;
          const double* bv = pv.data() + (xs - p_begin) * nv;
          const double* blog = plog.data() + (xs - p_begin) * nv;
          for (int i = s.i_lo; i < s.i_hi; ++i) {
            for (int j = s.j_lo; j < s.j_hi; ++j) {
              const std::ptrdiff_t v = std::ptrdiff_t(i) * n + j;
              const std::ptrdiff_t vs = v - shift;
              const double Fp = av[v] * bv[v];
              const double F = fx[v] * fs[vs];
              const double lFp = Fp >= kLogFloor ? alog[v] + blog[v] : log_floor;
              const double lF = F >= kLogFloor ? lfx[v] + lfs[vs] : log_floor;
              const double term = (Fp - F) * (lFp - lF);
              hx[v] += term > 0.0 ? W * term : 0.0;
            }
          }
        }
      }
    }
  });
  return h;
}

double dissipation_from_field(std::span<const double> h, const PhaseGrid& grid) {
  double sum = 0.0;
  for (double v : h) sum += v;
  return 0.25 * sum * grid.phase_volume();
}

double dissipation(const DistributionFunction& f, const SpatialCoupling& coupling,
                   const CollisionOperator& op) {
  const auto h = dissipation_field(f, coupling, op);
  const double D = dissipation_from_field(h, op.grid());
  if (!(D >= 0.0)) throw std::logic_error("dissipation: negative or non-finite value");
  return D;
}

DistributionFunction matched_maxwellian(const DistributionFunction& f) {
  const PhaseGrid& g = f.grid();
  const MomentVector m = moments(f);
  if (!(m.mass > 0.0)) throw ValidationError("matched_maxwellian: zero mass");
  const double volume = std::pow(g.Lx(), g.dx());
  const Velocity u{m.momentum[0] / m.mass, m.momentum[1] / m.mass};
  const double T = 0.5 * (m.energy / m.mass - (u[0] * u[0] + u[1] * u[1]));
  if (!(T > 0.0)) throw ValidationError("matched_maxwellian: nonpositive temperature");
  const double rho = m.mass / volume;

  // M = exp(c . phi(v)) with phi = (1, v1, v2, |v|^2); Newton on c so that the
  // discrete moments of M equal those of f. Starts from the continuum fit.
  const std::size_t nv = g.velocity_count();
  std::vector<Eigen::Vector4d> phi(nv);
  for (std::size_t iv = 0; iv < nv; ++iv) {
    const Velocity v = g.velocity(iv);
    phi[iv] = {1.0, v[0], v[1], v[0] * v[0] + v[1] * v[1]};
  }
  const double w = g.phase_volume() * double(g.space_count());
  const Eigen::Vector4d target{m.mass, m.momentum[0], m.momentum[1], m.energy};
  Eigen::Vector4d c{std::log(rho / (2.0 * std::numbers::pi * T)) - (u[0] * u[0] + u[1] * u[1]) / (2 * T),
                    u[0] / T, u[1] / T, -0.5 / T};
  auto residual = [&](const Eigen::Vector4d& cc, Eigen::Matrix4d* J) {
    Eigen::Vector4d r = -target;
    if (J) J->setZero();
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const double e = std::exp(cc.dot(phi[iv])) * w;
      r += e * phi[iv];
      if (J) *J += e * phi[iv] * phi[iv].transpose();
    }
    return r;
  };
  const double scale = target.cwiseAbs().maxCoeff();
  for (int it = 0; it < 50; ++it) {
    Eigen::Matrix4d J;
    const Eigen::Vector4d r = residual(c, &J);
    if (r.cwiseAbs().maxCoeff() <= 1e-14 * scale) break;
    const Eigen::Vector4d step = J.fullPivLu().solve(r);
    double lambda = 1.0;
    const double r0 = r.norm();
    while (lambda > 1e-6 && residual(c - lambda * step, nullptr).norm() >= r0) lambda *= 0.5;
    c -= lambda * step;
  }

  DistributionFunction out(g);
  std::vector<double> slice(nv);
  for (std::size_t iv = 0; iv < nv; ++iv) slice[iv] = std::exp(c.dot(phi[iv]));
  for (std::size_t ix = 0; ix < g.space_count(); ++ix)
    std::copy(slice.begin(), slice.end(), out.slice(ix).begin());
  return out;
}

EntropyInequalityReport entropy_inequality_check(const Trajectory& traj, double tol_H) {
  if (traj.records.empty()) throw ValidationError("entropy check: empty trajectory");
  for (const DiagnosticsRecord& r : traj.records)
    if (!r.D_fresh)
      throw ValidationError("entropy check: dissipation series missing (needs D at every step)");
  EntropyInequalityReport rep;
  rep.tol = tol_H;
  const double H0 = traj.records.front().H;
  double integral = 0.0;
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const DiagnosticsRecord& r = traj.records[i];
    if (i > 0) {
      const DiagnosticsRecord& p = traj.records[i - 1];
      integral += 0.5 * (r.t - p.t) * (r.D + p.D);
      rep.max_H_increase = i == 1 ? r.H - p.H : std::max(rep.max_H_increase, r.H - p.H);
    }
    const double S = r.H - H0 + integral;
    rep.t.push_back(r.t);
    rep.S.push_back(S);
    rep.max_S = i == 0 ? S : std::max(rep.max_S, S);
    rep.max_abs_S = std::max(rep.max_abs_S, std::abs(S));
  }
  rep.pass = rep.max_S <= tol_H;
  return rep;
}

ComparisonReport comparison_check(const DistributionFunction& f,
                                  const SpatialCoupling& coupling,
                                  const CollisionOperator& op,
                                  const std::vector<double>& C_values) {
  for (double C : C_values)
    if (!(C > 1.0)) throw ValidationError("comparison_check: every C must exceed 1");
  const CollisionField cf = op.raw(f, mollify(f, coupling, op.workers()));
  const auto h = dissipation_field(f, coupling, op);
  ComparisonReport rep;
  for (double v : cf.gain) rep.scale = std::max(rep.scale, v);
  for (double C : C_values) {
    const double inv_log = 1.0 / std::log(C);
    double worst = 0.0;
    for (std::size_t i = 0; i < cf.gain.size(); ++i)
      worst = std::max(worst, cf.gain[i] - C * cf.loss[i] - h[i] * inv_log);
    rep.per_C.push_back(worst);
    rep.max_defect = std::max(rep.max_defect, worst);
  }
  return rep;
}

std::string moment_label(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "M_%g", s);
  return buf;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
                           const std::vector<double>& moment_orders,
                           const std::vector<std::string>& residual_names) {
  out << "t,mass,px,py,energy,H,D,clipped_mass,projection_l1";
  for (double s : moment_orders) out << ',' << moment_label(s);
  for (const auto& name : residual_names) out << ',' << name;
  out << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const DiagnosticsRecord& r : records) {
    const double fields[] = {r.t,      r.moments.mass, r.moments.momentum[0], r.moments.momentum[1],
                             r.moments.energy, r.H,  r.D, r.clipped_mass, r.projection_l1};
    bool first = true;
    for (double v : fields) {
      if (!first) out << ',';
      first = false;
      put(v);
    }
    for (std::size_t i = 0; i < moment_orders.size(); ++i) {
      out << ',';
      put(i < r.M_s.size() ? r.M_s[i] : 0.0);
    }
    for (std::size_t i = 0; i < residual_names.size(); ++i) {
      out << ',';
      put(i < r.residuals.size() ? r.residuals[i] : 0.0);
    }
    out << '\n';
  }
}

}  // namespace fbz

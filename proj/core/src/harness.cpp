#include "fbz/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "fbz/diagnostics.hpp"
#include "fbz/error.hpp"
#include "fbz/snapshot_io.hpp"

namespace fbz {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_flag(RateFit& fit, const std::string& f) {
  if (!fit.has_flag(f)) fit.flags.push_back(f);
}

struct Distances {
  double sup_l1 = 0.0;
  double final_l1 = 0.0;
  double vavg_weighted = 0.0;
  double vavg_density = 0.0;
};

// Sum over x of |sum_v d(x, v) phi(v)| dv^2 dx^dx.
double velocity_average_distance(const DistributionFunction& f, const DistributionFunction& g,
                                 std::span<const double> phi) {
  const PhaseGrid& grid = f.grid();
  double total = 0.0;
  for (std::size_t ix = 0; ix < grid.space_count(); ++ix) {
    auto a = f.slice(ix);
    auto b = g.slice(ix);
    double s = 0.0;
    for (std::size_t iv = 0; iv < a.size(); ++iv) s += (a[iv] - b[iv]) * phi[iv];
    total += std::abs(s);
  }
  return total * grid.phase_volume();
}

std::string describe_reference(const SimConfig& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "local; dx=%d Lx=%g Nx=%d vmax=%g Nv=%d Nomega=%d mu=%g b=%s ic=%s T=%g dt=%g",
                c.grid.dx, c.grid.Lx, c.grid.Nx, c.grid.vmax, c.grid.Nv, c.grid.Nomega,
                c.kernel.mu, c.kernel.b_profile.c_str(), c.ic.id.c_str(), c.T_final, c.dt);
  return buf;
}

}  // namespace

bool RateFit::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

RateFit fit_rate(std::span<const double> distances, std::span<const double> sigmas) {
  if (distances.size() != sigmas.size())
    throw ValidationError("fit_rate: distances and sigmas differ in length");
  RateFit fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    const double s = sigmas[i];
    if (!std::isfinite(d) || d < 0.0) throw ValidationError("fit_rate: distance must be >= 0");
    if (!(s > 0.0)) throw ValidationError("fit_rate: sigma must be > 0");
    if (d == 0.0) {
      add_flag(fit, "zero_distance_excluded");
      continue;
    }
    lx.push_back(std::log(s));
    ly.push_back(std::log(d));
  }
  fit.points_used = static_cast<int>(lx.size());
  if (lx.size() < 2) {
    add_flag(fit, "undefined");
    return fit;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) {
    add_flag(fit, "undefined");
    return fit;
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  // A constant series is fitted exactly by the flat line.
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.p_hat = std::abs(slope) < 1e-12 ? 0.0 : slope;
  if (*fit.p_hat <= 0.0) add_flag(fit, "non_convergent");
  return fit;
}

std::vector<double> SweepReport::sigmas() const {
  std::vector<double> s;
  for (const auto& r : rows) s.push_back(r.sigma);
  return s;
}

SweepReport run_sweep(const SimConfig& base, std::span<const double> sigmas,
                      const SweepOptions& options) {
  if (sigmas.empty()) throw ValidationError("run_sweep: empty sigma list");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0 && sigmas[i] <= 1.0))
      throw ValidationError("run_sweep: sigma must lie in (0, 1]");
    if (i > 0 && !(sigmas[i] < sigmas[i - 1]))
      throw ValidationError("run_sweep: sigma list must be strictly decreasing");
  }

  SimConfig ref_cfg = base;
  ref_cfg.mode = CouplingMode::Local;
  ref_cfg.dissipation_stride = 0;
  const Trajectory ref = run(ref_cfg);

  const PhaseGrid grid = build_grid(base.grid);
  std::vector<double> phi_w(grid.velocity_count()), phi_1(grid.velocity_count(), 1.0);
  for (std::size_t iv = 0; iv < phi_w.size(); ++iv) {
    const Velocity v = grid.velocity(iv);
    phi_w[iv] = 1.0 / (1.0 + v[0] * v[0] + v[1] * v[1]);
  }

  auto one = [&](double sigma, unsigned workers) {
    SimConfig cfg = base;
    cfg.mode = CouplingMode::Fuzzy;
    cfg.sigma = sigma;
    cfg.dissipation_stride = 0;
    cfg.workers = workers;
    Distances d;
    std::size_t index = 0;
    RunOptions ro;
    ro.keep_snapshots = false;
    ro.on_snapshot = [&](const TimedDistribution& s) {
      if (index >= ref.snapshots.size() || ref.snapshots[index].t != s.t)
        throw ValidationError("run_sweep: snapshot times differ from the reference");
      const DistributionFunction& r = ref.snapshots[index].f;
      if (!r.grid().same_shape(s.f.grid())) throw ValidationError("run_sweep: grid mismatch");
      const double l1 = l1_distance(s.f, r);
      d.sup_l1 = std::max(d.sup_l1, l1);
      d.final_l1 = l1;
      d.vavg_weighted = std::max(d.vavg_weighted, velocity_average_distance(s.f, r, phi_w));
      d.vavg_density = std::max(d.vavg_density, velocity_average_distance(s.f, r, phi_1));
      ++index;
    };
    run(cfg, ro);
    if (index != ref.snapshots.size())
      throw ValidationError("run_sweep: snapshot count differs from the reference");
    return d;
  };

  std::vector<Distances> results(sigmas.size());
  if (options.parallel && sigmas.size() > 1) {
    std::vector<std::exception_ptr> errors(sigmas.size());
    {
      std::vector<std::jthread> threads;
      for (std::size_t i = 0; i < sigmas.size(); ++i) {
        threads.emplace_back([&, i] {
          try {
            results[i] = one(sigmas[i], 1);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  } else {
    for (std::size_t i = 0; i < sigmas.size(); ++i) results[i] = one(sigmas[i], base.workers);
  }

  SweepReport report;
  report.reference = describe_reference(ref_cfg);
  report.reference_final = ref.snapshots.back().f;
  report.reference_final_time = ref.snapshots.back().t;
  std::vector<double> sups;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const Distances& d = results[i];
    report.rows.push_back({sigmas[i], d.sup_l1, d.final_l1,
                           std::max(d.vavg_weighted, d.vavg_density), d.vavg_weighted,
                           d.vavg_density});
    sups.push_back(d.sup_l1);
  }
  report.fit = fit_rate(sups, sigmas);
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
  out << "sigma,sup_l1,final_l1,vavg_l1\n";
  for (const auto& r : report.rows)
    out << num(r.sigma) << ',' << num(r.sup_l1) << ',' << num(r.final_l1) << ','
        << num(r.vavg_l1) << '\n';
  out << "p_hat," << (report.fit.p_hat ? num(*report.fit.p_hat) : std::string("undefined"))
      << '\n';
  out << "r_squared," << (report.fit.p_hat ? num(report.fit.r_squared) : std::string("undefined"))
      << '\n';
}

void write_sweep_summary(std::ostream& out, const SweepReport& report) {
  char buf[256];
  out << "reference: " << report.reference << '\n';
  out << "     sigma        sup_l1      final_l1   vavg(<v>^-2)     vavg(1)\n";
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%10.4g  %12.5e  %12.5e  %12.5e  %12.5e\n", r.sigma, r.sup_l1,
                  r.final_l1, r.vavg_weighted, r.vavg_density);
    out << buf;
  }
  if (report.fit.p_hat) {
    std::snprintf(buf, sizeof buf, "p_hat = %.4f  (R^2 = %.4f, %d points)\n", *report.fit.p_hat,
                  report.fit.r_squared, report.fit.points_used);
    out << buf;
  } else {
    out << "p_hat undefined\n";
  }
  if (!report.fit.flags.empty()) {
    out << "flags:";
    for (const auto& f : report.fit.flags) out << ' ' << f;
    out << '\n';
  }
}

Trajectory run_to_directory(const SimConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  long counter = 0;
  RunOptions ro;
  ro.keep_snapshots = false;
  ro.on_snapshot = [&](const TimedDistribution& s) {
    const long step = std::lround(s.t / config.dt);
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%06ld.fbz1", step);
    write_snapshot(config.output_dir / name, s.f, s.t);
    ++counter;
  };
  Trajectory traj = run(config, ro);
  std::ofstream csv(config.output_dir / "diagnostics.csv");
  if (!csv) throw ValidationError("cannot write " + (config.output_dir / "diagnostics.csv").string());
  write_diagnostics_csv(csv, traj.records, traj.moment_orders);
  return traj;
}

}  // namespace fbz

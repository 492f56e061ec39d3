#include "fbz/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fbz/diagnostics.hpp"
#include "fbz/error.hpp"
#include "fbz/snapshot_io.hpp"

namespace fbz {

void SimConfig::validate() const {
  build_grid(grid);
  build_kernel(kernel);
  if (mode == CouplingMode::Fuzzy && !(sigma > 0.0 && sigma <= 1.0))
    throw ValidationError("sigma must lie in (0, 1]; use mode=local for the classical limit");
  if (kernel.K_images < 1) throw ValidationError("kernel.K_images must be >= 1");
  if (!(T_final >= 0.0) || !std::isfinite(T_final)) throw ValidationError("time.T_final must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time.dt must be positive");
  if (T_final > 0.0 && T_final < dt * (1.0 - 1e-12))
    throw ValidationError("time.T_final must be >= time.dt");
  if (!(cfl_eta > 0.0 && cfl_eta < 1.0)) throw ValidationError("time.cfl_eta must lie in (0, 1)");
  if (output_stride < 1) throw ValidationError("output.stride must be >= 1");
  if (dissipation_stride < 0) throw ValidationError("diag.dissipation_stride must be >= 0");
  for (double s : moment_orders)
    if (!(s >= 0.0)) throw ValidationError("diag.moments entries must be >= 0");
}

PhaseGrid build_grid(const GridParams& p) {
  return make_grid(p.dx, p.Lx, p.Nx, p.vmax, p.Nv, p.Nomega);
}

CollisionKernelSpec build_kernel(const KernelParams& p) {
  if (p.b_profile == "constant") return CollisionKernelSpec::constant(p.mu, p.b_value);
  if (p.b_profile == "cos2") {
    const double b0 = p.b_value;
    return CollisionKernelSpec::tabulated(p.mu, [b0](double t) { return b0 * std::cos(t) * std::cos(t); });
  }
  if (p.b_profile == "table") return CollisionKernelSpec::from_samples(p.mu, p.b_table);
  throw ValidationError("kernel.b: unknown profile '" + p.b_profile + "'");
}

SpatialCoupling build_coupling(const SimConfig& c, const PhaseGrid& grid) {
  if (c.mode == CouplingMode::Local) return LocalCollisions{};
  return build_spatial_kernel(c.sigma, grid, c.kernel.K_images);
}

DistributionFunction initial_condition(const InitialConditionSpec& ic, const PhaseGrid& grid,
                                       std::uint64_t seed) {
  if (!(ic.rho >= 0.0)) throw ValidationError("ic.rho must be >= 0");
  if (!(std::abs(ic.a) < 1.0)) throw ValidationError("ic.a must satisfy |a| < 1");
  if (!(ic.noise >= 0.0 && ic.noise < 1.0)) throw ValidationError("ic.noise must lie in [0, 1)");
  const double two_pi_over_L = 2.0 * std::numbers::pi / grid.Lx();
  auto modulation = [&](std::array<int, 2> idx) {
    return ic.rho * (1.0 + ic.a * std::cos(two_pi_over_L * grid.x_node(idx[0])));
  };

  DistributionFunction f;
  if (ic.id == "maxwellian" || ic.id == "x_modulated_maxwellian") {
    if (!(ic.T > 0.0)) throw ValidationError("ic.T must be positive");
    if (ic.id == "maxwellian" || ic.a == 0.0)
      f = sample_maxwellian(grid, [&](std::array<int, 2>) { return ic.rho; }, {ic.ux, ic.uy}, ic.T);
    else
      f = sample_maxwellian(grid, modulation, {ic.ux, ic.uy}, ic.T);
  } else if (ic.id == "two_bump_v") {
    if (!(ic.T > 0.0)) throw ValidationError("ic.T must be positive");
    auto half = [&](std::array<int, 2> idx) { return 0.5 * modulation(idx); };
    f = sample_maxwellian(grid, half, {ic.ux + ic.bump_offset, ic.uy}, ic.T);
    const DistributionFunction other =
        sample_maxwellian(grid, half, {ic.ux - ic.bump_offset, ic.uy}, ic.T);
    auto fv = f.values();
    auto ov = other.values();
    for (std::size_t i = 0; i < fv.size(); ++i) fv[i] += ov[i];
  } else if (ic.id == "indicator_box") {
    if (!(ic.half_width > 0.0)) throw ValidationError("ic.half_width must be positive");
    f = DistributionFunction(grid);
    std::size_t cells = 0;
    std::vector<char> inside(grid.velocity_count());
    for (std::size_t iv = 0; iv < inside.size(); ++iv) {
      const Velocity v = grid.velocity(iv);
      inside[iv] = std::abs(v[0]) <= ic.half_width && std::abs(v[1]) <= ic.half_width;
      cells += inside[iv];
    }
    if (cells == 0) throw ValidationError("ic.half_width selects no velocity nodes");
    const double volume = static_cast<double>(cells * grid.space_count()) * grid.phase_volume();
    const double value = ic.rho / volume;
    for (std::size_t ix = 0; ix < grid.space_count(); ++ix) {
      auto s = f.slice(ix);
      for (std::size_t iv = 0; iv < s.size(); ++iv) s[iv] = inside[iv] ? value : 0.0;
    }
  } else if (ic.id == "custom_snapshot") {
    Snapshot snap = read_snapshot(ic.path);
    if (!snap.f.grid().same_shape(grid))
      throw ValidationError("ic.path: snapshot grid does not match the configured grid");
    f = std::move(snap.f);
  } else {
    throw ValidationError("ic.id: unknown initial condition '" + ic.id + "'");
  }

  if (ic.noise > 0.0) {
    std::mt19937_64 rng(seed);
    for (double& v : f.values()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
      v *= 1.0 + ic.noise * (2.0 * u - 1.0);
    }
  }
  f.validate();
  return f;
}

double cfl_preview_dt(const SimConfig& c) {
  const PhaseGrid grid = build_grid(c.grid);
  const CollisionOperator op(grid, build_kernel(c.kernel), c.workers);
  const DistributionFunction f0 = initial_condition(c.ic, grid, c.seed);
  const SpatialCoupling coupling = build_coupling(c, grid);
  const auto L = op.loss_rate(mollify(f0, coupling, c.workers));
  const double maxL = *std::max_element(L.begin(), L.end());
  const double horizon = c.T_final > 0.0 ? c.T_final : 1.0;
  if (!(maxL > 0.0)) return horizon;
  const double target = 0.5 * c.cfl_eta / maxL;
  const double steps = std::ceil(horizon / target);
  return horizon / steps;
}

namespace {

// Shift every velocity slice along one spatial axis by v_axis * dt.
void shift_axis(const DistributionFunction& src, DistributionFunction& dst, int axis, double dt) {
  const PhaseGrid& g = src.grid();
  const int N = g.Nx();
  const std::size_t nv = g.velocity_count();
  const double inv_h = 1.0 / g.dx_cell();
  std::vector<double> line(N), out(N);
  // Lines along `axis`: for dx == 2 the other axis index is `other`.
  const int others = g.dx() == 2 ? N : 1;
  auto flat = [&](int along, int other) -> std::size_t {
    if (g.dx() == 1) return std::size_t(along);
    return axis == 0 ? std::size_t(along) * N + other : std::size_t(other) * N + along;
  };
  for (std::size_t iv = 0; iv < nv; ++iv) {
    const double delta = g.velocity(iv)[axis] * dt * inv_h;
    const double fl = std::floor(delta);
    const double t = delta - fl;
    const int m = static_cast<int>(((static_cast<long long>(fl) % N) + N) % N);
    for (int o = 0; o < others; ++o) {
      for (int i = 0; i < N; ++i) line[i] = src(flat(i, o), iv);
      // Departure point i - m - t lies between nodes i - m - 1 and i - m.
      for (int i = 0; i < N; ++i) {
        const double right = line[(i - m + N) % N];
        const double left = line[(i - m - 1 + 2 * N) % N];
        out[i] = right + t * (left - right);
      }
      for (int i = 0; i < N; ++i) dst(flat(i, o), iv) = out[i];
    }
  }
}

}  // namespace

DistributionFunction advect(const DistributionFunction& f, double dt) {
  DistributionFunction out(f.grid());
  shift_axis(f, out, 0, dt);
  if (f.grid().dx() == 2) {
    DistributionFunction tmp(f.grid());
    shift_axis(out, tmp, 1, dt);
    out = std::move(tmp);
  }
  return out;
}

double clip_and_rebalance(DistributionFunction& f) {
  auto v = f.values();
  double negative = 0.0, positive = 0.0;
  for (double x : v) {
    if (x < 0.0)
      negative -= x;
    else
      positive += x;
  }
  if (negative == 0.0) return 0.0;
  const double scale = positive > 0.0 ? (positive - negative) / positive : 0.0;
  for (double& x : v) x = x < 0.0 ? 0.0 : x * std::max(scale, 0.0);
  return negative * f.grid().phase_volume();
}

DistributionFunction strang_step(const DistributionFunction& f, double dt,
                                 const SpatialCoupling& coupling, const CollisionOperator& op,
                                 double eta, StepReport* report) {
  DistributionFunction a = advect(f, 0.5 * dt);

  const CollisionField q1 = op.evaluate(a, coupling);
  const double maxL = *std::max_element(q1.rate.begin(), q1.rate.end());
  if (dt * maxL > eta) throw SubstepRequest(eta / maxL);

  DistributionFunction mid = a;
  {
    auto mv = mid.values();
    for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = std::max(0.0, mv[i] + 0.5 * dt * q1.net[i]);
  }
  const CollisionField q2 = op.evaluate(mid, coupling);
  DistributionFunction b = a;
  {
    auto bv = b.values();
    for (std::size_t i = 0; i < bv.size(); ++i) bv[i] += dt * q2.net[i];
  }
  const double clipped = clip_and_rebalance(b);
  if (report) {
    report->clipped_mass = clipped;
    report->projection_l1 = q2.projection_l1;
    report->substeps = 1;
  }
  return advect(b, 0.5 * dt);
}

namespace {

bool all_finite(const DistributionFunction& f) {
  for (double v : f.values())
    if (!std::isfinite(v)) return false;
  return true;
}

// One outer step of length h, halving on positivity failures.
DistributionFunction guarded_step(const DistributionFunction& f, double h, double h_min,
                                  const SpatialCoupling& coupling, const CollisionOperator& op,
                                  double eta, StepReport& acc, long step) {
  try {
    StepReport r;
    DistributionFunction out = strang_step(f, h, coupling, op, eta, &r);
    acc.clipped_mass += r.clipped_mass;
    acc.projection_l1 = r.projection_l1;
    return out;
  } catch (const SubstepRequest&) {
    if (0.5 * h < h_min)
      throw NumericalAbort("positivity substepping fell below dt/1024 at step " + std::to_string(step), step);
    acc.substeps += 1;
    DistributionFunction half = guarded_step(f, 0.5 * h, h_min, coupling, op, eta, acc, step);
    return guarded_step(half, 0.5 * h, h_min, coupling, op, eta, acc, step);
  }
}

}  // namespace

Trajectory run(const SimConfig& config, const RunOptions& options) {
  config.validate();
  const PhaseGrid grid = build_grid(config.grid);
  return run_from(config, initial_condition(config.ic, grid, config.seed), options);
}

Trajectory run_from(const SimConfig& config, DistributionFunction f0, const RunOptions& options) {
  config.validate();
  const PhaseGrid grid = build_grid(config.grid);
  if (!f0.grid().same_shape(grid)) throw ValidationError("run: initial condition grid mismatch");
  f0.validate();
  const CollisionOperator op(grid, build_kernel(config.kernel), config.workers);
  const SpatialCoupling coupling = build_coupling(config, grid);

  Trajectory traj;
  traj.moment_orders = config.moment_orders;
  traj.output_stride = config.output_stride;
  traj.dt = config.dt;

  const long steps =
      config.T_final == 0.0 ? 0 : static_cast<long>(std::llround(std::ceil(config.T_final / config.dt - 1e-9)));
  const int dstride = options.dissipation_every_step ? 1 : config.dissipation_stride;
  double last_D = 0.0;

  auto record = [&](const DistributionFunction& f, double t, long step, const StepReport& r) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.moments = moments(f);
    rec.moments.t = t;
    rec.H = entropy(f);
    if (dstride > 0 && step % dstride == 0) {
      last_D = dissipation(f, coupling, op);
      rec.D_fresh = true;
    }
    rec.D = last_D;
    rec.clipped_mass = r.clipped_mass;
    rec.projection_l1 = r.projection_l1;
    for (double s : config.moment_orders) rec.M_s.push_back(moment_s(f, s));
    traj.records.push_back(std::move(rec));
  };
  auto store = [&](const DistributionFunction& f, double t) {
    TimedDistribution snap{t, f};
    if (options.on_snapshot) options.on_snapshot(snap);
    if (options.keep_snapshots) traj.snapshots.push_back(std::move(snap));
  };

  DistributionFunction f = std::move(f0);
  record(f, 0.0, 0, StepReport{0.0, 0.0, 1});
  store(f, 0.0);
  for (long n = 1; n <= steps; ++n) {
    const double t_prev = (n - 1) * config.dt;
    const double t = n == steps ? config.T_final : n * config.dt;
    StepReport acc{0.0, 0.0, 1};
    f = guarded_step(f, t - t_prev, config.dt / 1024.0, coupling, op, config.cfl_eta, acc, n);
    if (!all_finite(f)) throw NumericalAbort("non-finite values at step " + std::to_string(n), n);
    record(f, t, n, acc);
    if (n % config.output_stride == 0 || n == steps) store(f, t);
  }
  return traj;
}

}  // namespace fbz

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fbz/collision.hpp"
#include "fbz/kernels.hpp"
#include "fbz/phase_space.hpp"
#include "fbz/records.hpp"

namespace fbz {

struct GridParams {
  int dx = 1;
  double Lx = 1.0;
  int Nx = 32;
  double vmax = 6.0;
  int Nv = 32;
  int Nomega = 16;
};

struct KernelParams {
  double mu = 0.0;
  /// "constant", "cos2" (b0 cos^2 theta) or "table" (b_table samples on [0, pi]).
  std::string b_profile = "constant";
  double b_value = 0.15915494309189535;  // 1 / (2 pi)
  std::vector<double> b_table;
  int K_images = 3;
};

enum class CouplingMode { Fuzzy, Local };

struct InitialConditionSpec {
  /// maxwellian | two_bump_v | x_modulated_maxwellian | indicator_box | custom_snapshot
  std::string id = "maxwellian";
  double rho = 1.0;
  double ux = 0.0;
  double uy = 0.0;
  double T = 1.0;
  /// Density modulation 1 + a cos(2 pi x1 / Lx); used by x_modulated_maxwellian
  /// and two_bump_v.
  double a = 0.0;
  /// two_bump_v: bumps centred at (+-offset, 0).
  double bump_offset = 1.0;
  /// indicator_box: nodes with |v_i| <= half_width.
  double half_width = 1.0;
  /// Multiplicative noise 1 + noise U(-1, 1), seeded by SimConfig::seed.
  double noise = 0.0;
  std::filesystem::path path;
};

struct SimConfig {
  GridParams grid;
  KernelParams kernel;
  CouplingMode mode = CouplingMode::Fuzzy;
  double sigma = 0.4;
  InitialConditionSpec ic;
  double T_final = 1.0;
  double dt = 0.01;
  double cfl_eta = 0.5;
  int output_stride = 1;
  /// Steps between dissipation evaluations; 0 disables them.
  int dissipation_stride = 5;
  std::vector<double> moment_orders;
  std::uint64_t seed = 0;
  /// 0 selects hardware concurrency.
  unsigned workers = 0;
  /// Run directory for snapshots and diagnostics (CLI only).
  std::filesystem::path output_dir = "fbz_out";

  /// Throws ValidationError on violated invariants.
  void validate() const;
};

PhaseGrid build_grid(const GridParams& p);
CollisionKernelSpec build_kernel(const KernelParams& p);
SpatialCoupling build_coupling(const SimConfig& c, const PhaseGrid& grid);

DistributionFunction initial_condition(const InitialConditionSpec& ic, const PhaseGrid& grid,
                                       std::uint64_t seed = 0);

/// Largest dt with dt * max L(ff_0) <= eta / 2 that divides T_final evenly.
double cfl_preview_dt(const SimConfig& c);

/// Semi-Lagrangian free transport f(x - v dt) with periodic linear
/// interpolation per velocity node; exact circular shift when v dt / dx is an
/// integer.
DistributionFunction advect(const DistributionFunction& f, double dt);

struct StepReport {
  double clipped_mass = 0.0;
  double projection_l1 = 0.0;
  int substeps = 1;
};

/// advect(dt/2), explicit-midpoint collision over dt on the projected field,
/// advect(dt/2). Throws SubstepRequest when dt max L(ff) > eta.
DistributionFunction strang_step(const DistributionFunction& f, double dt,
                                 const SpatialCoupling& coupling, const CollisionOperator& op,
                                 double eta, StepReport* report = nullptr);

/// Negative entries set to zero, positive part rescaled to restore the mass.
/// Returns the clipped mass.
double clip_and_rebalance(DistributionFunction& f);

struct RunOptions {
  /// Called after each stored snapshot (for streaming output).
  std::function<void(const TimedDistribution&)> on_snapshot;
  /// Overrides the dissipation schedule with every step.
  bool dissipation_every_step = false;
  /// Keep every stored snapshot in the trajectory (off for long streaming runs).
  bool keep_snapshots = true;
};

/// Integrates from the configured initial condition to T_final. Deterministic
/// for a fixed config. Throws NumericalAbort on non-finite values or when
/// substepping drops below dt / 1024.
Trajectory run(const SimConfig& config, const RunOptions& options = {});

/// Same, from an explicit initial distribution.
Trajectory run_from(const SimConfig& config, DistributionFunction f0,
                    const RunOptions& options = {});

}  // namespace fbz

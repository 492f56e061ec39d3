#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbz/dynamics.hpp"

namespace fbz {

struct RateFit {
  /// Empty when fewer than two usable points remain.
  std::optional<double> p_hat;
  double r_squared = 0.0;
  int points_used = 0;
  /// "undefined", "zero_distance_excluded", "non_convergent".
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

/// Least-squares slope of log d against log sigma. Zero distances are dropped
/// with a flag; negative or non-finite distances throw ValidationError.
RateFit fit_rate(std::span<const double> distances, std::span<const double> sigmas);

struct SweepRow {
  double sigma = 0.0;
  /// sup over snapshot times of the phase-space L1 distance to the reference.
  double sup_l1 = 0.0;
  double final_l1 = 0.0;
  /// max of the two velocity-average distances below.
  double vavg_l1 = 0.0;
  /// sup_t sum_x |sum_v (f - f_ref) <v>^-2| dv^2 dx^dx.
  double vavg_weighted = 0.0;
  /// Same with phi = 1 (density distance).
  double vavg_density = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sigma strictly decreasing
  RateFit fit;                 // on sup_l1
  std::string reference;       // descriptor of the local reference run
  DistributionFunction reference_final;
  double reference_final_time = 0.0;

  std::vector<double> sigmas() const;
};

struct SweepOptions {
  /// Run sigma cases concurrently, each single-threaded.
  bool parallel = false;
};

/// Runs the local reference once, then one fuzzy run per sigma on the same
/// grid, initial condition and time step. Dissipation is not evaluated.
SweepReport run_sweep(const SimConfig& base, std::span<const double> sigmas,
                      const SweepOptions& options = {});

/// CSV: sigma,sup_l1,final_l1,vavg_l1 rows then p_hat and r_squared footer rows.
void write_sweep_csv(std::ostream& out, const SweepReport& report);
/// Human-readable summary block.
void write_sweep_summary(std::ostream& out, const SweepReport& report);

/// Runs `config`, writing snapshot_<step>.fbz1 files at the output stride and
/// diagnostics.csv into config.output_dir. Snapshots are not kept in memory.
Trajectory run_to_directory(const SimConfig& config);

}  // namespace fbz

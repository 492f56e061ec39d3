#pragma once

#include <optional>
#include <vector>

#include "fbz/phase_space.hpp"

namespace fbz {

struct DiagnosticsRecord {
  double t = 0.0;
  MomentVector moments;
  double H = 0.0;
  /// Dissipation; holds the most recent evaluation when `D_fresh` is false.
  double D = 0.0;
  bool D_fresh = false;
  double clipped_mass = 0.0;
  double projection_l1 = 0.0;
  std::optional<double> comparison_max_violation;
  /// M_s for the trajectory's moment orders, in the same order.
  std::vector<double> M_s;
  std::vector<double> residuals;
};

struct TimedDistribution {
  double t = 0.0;
  DistributionFunction f;
};

struct Trajectory {
  std::vector<TimedDistribution> snapshots;
  std::vector<DiagnosticsRecord> records;
  std::vector<double> moment_orders;
  /// Steps between stored snapshots.
  int output_stride = 1;
  double dt = 0.0;
};

}  // namespace fbz

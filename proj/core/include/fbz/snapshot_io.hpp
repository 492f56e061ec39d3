#pragma once

#include <filesystem>
#include <iosfwd>

#include "fbz/phase_space.hpp"

namespace fbz {

/// FBZ1 snapshot: magic "FBZ1", little-endian u32 dx, Nx, Nv, Nomega, f64 Lx,
/// vmax, time, then Nx^dx * Nv^2 f64 values (space outer, velocity inner).
struct Snapshot {
  DistributionFunction f;
  double time = 0.0;
};

void write_snapshot(std::ostream& out, const DistributionFunction& f, double time);
void write_snapshot(const std::filesystem::path& path, const DistributionFunction& f,
                    double time);

/// Throws ValidationError on bad magic, truncated payload or invalid grid.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace fbz

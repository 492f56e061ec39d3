#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fbz/dynamics.hpp"

namespace fbz {

/// Flat key=value configuration with '#' comments and dotted section prefixes.
///
/// | key                     | default                   |
/// |-------------------------|---------------------------|
/// | grid.dx                 | 1                         |
/// | grid.Lx                 | 1.0                       |
/// | grid.Nx                 | 32                        |
/// | grid.vmax               | 6.0                       |
/// | grid.Nv                 | 32                        |
/// | grid.Nomega             | 16                        |
/// | kernel.mu               | 0.0                       |
/// | kernel.b                | constant                  |
/// | kernel.b_value          | 1/(2 pi)                  |
/// | kernel.b_table          | (empty; for kernel.b=table)|
/// | kernel.K_images         | 3                         |
/// | mode                    | fuzzy                     |
/// | sigma                   | 0.4                       |
/// | ic.id                   | maxwellian                |
/// | ic.rho, ic.ux, ic.uy    | 1.0, 0.0, 0.0             |
/// | ic.T                    | 1.0                       |
/// | ic.a                    | 0.0                       |
/// | ic.bump_offset          | 1.0                       |
/// | ic.half_width           | 1.0                       |
/// | ic.noise                | 0.0                       |
/// | ic.path                 | (relative to the file)    |
/// | time.T_final            | 1.0                       |
/// | time.dt                 | CFL preview               |
/// | time.cfl_eta            | 0.5                       |
/// | output.stride           | 1                         |
/// | output.dir              | fbz_out                   |
/// | diag.dissipation_stride | 5                         |
/// | diag.moments            | (empty list)              |
/// | seed                    | 0                         |
/// | workers                 | 0 (hardware concurrency)  |
///
/// Errors (unknown or duplicate key, type mismatch, invariant violation) are
/// thrown as ValidationError naming the key and line.
SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
SimConfig parse_config(const std::filesystem::path& path);

/// Serialises every key, so parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const SimConfig& c);

}  // namespace fbz

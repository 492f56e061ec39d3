#pragma once

#include <cstdint>
#include <random>

#include "fbz/dynamics.hpp"
#include "fbz/phase_space.hpp"

namespace fbz::test {

inline PhaseGrid tiny_grid(int dx = 1, int Nv = 8, int Nomega = 8, int Nx = 2) {
  return make_grid(dx, 1.0, Nx, 3.0, Nv, Nomega);
}

/// Smooth positive data times U(0.5, 1.5) noise, unit-ish mass.
inline DistributionFunction random_distribution(const PhaseGrid& g, std::uint64_t seed,
                                                double zero_fraction = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5), z(0.0, 1.0);
  DistributionFunction f(g);
  for (std::size_t ix = 0; ix < g.space_count(); ++ix) {
    for (std::size_t iv = 0; iv < g.velocity_count(); ++iv) {
      const Velocity v = g.velocity(iv);
      const double base = std::exp(-0.5 * (v[0] * v[0] + v[1] * v[1]) / 1.2) / (2.4 * 3.141592653589793);
      f(ix, iv) = z(rng) < zero_fraction ? 0.0 : base * u(rng);
    }
  }
  return f;
}

inline DistributionFunction global_maxwellian(const PhaseGrid& g, double rho = 1.0,
                                              Velocity u = {0.0, 0.0}, double T = 1.0) {
  return sample_maxwellian(g, [rho](std::array<int, 2>) { return rho; }, u, T);
}

}  // namespace fbz::test

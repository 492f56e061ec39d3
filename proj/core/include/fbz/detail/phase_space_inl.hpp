#pragma once

#include <cmath>
#include <numbers>

namespace fbz {

template <class DensityFn>
DistributionFunction sample_maxwellian(const PhaseGrid& grid, DensityFn&& rho, Velocity u,
                                       double T) {
  DistributionFunction f(grid);
  const double norm = 1.0 / (2.0 * std::numbers::pi * T);
  std::vector<double> profile(grid.velocity_count());
  for (std::size_t iv = 0; iv < profile.size(); ++iv) {
    const Velocity v = grid.velocity(iv);
    const double d0 = v[0] - u[0], d1 = v[1] - u[1];
    profile[iv] = norm * std::exp(-(d0 * d0 + d1 * d1) / (2.0 * T));
  }
  for (std::size_t ix = 0; ix < grid.space_count(); ++ix) {
    const double r = rho(grid.space_index(ix));
    auto s = f.slice(ix);
    for (std::size_t iv = 0; iv < s.size(); ++iv) s[iv] = r * profile[iv];
  }
  return f;
}

}  // namespace fbz

#include "fbz/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fbz/error.hpp"

namespace fbz {

PhaseGrid make_grid(int dx, double Lx, int Nx, double vmax, int Nv, int Nomega) {
  if (dx != 1 && dx != 2) throw ValidationError("grid: dx must be 1 or 2, got " + std::to_string(dx));
  if (!(Lx > 0.0) || !std::isfinite(Lx)) throw ValidationError("grid: Lx must be positive");
  if (!(vmax > 0.0) || !std::isfinite(vmax)) throw ValidationError("grid: vmax must be positive");
  if (Nx < 2) throw ValidationError("grid: Nx must be >= 2");
  if (Nv < 4 || Nv % 2 != 0) throw ValidationError("grid: Nv must be even and >= 4, got " + std::to_string(Nv));
  if (Nomega < 4 || Nomega % 2 != 0)
    throw ValidationError("grid: Nomega must be even and >= 4, got " + std::to_string(Nomega));

  PhaseGrid g;
  g.dx_ = dx;
  g.Lx_ = Lx;
  g.Nx_ = Nx;
  g.vmax_ = vmax;
  g.Nv_ = Nv;
  g.Nomega_ = Nomega;
  g.x_volume_ = std::pow(g.dx_cell(), dx);
  g.v_volume_ = g.dv_cell() * g.dv_cell();
  g.dw_ = 2.0 * std::numbers::pi / Nomega;
  g.space_count_ = dx == 1 ? std::size_t(Nx) : std::size_t(Nx) * Nx;

  g.v_axis_.resize(Nv);
  // Mirror the upper half so v_{Nv-1-j} == -v_j exactly.
  for (int j = Nv / 2; j < Nv; ++j) g.v_axis_[j] = (j - Nv / 2 + 0.5) * g.dv_cell();
  for (int j = 0; j < Nv / 2; ++j) g.v_axis_[j] = -g.v_axis_[Nv - 1 - j];

  g.omegas_.resize(Nomega);
  for (int k = 0; k < Nomega / 2; ++k) {
    const double angle = (k + 0.5) * g.dw_;
    g.omegas_[k] = {std::cos(angle), std::sin(angle)};
    g.omegas_[k + Nomega / 2] = {-g.omegas_[k][0], -g.omegas_[k][1]};
  }
  return g;
}

DistributionFunction::DistributionFunction(PhaseGrid grid)
    : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

DistributionFunction::DistributionFunction(PhaseGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ValidationError("distribution: value count " + std::to_string(values_.size()) +
                          " does not match grid size " + std::to_string(grid_.size()));
}

void DistributionFunction::validate() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0)
      throw ValidationError("distribution: invalid value at flat index " + std::to_string(i));
  }
}

MomentVector moments(const DistributionFunction& f) {
  const PhaseGrid& g = f.grid();
  MomentVector m;
  for (std::size_t ix = 0; ix < g.space_count(); ++ix) {
    auto s = f.slice(ix);
    const std::size_t n = s.size();
    for (std::size_t iv = 0; iv < n; ++iv) {
      const Velocity v = g.velocity(iv);
      m.mass += s[iv];
      m.energy += (v[0] * v[0] + v[1] * v[1]) * s[iv];
    }
    // node n-1-iv sits at -v; pairing makes v-even data cancel exactly
    for (std::size_t iv = 0; iv < n / 2; ++iv) {
      const Velocity v = g.velocity(iv);
      const double d = s[iv] - s[n - 1 - iv];
      m.momentum[0] += v[0] * d;
      m.momentum[1] += v[1] * d;
    }
  }
  const double w = g.phase_volume();
  m.mass *= w;
  m.momentum[0] *= w;
  m.momentum[1] *= w;
  m.energy *= w;
  return m;
}

double weighted_norm(const DistributionFunction& f, double p, double q) {
  const PhaseGrid& g = f.grid();
  std::vector<double> vw(g.velocity_count());
  for (std::size_t iv = 0; iv < vw.size(); ++iv) {
    const Velocity v = g.velocity(iv);
    vw[iv] = std::pow(1.0 + v[0] * v[0] + v[1] * v[1], 0.5 * q);
  }
  double sum = 0.0;
  for (std::size_t ix = 0; ix < g.space_count(); ++ix) {
    const auto idx = g.space_index(ix);
    double r2 = 0.0;
    for (int a = 0; a < g.dx(); ++a) {
      const double x = g.x_centered(idx[a]);
      r2 += x * x;
    }
    const double xw = std::pow(1.0 + r2, 0.5 * p);
    auto s = f.slice(ix);
    for (std::size_t iv = 0; iv < s.size(); ++iv) sum += (xw + vw[iv]) * s[iv];
  }
  return sum * g.phase_volume();
}

double l1_distance(const DistributionFunction& f, const DistributionFunction& g) {
  if (!f.grid().same_shape(g.grid())) throw ValidationError("l1_distance: grid mismatch");
  auto a = f.values();
  auto b = g.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum * f.grid().phase_volume();
}

}  // namespace fbz

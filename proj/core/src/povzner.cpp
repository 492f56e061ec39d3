#include <cmath>
#include <numbers>

#include "fbz/collision.hpp"
#include "fbz/diagnostics.hpp"
#include "fbz/error.hpp"

namespace fbz {

double PovznerPsi::operator()(double x) const {
  if (id == "linear") return x + shift;
  if (id == "power") return std::pow(x, 1.0 + r);
  return x * std::log1p(x);  // x_log1p: x Phi(x) with Phi = log(1 + x)
}

PovznerPsi make_povzner_psi(const std::string& id, double param) {
  PovznerPsi p;
  p.id = id;
  if (id == "linear") {
    p.shift = param;
  } else if (id == "power") {
    if (!(param > 0.0)) throw ValidationError("povzner: power psi needs r > 0");
    p.r = param;
  } else if (id != "x_log1p") {
    throw ValidationError("povzner: unknown psi id '" + id + "'");
  }
  return p;
}

PovznerParts povzner_K(Velocity v, Velocity v_star, const PovznerPsi& psi,
                       const CollisionKernelSpec& spec, int n_omega) {
  if (n_omega < 4 || n_omega % 2 != 0) throw ValidationError("povzner: n_omega must be even and >= 4");
  const double a = v[0] * v[0] + v[1] * v[1];
  const double c = v_star[0] * v_star[0] + v_star[1] * v_star[1];
  const Velocity g{v[0] - v_star[0], v[1] - v_star[1]};
  const double gn = std::hypot(g[0], g[1]);
  const double dw = 2.0 * std::numbers::pi / n_omega;

  PovznerParts out;
  if (gn > 0.0) {
    double K = 0.0;
    for (int k = 0; k < n_omega; ++k) {
      const double angle = (k + 0.5) * dw;
      const Velocity w{std::cos(angle), std::sin(angle)};
      const auto [vp, vsp] = collision_transform(v, v_star, w);
      const double theta = std::acos(std::min(1.0, std::abs(g[0] * w[0] + g[1] * w[1]) / gn));
      const double ap = vp[0] * vp[0] + vp[1] * vp[1];
      const double cp = vsp[0] * vsp[0] + vsp[1] * vsp[1];
      // Grouped so that linear psi cancels to rounding of the energy identity.
      K += spec.b(theta) * ((psi(ap) - psi(a)) + (psi(cp) - psi(c)));
    }
    out.K = K * dw;
  }

  // Planar form: 4 int_0^{pi/2} (b(t) + b(pi/2 - t)) (Psi(a) cos^2 + Psi(c) sin^2
  //                                                   - Psi(a cos^2 + c sin^2)) dt
  constexpr int kNodes = 256;
  const double half_pi = 0.5 * std::numbers::pi;
  const double dt = half_pi / kNodes;
  const double pa = psi(a), pc = psi(c);
  double H = 0.0;
  for (int i = 0; i < kNodes; ++i) {
    const double t = (i + 0.5) * dt;
    const double c2 = std::cos(t) * std::cos(t);
    const double s2 = 1.0 - c2;
    const double gap = pa * c2 + pc * s2 - psi(a * c2 + c * s2);
    H += (spec.b(t) + spec.b(half_pi - t)) * gap;
  }
  out.H = 4.0 * H * dt;
  out.G = out.K + out.H;
  return out;
}

}  // namespace fbz

#pragma once

#include <string>
#include <vector>

#include "fbz/collision.hpp"
#include "fbz/kernels.hpp"
#include "fbz/records.hpp"

namespace fbz {

/// Separable test function tau(t) X(x1) V(v) with analytic derivatives.
///   X: 1, cos(2 pi x1 / L), sin(2 pi x1 / L)
///   V: G, v1 G, v2 G, |v|^2 G with G = exp(-|v|^2 / 2)
///   tau: 1 or exp(-t / 2)
struct TestFunction {
  int x_mode = 0;
  int v_mode = 0;
  bool decaying = false;

  std::string name() const;
  double tau(double t) const;
  double dtau(double t) const;
  double X(double x1, double L) const;
  double dX(double x1, double L) const;
  double V(Velocity v) const;
};

/// The fixed 12-member library: member k has x_mode k / 4, v_mode k % 4 and
/// decays in time for odd k.
std::vector<TestFunction> test_function_library();

struct ResidualTable {
  double alpha = 0.0;
  std::vector<std::string> names;
  std::vector<double> residual;  // |R(phi)|
  double max_abs = 0.0;
};

/// Weak-form residual of (d_t + v . grad_x) g = Q^alpha with
/// g = log(1 + alpha f) / alpha and Q^alpha = Q(f, ff) / (1 + alpha f):
///   R(phi) = int_0^T sum [g d_t phi + g v . grad phi + phi Q^alpha]
///            + sum g_0 phi(0) - sum g_T phi(T),
/// time integral by the trapezoid rule over the snapshots. Q is the projected
/// operator the scheme integrates. Throws ValidationError unless the
/// trajectory stores every step and alpha > 0.
ResidualTable renorm_residual(const Trajectory& traj, const SpatialCoupling& coupling,
                              const CollisionOperator& op, double alpha,
                              const std::vector<TestFunction>& tests);

}  // namespace fbz

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fbz/collision.hpp"
#include "fbz/kernels.hpp"
#include "fbz/phase_space.hpp"
#include "fbz/records.hpp"

namespace fbz {

/// Floor applied to products inside logarithms (dissipation, comparison).
inline constexpr double kLogFloor = 1e-30;

/// sum f log f dx^d dv^2 with 0 log 0 = 0.
double entropy(const DistributionFunction& f);

/// sum |v|^s f dx^d dv^2.
double moment_s(const DistributionFunction& f, double s);

/// Per-(x, v) dissipation integrand
///   h(x, v) = sum_{x*, v*, w} W(x - x*) B (F' - F)(log F' - log F) dx^d dv^2 dw
/// with F = f(x, v) f(x*, v*), F' = f~(x, v') f~(x*, v*'), products floored at
/// kLogFloor inside the logarithms and each summand clamped at zero. W is the
/// spatial kernel weight, or the identity on x* == x for local collisions.
std::vector<double> dissipation_field(const DistributionFunction& f,
                                      const SpatialCoupling& coupling,
                                      const CollisionOperator& op);

/// D = 1/4 sum h dx^d dv^2. Throws std::logic_error if D < 0.
double dissipation(const DistributionFunction& f, const SpatialCoupling& coupling,
                   const CollisionOperator& op);
double dissipation_from_field(std::span<const double> h, const PhaseGrid& grid);

/// x-uniform Maxwellian whose discrete mass, momentum and energy equal those
/// of f (the exponent is fitted on the grid, not taken from the continuum).
DistributionFunction matched_maxwellian(const DistributionFunction& f);

struct EntropyInequalityReport {
  std::vector<double> t;
  /// S(t) = H(t) - H(0) + int_0^t D ds (trapezoid).
  std::vector<double> S;
  double max_S = 0.0;
  double max_abs_S = 0.0;
  /// Largest single-step increase of H (<= 0 when H is nonincreasing).
  double max_H_increase = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Requires a fresh dissipation value on every record; throws ValidationError
/// otherwise. PASS when max_t S(t) <= tol_H.
EntropyInequalityReport entropy_inequality_check(const Trajectory& traj, double tol_H);

/// Angular profile family for the Povzner decomposition.
struct PovznerPsi {
  /// "linear" (x + shift), "power" (x^{1+r}) or "x_log1p" (x log(1 + x)).
  std::string id = "linear";
  double r = 0.0;
  double shift = 0.0;

  double operator()(double x) const;
};

/// Throws ValidationError for an unknown id.
PovznerPsi make_povzner_psi(const std::string& id, double param = 0.0);

struct PovznerParts {
  double K = 0.0;
  double G = 0.0;
  double H = 0.0;
};

/// K = sum_k b(theta_k) (Psi(|v'|^2) + Psi(|v*'|^2) - Psi(|v|^2) - Psi(|v*|^2)) dw
/// over n_omega midpoint nodes on S^1; H from the planar theta-integral (256
/// midpoint nodes); G = K + H.
PovznerParts povzner_K(Velocity v, Velocity v_star, const PovznerPsi& psi,
                       const CollisionKernelSpec& spec, int n_omega = 256);

struct ComparisonReport {
  double max_defect = 0.0;
  /// max gain over phase space; defects are judged against this scale.
  double scale = 0.0;
  std::vector<double> per_C;
};

/// max over C and (x, v) of max(0, gain - C loss - h / log C). Throws
/// ValidationError if any C <= 1.
ComparisonReport comparison_check(const DistributionFunction& f,
                                  const SpatialCoupling& coupling,
                                  const CollisionOperator& op,
                                  const std::vector<double>& C_values);

/// One row per record: t, mass, px, py, energy, H, D, clipped_mass,
/// projection_l1, M_<s>..., then `residual_names` columns. 17 significant digits.
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records,
                           const std::vector<double>& moment_orders,
                           const std::vector<std::string>& residual_names = {});

/// Column label for a moment order: M_2, M_2.5, ...
std::string moment_label(double s);

}  // namespace fbz

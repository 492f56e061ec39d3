#include "fbz/residual.hpp"

#include <cmath>
#include <numbers>

#include "fbz/error.hpp"

namespace fbz {

std::string TestFunction::name() const {
  return "R_x" + std::to_string(x_mode) + "_v" + std::to_string(v_mode) + (decaying ? "_decay" : "");
}

double TestFunction::tau(double t) const { return decaying ? std::exp(-0.5 * t) : 1.0; }
double TestFunction::dtau(double t) const { return decaying ? -0.5 * std::exp(-0.5 * t) : 0.0; }

double TestFunction::X(double x1, double L) const {
  const double k = 2.0 * std::numbers::pi / L;
  switch (x_mode) {
    case 1: return std::cos(k * x1);
    case 2: return std::sin(k * x1);
    default: return 1.0;
  }
}

double TestFunction::dX(double x1, double L) const {
  const double k = 2.0 * std::numbers::pi / L;
  switch (x_mode) {
    case 1: return -k * std::sin(k * x1);
    case 2: return k * std::cos(k * x1);
    default: return 0.0;
  }
}

double TestFunction::V(Velocity v) const {
  const double r2 = v[0] * v[0] + v[1] * v[1];
  const double G = std::exp(-0.5 * r2);
  switch (v_mode) {
    case 1: return v[0] * G;
    case 2: return v[1] * G;
    case 3: return r2 * G;
    default: return G;
  }
}

std::vector<TestFunction> test_function_library() {
  std::vector<TestFunction> lib;
  for (int k = 0; k < 12; ++k) lib.push_back(TestFunction{k / 4, k % 4, k % 2 == 1});
  return lib;
}

ResidualTable renorm_residual(const Trajectory& traj, const SpatialCoupling& coupling,
                              const CollisionOperator& op, double alpha,
                              const std::vector<TestFunction>& tests) {
  if (!(alpha > 0.0)) throw ValidationError("residual: alpha must be positive");
  if (traj.output_stride != 1 || traj.snapshots.size() != traj.records.size())
    throw ValidationError("residual: trajectory must store every step (output stride 1)");
  if (traj.snapshots.empty()) throw ValidationError("residual: empty trajectory");

  const PhaseGrid& g = op.grid();
  const std::size_t ns = g.space_count(), nv = g.velocity_count();
  const std::size_t nt = traj.snapshots.size();
  const double L = g.Lx();

  // Per test function, separable tables in x and v.
  struct Tables {
    std::vector<double> X, dX, V, v1V;
  };
  std::vector<Tables> tabs(tests.size());
  for (std::size_t k = 0; k < tests.size(); ++k) {
    for (std::size_t ix = 0; ix < ns; ++ix) {
      const double x1 = g.x_node(g.space_index(ix)[0]);
      tabs[k].X.push_back(tests[k].X(x1, L));
      tabs[k].dX.push_back(tests[k].dX(x1, L));
    }
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const Velocity v = g.velocity(iv);
      tabs[k].V.push_back(tests[k].V(v));
      tabs[k].v1V.push_back(v[0] * tests[k].V(v));
    }
  }

  // Per snapshot and test: A = sum g X V, Bt = sum g dX v1 V, C = sum X V Q^alpha.
  std::vector<std::vector<double>> sumG(nt, std::vector<double>(tests.size())),
      sumT(nt, std::vector<double>(tests.size())), sumQ(nt, std::vector<double>(tests.size()));
  for (std::size_t n = 0; n < nt; ++n) {
    const DistributionFunction& f = traj.snapshots[n].f;
    const CollisionField q = op.evaluate(f, coupling);
    auto fv = f.values();
    std::vector<double> gval(fv.size()), qa(fv.size());
    for (std::size_t i = 0; i < fv.size(); ++i) {
      gval[i] = std::log1p(alpha * fv[i]) / alpha;
      qa[i] = q.net[i] / (1.0 + alpha * fv[i]);
    }
    for (std::size_t k = 0; k < tests.size(); ++k) {
      double a = 0.0, b = 0.0, c = 0.0;
      for (std::size_t ix = 0; ix < ns; ++ix) {
        double ga = 0.0, gb = 0.0, qc = 0.0;
        const std::size_t off = ix * nv;
        for (std::size_t iv = 0; iv < nv; ++iv) {
          ga += gval[off + iv] * tabs[k].V[iv];
          gb += gval[off + iv] * tabs[k].v1V[iv];
          qc += qa[off + iv] * tabs[k].V[iv];
        }
        a += tabs[k].X[ix] * ga;
        b += tabs[k].dX[ix] * gb;
        c += tabs[k].X[ix] * qc;
      }
      sumG[n][k] = a * g.phase_volume();
      sumT[n][k] = b * g.phase_volume();
      sumQ[n][k] = c * g.phase_volume();
    }
  }

  ResidualTable table;
  table.alpha = alpha;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const TestFunction& phi = tests[k];
    auto integrand = [&](std::size_t n) {
      const double t = traj.snapshots[n].t;
      return phi.dtau(t) * sumG[n][k] + phi.tau(t) * (sumT[n][k] + sumQ[n][k]);
    };
    double R = 0.0;
    for (std::size_t n = 1; n < nt; ++n)
      R += 0.5 * (traj.snapshots[n].t - traj.snapshots[n - 1].t) * (integrand(n) + integrand(n - 1));
    R += phi.tau(traj.snapshots.front().t) * sumG.front()[k];
    R -= phi.tau(traj.snapshots.back().t) * sumG.back()[k];
    table.names.push_back(phi.name());
    table.residual.push_back(std::abs(R));
    table.max_abs = std::max(table.max_abs, std::abs(R));
  }
  return table;
}

}  // namespace fbz

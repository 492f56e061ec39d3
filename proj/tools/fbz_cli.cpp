#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "brute_force.hpp"
#include "fbz/config.hpp"
#include "fbz/diagnostics.hpp"
#include "fbz/error.hpp"
#include "fbz/harness.hpp"
#include "fbz/parallel.hpp"
#include "fbz/residual.hpp"
#include "fbz/snapshot_io.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitMismatch = 3;
constexpr double kOracleTolerance = 1e-12;

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fbz::ValidationError("bad list entry '" + item + "'");
    }
  }
  return out;
}

void print_moments(const fbz::DistributionFunction& f) {
  const fbz::MomentVector m = fbz::moments(f);
  std::printf("mass     %.17g\nmomentum %.17g %.17g\nenergy   %.17g\nH        %.17g\n",
              m.mass, m.momentum[0], m.momentum[1], m.energy, fbz::entropy(f));
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  fbz::SimConfig cfg = fbz::parse_config(path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const fbz::Trajectory traj = fbz::run_to_directory(cfg);
  const auto& first = traj.records.front();
  const auto& last = traj.records.back();
  std::printf("steps %zu  dt %.6g  output %s\n", traj.records.size() - 1, cfg.dt,
              cfg.output_dir.string().c_str());
  std::printf("H(0) %.12g  H(T) %.12g\n", first.H, last.H);
  std::printf("mass drift %.3e\n", std::abs(last.moments.mass - first.moments.mass) /
                                       first.moments.mass);
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& sigmas, const std::string& out,
              bool parallel) {
  const fbz::SimConfig cfg = fbz::parse_config(path);
  const auto list = parse_list(sigmas);
  fbz::SweepOptions opt;
  opt.parallel = parallel;
  const fbz::SweepReport rep = fbz::run_sweep(cfg, list, opt);
  const std::filesystem::path target =
      out.empty() ? cfg.output_dir / "sweep.csv" : std::filesystem::path(out);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  std::ofstream csv(target);
  if (!csv) throw fbz::ValidationError("cannot write '" + target.string() + "'");
  fbz::write_sweep_csv(csv, rep);
  fbz::write_sweep_summary(std::cout, rep);
  std::cout << "report: " << target.string() << '\n';
  return 0;
}

int cmd_diag(const std::string& path, bool dissipation, const std::string& moments_arg,
             double sigma, double mu, double b_value) {
  const fbz::Snapshot snap = fbz::read_snapshot(std::filesystem::path(path));
  const fbz::DistributionFunction& f = snap.f;
  std::printf("t        %.17g\n", snap.time);
  print_moments(f);
  if (!moments_arg.empty())
    for (double s : parse_list(moments_arg))
      std::printf("%-8s %.17g\n", fbz::moment_label(s).c_str(), fbz::moment_s(f, s));
  if (dissipation) {
    const fbz::PhaseGrid& grid = f.grid();
    const fbz::CollisionOperator op(grid, fbz::CollisionKernelSpec::constant(mu, b_value),
                                    fbz::default_workers());
    const fbz::SpatialCoupling coupling =
        sigma > 0.0 ? fbz::SpatialCoupling{fbz::build_spatial_kernel(sigma, grid)}
                    : fbz::SpatialCoupling{fbz::LocalCollisions{}};
    std::printf("D        %.17g  (%s)\n", fbz::dissipation(f, coupling, op),
                fbz::describe(coupling).c_str());
  }
  return 0;
}

int cmd_oracle(const std::string& path) {
  const fbz::SimConfig cfg = fbz::parse_config(path);
  const fbz::PhaseGrid grid = fbz::build_grid(cfg.grid);
  const double cost = double(grid.space_count()) * grid.space_count() *
                      double(grid.velocity_count()) * grid.velocity_count() * grid.Nomega();
  if (cost > 5e8)
    throw fbz::ValidationError("oracle: grid too large for the brute-force check (use a tiny config)");
  const fbz::CollisionKernelSpec spec = fbz::build_kernel(cfg.kernel);
  const fbz::DistributionFunction f = fbz::initial_condition(cfg.ic, grid, cfg.seed);
  const fbz::CollisionOperator op(grid, spec, cfg.workers);
  const fbz::SpatialCoupling coupling = fbz::build_coupling(cfg, grid);
  const bool fuzzy = std::holds_alternative<fbz::SpatialKernel>(coupling);

  const fbz::DistributionFunction ff = fbz::mollify(f, coupling, op.workers());
  const fbz::DistributionFunction ff_ref =
      fuzzy ? fbz::oracle::convolve(f, cfg.sigma, cfg.kernel.K_images) : f;
  struct Row {
    const char* name;
    double dev;
  };
  std::vector<Row> rows;
  rows.push_back({"mollified", fbz::oracle::max_abs_diff(
                                   std::vector<double>(ff.values().begin(), ff.values().end()),
                                   std::vector<double>(ff_ref.values().begin(), ff_ref.values().end()))});
  rows.push_back({"gain", fbz::oracle::max_abs_diff(op.gain(f, ff), fbz::oracle::gain(f, ff_ref, spec))});
  rows.push_back({"loss_rate", fbz::oracle::max_abs_diff(op.loss_rate(ff), fbz::oracle::loss_rate(ff_ref, spec))});
  rows.push_back({"dissipation", fbz::oracle::max_abs_diff(
                                     fbz::dissipation_field(f, coupling, op),
                                     fbz::oracle::dissipation_field(f, spec, fuzzy ? cfg.sigma : 0.0,
                                                                    cfg.kernel.K_images))});
  double worst = 0.0;
  for (const Row& r : rows) {
    std::printf("%-12s max deviation %.3e\n", r.name, r.dev);
    worst = std::max(worst, r.dev);
  }
  const bool ok = worst <= kOracleTolerance;
  std::printf("max deviation %.3e (tolerance %.0e): %s\n", worst, kOracleTolerance,
              ok ? "match" : "MISMATCH");
  return ok ? 0 : kExitMismatch;
}

int cmd_residual(const std::string& path, double alpha) {
  fbz::SimConfig cfg = fbz::parse_config(path);
  cfg.output_stride = 1;
  const fbz::Trajectory traj = fbz::run(cfg);
  const fbz::PhaseGrid grid = fbz::build_grid(cfg.grid);
  const fbz::CollisionOperator op(grid, fbz::build_kernel(cfg.kernel), cfg.workers);
  const fbz::ResidualTable tab = fbz::renorm_residual(traj, fbz::build_coupling(cfg, grid), op,
                                                      alpha, fbz::test_function_library());
  std::printf("alpha %.6g\n", tab.alpha);
  for (std::size_t i = 0; i < tab.names.size(); ++i)
    std::printf("%-24s %.6e\n", tab.names[i].c_str(), tab.residual[i]);
  std::printf("max |R| %.6e\n", tab.max_abs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbz: fuzzy Boltzmann solver and verification harness"};
  app.require_subcommand(1);

  std::string run_cfg, run_out;
  auto* run = app.add_subcommand("run", "integrate one trajectory");
  run->add_option("config", run_cfg)->required();
  run->add_option("--out", run_out, "output directory (overrides output.dir)");

  std::string sweep_cfg, sweep_sigmas = "0.4,0.2,0.1,0.05", sweep_out;
  bool sweep_parallel = false;
  auto* sweep = app.add_subcommand("sweep", "sigma convergence sweep against the local reference");
  sweep->add_option("config", sweep_cfg)->required();
  sweep->add_option("--sigmas", sweep_sigmas, "strictly decreasing list")->capture_default_str();
  sweep->add_option("--out", sweep_out, "report CSV path");
  sweep->add_flag("--parallel", sweep_parallel, "run sigma cases concurrently");

  std::string diag_path, diag_moments;
  bool diag_D = false;
  double diag_sigma = 0.0, diag_mu = 0.0, diag_b = 0.15915494309189535;
  auto* diag = app.add_subcommand("diag", "diagnostics of an FBZ1 snapshot");
  diag->add_option("snapshot", diag_path)->required();
  diag->add_flag("--dissipation", diag_D);
  diag->add_option("--moments", diag_moments, "comma-separated orders s");
  diag->add_option("--sigma", diag_sigma, "fuzzy coupling for D (0 = local)");
  diag->add_option("--mu", diag_mu, "kernel exponent for D");
  diag->add_option("--b-value", diag_b, "constant angular profile for D");

  std::string oracle_cfg;
  auto* oracle = app.add_subcommand("oracle", "brute-force cross-check on a tiny grid");
  oracle->add_option("config", oracle_cfg)->required();

  std::string res_cfg;
  double res_alpha = 1.0;
  auto* residual = app.add_subcommand("residual", "renormalised weak-form residuals");
  residual->add_option("config", res_cfg)->required();
  residual->add_option("--alpha", res_alpha)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return cmd_run(run_cfg, run_out);
    if (*sweep) return cmd_sweep(sweep_cfg, sweep_sigmas, sweep_out, sweep_parallel);
    if (*diag) return cmd_diag(diag_path, diag_D, diag_moments, diag_sigma, diag_mu, diag_b);
    if (*oracle) return cmd_oracle(oracle_cfg);
    if (*residual) return cmd_residual(res_cfg, res_alpha);
  } catch (const fbz::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const fbz::NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort at step %ld: %s\n", e.step(), e.what());
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return 0;
}

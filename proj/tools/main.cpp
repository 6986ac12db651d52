#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmoc/config.hpp"
#include "mmoc/csv_io.hpp"
#include "mmoc/diagnostics.hpp"
#include "mmoc/errors.hpp"
#include "mmoc/nets.hpp"
#include "mmoc/problems.hpp"
#include "mmoc/qubit.hpp"
#include "mmoc/report.hpp"
#include "mmoc/solver.hpp"
#include "mmoc/svg.hpp"
#include "mmoc/sweep.hpp"

namespace {

using namespace mmoc;

constexpr std::uint64_t kDiagnosticSeed = 20240915;

std::vector<double> uniform_alphas(double lo, double hi, int n) {
  const ParamSet net = make_uniform_net(NetSpec::interval(lo, hi, n));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(net.size()));
  for (int i = 0; i < net.size(); ++i) out.push_back(net[i][0]);
  return out;
}

SolverConfig to_solver_config(const RunConfig& cfg, const TimeGrid& grid) {
  SolverConfig sc;
  sc.tau0 = cfg.tau0;
  sc.max_iter = cfg.max_iter;
  sc.warmstart_iter = cfg.warmstart_iter;
  sc.warmstart_tau = cfg.warmstart_tau;
  if (cfg.initial_control != 0.0) sc.initial = Control::constant(grid, cfg.initial_control);
  return sc;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

void write_control_svg(const std::string& path, const Control& u, const std::string& title) {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(u.cells()));
  for (int m = 0; m < u.cells(); ++m) t.push_back(u.grid().cell_midpoint(m));
  std::vector<SvgSeries> series;
  for (int k = 0; k < u.channels(); ++k) {
    SvgSeries s;
    s.label = u.channels() == 1 ? "u" : "u" + std::to_string(k);
    s.y.reserve(t.size());
    for (int m = 0; m < u.cells(); ++m) s.y.push_back(u.values()(m, k));
    series.push_back(std::move(s));
  }
  svg_line_plot(path, title, t, series);
}

void write_profile_svg(const std::string& path, const Eigen::MatrixXd& profile,
                       const std::string& title) {
  std::vector<double> alphas(static_cast<std::size_t>(profile.rows()));
  SvgSeries infid;
  infid.label = "infidelity";
  infid.y.resize(static_cast<std::size_t>(profile.rows()));
  for (Eigen::Index k = 0; k < profile.rows(); ++k) {
    alphas[static_cast<std::size_t>(k)] = profile(k, 0);
    infid.y[static_cast<std::size_t>(k)] = profile(k, 2);
  }
  svg_line_plot(path, title, alphas, {infid});
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const TimeGrid grid = TimeGrid::from_step(cfg.horizon, cfg.dt);
  const RunningCost f = RunningCost::quadratic(cfg.gamma);
  const SolverConfig sc = to_solver_config(cfg, grid);

  SolveReport report = [&] {
    if (cfg.problem == "qubit") {
      const QubitEnsembleSpec spec{cfg.energy};
      const ParamSet net = make_uniform_net(NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size));
      const QubitBackend backend(spec, net);
      const Control warm = solve_averaged(backend, f, grid, sc);
      return solve_minimax(backend, f, sc, warm);
    }
    static const PendulumProblem problem;
    static const QuadraticDistanceCost cost(Eigen::VectorXd::Zero(2));
    const ParamSet net = make_uniform_net(NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size));
    const Rk4Backend backend(problem, net, cost, cfg.substeps);
    const Control warm = solve_averaged(backend, f, grid, sc);
    return solve_minimax(backend, f, sc, warm);
  }();

  const std::vector<double> net_alpha_list = uniform_alphas(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size);
  std::optional<TestNetSummary> test_summary;
  if (cfg.problem == "qubit") {
    const QubitEnsembleSpec spec{cfg.energy};
    const std::vector<double> test_alphas =
        uniform_alphas(cfg.alpha_lo, cfg.alpha_hi, cfg.test_net_size);
    const Eigen::MatrixXd profile = overlap_profile(spec, test_alphas, report.control);
    write_profile_csv(join_path(out_dir, "profile.csv"), profile);
    write_profile_svg(join_path(out_dir, "profile.svg"), profile, "infidelity over the test net");
    test_summary = summarize_profile(profile);
  }

  write_control_csv(join_path(out_dir, "control.csv"), report.control);
  write_control_svg(join_path(out_dir, "control.svg"), report.control, "optimized control");
  write_trace_csv(join_path(out_dir, "trace.csv"), report.trace);
  atomic_write_file(join_path(out_dir, "report.json"),
                    solve_report_json(config_to_json(cfg), report, net_alpha_list, test_summary));

  std::cout << "objective " << format_double(report.objective) << " worst cost "
            << format_double(report.worst.value) << " at alpha "
            << format_double(report.worst.theta[0]) << " (best iteration " << report.best_iteration
            << ")\n";
  if (test_summary) {
    std::cout << "test net: max infidelity " << format_double(test_summary->max_infidelity)
              << ", min infidelity " << format_double(test_summary->min_infidelity) << "\n";
  }
  std::cout << "wrote " << out_dir << "/control.csv trace.csv report.json\n";
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, const std::vector<int>& levels_arg) {
  if (cfg.problem != "qubit") throw ConfigError("sweep supports only the qubit problem");
  ensure_dir(out_dir);
  const TimeGrid grid = TimeGrid::from_step(cfg.horizon, cfg.dt);
  const RunningCost f = RunningCost::quadratic(cfg.gamma);
  const SolverConfig sc = to_solver_config(cfg, grid);
  const std::vector<int>& levels = levels_arg.empty() ? cfg.levels : levels_arg;

  const QubitEnsembleSpec spec{cfg.energy};
  const SweepReport report = sweep_refinement(spec, cfg.alpha_lo, cfg.alpha_hi, levels,
                                              cfg.test_net_size, grid, f, sc);

  write_sweep_csv(join_path(out_dir, "sweep.csv"), report);
  atomic_write_file(join_path(out_dir, "sweep.json"), sweep_report_json(config_to_json(cfg), report));
  std::vector<double> t;
  for (int m = 0; m < grid.cells(); ++m) t.push_back(grid.cell_midpoint(m));
  std::vector<SvgSeries> curves;
  for (const auto& lvl : report.levels) {
    write_control_csv(join_path(out_dir, "control_N" + std::to_string(lvl.net_size) + ".csv"),
                      lvl.control);
    SvgSeries s;
    s.label = "N=" + std::to_string(lvl.net_size);
    for (int m = 0; m < grid.cells(); ++m) s.y.push_back(lvl.control.values()(m, 0));
    curves.push_back(std::move(s));
  }
  svg_line_plot(join_path(out_dir, "sweep.svg"), "optimized controls per net level", t, curves);

  for (const auto& lvl : report.levels) {
    std::cout << "N=" << lvl.net_size << " max_infidelity " << format_double(lvl.max_infidelity)
              << " min_infidelity " << format_double(lvl.min_infidelity) << " |u|^2 "
              << format_double(lvl.control_l2_sq) << "\n";
  }
  std::cout << "wrote " << out_dir << "/sweep.csv sweep.json\n";
  return 0;
}

int cmd_analytic(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.problem != "qubit") throw ConfigError("analytic supports only the qubit problem");
  if (!cfg.eps1 || !cfg.eps2) throw ConfigError("analytic requires eps1 and eps2 in the config");
  ensure_dir(out_dir);
  const TimeGrid grid = TimeGrid::from_step(cfg.horizon, cfg.dt);
  const QubitEnsembleSpec spec{cfg.energy};
  AnalyticPulseParams p;
  p.eps1 = *cfg.eps1;
  p.eps2 = *cfg.eps2;
  p.alpha0 = cfg.alpha_lo;
  p.alpha1 = cfg.alpha_hi;
  const Control u = analytic_control(p, cfg.energy, grid);

  const std::vector<double> test_alphas =
      uniform_alphas(cfg.alpha_lo, cfg.alpha_hi, cfg.test_net_size);
  const Eigen::MatrixXd profile = overlap_profile(spec, test_alphas, u);
  const TestNetSummary summary = summarize_profile(profile);

  write_control_csv(join_path(out_dir, "control.csv"), u);
  write_control_svg(join_path(out_dir, "control.svg"), u, "reference pulse");
  write_profile_csv(join_path(out_dir, "profile.csv"), profile);
  write_profile_svg(join_path(out_dir, "profile.svg"), profile, "reference pulse infidelity");

  std::cout << "reference pulse: |u|^2 " << format_double(control_l2_sq(u)) << ", test net max "
            << "infidelity " << format_double(summary.max_infidelity) << ", min infidelity "
            << format_double(summary.min_infidelity) << "\n";
  std::cout << "wrote " << out_dir << "/control.csv profile.csv\n";
  return 0;
}

int cmd_grad_check(const RunConfig& cfg, int trials) {
  const TimeGrid grid = TimeGrid::from_step(cfg.horizon, cfg.dt);
  const RunningCost f = RunningCost::quadratic(cfg.gamma);
  const ParamSet net = make_uniform_net(NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size));

  GradCheckResult result;
  if (cfg.problem == "qubit") {
    const QubitEnsembleSpec spec{cfg.energy};
    QubitBackend backend(spec, net);
    result = grad_check(backend, f, grid, trials, kDiagnosticSeed);
  } else {
    const PendulumProblem problem;
    const QuadraticDistanceCost cost(Eigen::VectorXd::Zero(2));
    Rk4Backend backend(problem, net, cost, cfg.substeps);
    result = grad_check(backend, f, grid, trials, kDiagnosticSeed);
  }
  std::cout << "grad-check: " << result.trials << " samples, max relative error "
            << format_double(result.max_rel_error) << " (tolerance "
            << format_double(result.tolerance) << ") -> " << (result.pass ? "pass" : "FAIL")
            << "\n";
  return result.pass ? 0 : 1;
}

int cmd_pmp_check(const RunConfig& cfg, const std::string& control_path,
                  const std::string& out_dir, double activation_tol) {
  ensure_dir(out_dir);
  const TimeGrid grid = TimeGrid::from_step(cfg.horizon, cfg.dt);
  const RunningCost f = RunningCost::quadratic(cfg.gamma);
  const ParamSet net = make_uniform_net(NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size));
  const Control u = read_control_csv(control_path, grid);

  // The CLI flag is a fraction of the worst terminal cost; the library call
  // takes an absolute cost gap. Negative means "use the library default".
  const auto run_check = [&](const SolverBackend& backend) {
    double tol = activation_tol;
    if (tol >= 0.0) tol *= backend.terminal_costs(u).maxCoeff();
    return pmp_check(backend, u, f, tol);
  };
  PMPReport report = [&] {
    if (cfg.problem == "qubit") {
      const QubitEnsembleSpec spec{cfg.energy};
      const QubitBackend backend(spec, net);
      return run_check(backend);
    }
    static const PendulumProblem problem;
    static const QuadraticDistanceCost cost(Eigen::VectorXd::Zero(2));
    const Rk4Backend backend(problem, net, cost, cfg.substeps);
    return run_check(backend);
  }();

  std::vector<double> alphas;
  for (int i = 0; i < net.size(); ++i) alphas.push_back(net[i][0]);
  write_multiplier_csv(join_path(out_dir, "multiplier.csv"), alphas, report.multiplier.weights);
  atomic_write_file(join_path(out_dir, "pmp_summary.json"), pmp_summary_json(report, alphas));

  std::cout << "stationarity residual " << format_double(report.multiplier.residual)
            << " (tolerance " << format_double(report.residual_tol) << "), support size "
            << report.multiplier.active_indices.size() << ", slack "
            << format_double(report.support_slack) << " -> " << (report.pass ? "pass" : "FAIL")
            << "\n";
  std::cout << "wrote " << out_dir << "/multiplier.csv pmp_summary.json\n";
  return report.pass ? 0 : 1;
}

NetSpec parse_net_spec(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw ConfigError("net spec must be lo:hi:points, got '" + text + "'");
  }
  const double lo = parse_double(text.substr(0, c1));
  const double hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string count = text.substr(c2 + 1);
  for (char ch : count) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ConfigError("net spec point count must be an integer: '" + text + "'");
    }
  }
  if (count.empty()) throw ConfigError("net spec point count missing: '" + text + "'");
  return NetSpec::interval(lo, hi, std::stoi(count));
}

int cmd_hausdorff(const std::string& config_path, const std::string& a_spec,
                  const std::string& b_spec) {
  NetSpec a = NetSpec::interval(0.0, 1.0, 2);
  NetSpec b = a;
  if (!a_spec.empty() != !b_spec.empty()) {
    throw ConfigError("hausdorff needs both --a and --b, or a config");
  }
  if (!a_spec.empty()) {
    a = parse_net_spec(a_spec);
    b = parse_net_spec(b_spec);
  } else if (!config_path.empty()) {
    const RunConfig cfg = load_config(config_path);
    a = NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.net_size);
    b = NetSpec::interval(cfg.alpha_lo, cfg.alpha_hi, cfg.test_net_size);
  } else {
    throw ConfigError("hausdorff needs --a/--b or --config");
  }
  const ParamSet na = make_uniform_net(a);
  const ParamSet nb = make_uniform_net(b);
  std::cout << "hausdorff(a, b) = " << format_double(hausdorff_finite(na, nb)) << "\n";
  std::cout << "hausdorff(a, box) = " << format_double(hausdorff_net_to_interval(a)) << "\n";
  std::cout << "hausdorff(b, box) = " << format_double(hausdorff_net_to_interval(b)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case optimal control of parameter ensembles"};
  app.require_subcommand(1);

  std::string config_path, out_override, control_path, a_spec, b_spec;
  std::vector<int> levels;
  int trials = 20;
  double activation_tol = -1.0;

  auto* solve = app.add_subcommand("solve", "Two-phase worst-case solve from a config");
  solve->add_option("--config", config_path, "JSON config path")->required();
  solve->add_option("--out", out_override, "output directory (default: config output_dir)");

  auto* sweep = app.add_subcommand("sweep", "Refinement sweep over net sizes");
  sweep->add_option("--config", config_path, "JSON config path")->required();
  sweep->add_option("--out", out_override, "output directory (default: config output_dir)");
  sweep->add_option("--levels", levels, "net sizes, e.g. 26,51,101")->delimiter(',');

  auto* analytic = app.add_subcommand("analytic", "Evaluate the closed-form reference pulse");
  analytic->add_option("--config", config_path, "JSON config path")->required();
  analytic->add_option("--out", out_override, "output directory (default: config output_dir)");

  auto* gradcheck = app.add_subcommand("grad-check", "Adjoint gradient vs finite differences");
  gradcheck->add_option("--config", config_path, "JSON config path")->required();
  gradcheck->add_option("--trials", trials, "number of sampled triples")->check(CLI::PositiveNumber);

  auto* pmpcheck = app.add_subcommand("pmp-check", "Stationarity residual of a saved control");
  pmpcheck->add_option("--config", config_path, "JSON config path")->required();
  pmpcheck->add_option("--control", control_path, "control.csv to check")->required();
  pmpcheck->add_option("--out", out_override, "output directory (default: config output_dir)");
  pmpcheck->add_option("--activation-tol", activation_tol,
                       "fraction of the worst terminal cost that counts as active "
                       "(default: 1e-3); widen it when the worst-case profile is nearly flat");

  auto* hausdorff = app.add_subcommand("hausdorff", "Distances between nets and their interval");
  hausdorff->add_option("--config", config_path, "JSON config path");
  hausdorff->add_option("--a", a_spec, "first net as lo:hi:points");
  hausdorff->add_option("--b", b_spec, "second net as lo:hi:points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*hausdorff) return cmd_hausdorff(config_path, a_spec, b_spec);
    const RunConfig cfg = load_config(config_path);
    const std::string out_dir = out_override.empty() ? cfg.output_dir : out_override;
    if (*solve) return cmd_solve(cfg, out_dir);
    if (*sweep) return cmd_sweep(cfg, out_dir, levels);
    if (*analytic) return cmd_analytic(cfg, out_dir);
    if (*gradcheck) return cmd_grad_check(cfg, trials);
    if (*pmpcheck) return cmd_pmp_check(cfg, control_path, out_dir, activation_tol);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

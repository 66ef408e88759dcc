#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptnlms/analysis.hpp"
#include "ptnlms/harness.hpp"
#include "ptnlms/io.hpp"
#include "ptnlms/scenarios.hpp"

namespace {

using namespace ptnlms;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::invalid_argument("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GainRule rule_from_tag(const std::string& tag) {
  if (tag == "nlms") return GainRule::identity();
  if (tag == "pnlms") return GainRule::pnlms();
  if (tag == "ipnlms") return GainRule::ipnlms();
  if (tag == "prop") return GainRule::pure_proportional();
  if (tag == "l0nlms") return GainRule::l0_nlms();
  throw std::invalid_argument("unknown rule '" + tag +
                              "' (expected nlms|pnlms|ipnlms|prop|l0nlms)");
}

std::string trim_number(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

struct RunFlags {
  std::string scenario;
  std::string config_path;
  std::string out_dir = ".";
  std::size_t trials = 0;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  double mu_nlms = 0, mu_pnlms = 0, mu_ipnlms = 0, mu_l0 = 0;
};

int cmd_run(const RunFlags& flags, const CLI::App& sub) {
  RunOverrides ov;
  if (sub.count("--trials")) ov.trials = flags.trials;
  if (sub.count("--horizon")) ov.horizon = flags.horizon;
  if (sub.count("--seed")) ov.seed = flags.seed;
  if (sub.count("--mu.nlms")) ov.mu["nlms"] = flags.mu_nlms;
  if (sub.count("--mu.pnlms")) ov.mu["pnlms"] = flags.mu_pnlms;
  if (sub.count("--mu.ipnlms")) ov.mu["ipnlms"] = flags.mu_ipnlms;
  if (sub.count("--mu.l0nlms")) ov.mu["l0nlms"] = flags.mu_l0;

  std::optional<std::string> scenario;
  if (sub.count("--scenario")) scenario = flags.scenario;
  std::optional<std::string> config;
  if (sub.count("--config")) config = read_file(flags.config_path);

  const ResolvedRun run = resolve_run(scenario, config, ov);

  MonteCarloOptions mc;
  mc.base_seed = run.base_seed;
  mc.record_weights = run.record_weights;
  const std::vector<LearningCurve> curves =
      run_monte_carlo(run.scenario, run.algorithms, mc);

  std::vector<std::string> names;
  names.reserve(run.algorithms.size());
  for (const Algorithm& a : run.algorithms) names.push_back(a.name);

  const std::filesystem::path out(flags.out_dir);
  write_curves_csv(out / "curves.csv", names, curves);
  write_meta(out / "meta.txt", run);
  write_curves_plot_script(out / "plot.gp", "curves.csv", names);
  if (run.record_weights) write_weights_csv(out / "weights.csv", names, curves);

  std::cout << "wrote " << (out / "curves.csv").string() << " ("
            << run.scenario.horizon << " iterations, " << run.scenario.trials
            << " trials)\n";
  for (std::size_t a = 0; a < curves.size(); ++a) {
    const double ss = steady_state_mse(curves[a].mse);
    std::cout << "  " << names[a] << ": steady-state MSE "
              << trim_number(to_db(ss)) << " dB\n";
  }
  return kExitOk;
}

struct ContourFlags {
  std::vector<double> wo;
  std::string rule = "prop";
  std::string out_dir = ".";
  double variance = 1.0;
  double noise_var = defaults::kNoiseVar;
  double span = 1.25;
  std::size_t samples = 101;
  double w0_lo = 0, w0_hi = 0, w1_lo = 0, w1_hi = 0;
};

int cmd_contours(const ContourFlags& flags, const CLI::App& sub) {
  if (flags.wo.size() != 2)
    throw std::invalid_argument(
        "contours are defined for exactly 2 coefficients; got " +
        std::to_string(flags.wo.size()));
  const GainRule rule = rule_from_tag(flags.rule);
  const std::vector<double> g_o = optimal_gain(flags.wo, rule);
  const SurfaceSpec spec =
      SurfaceSpec::identification(Matrix::scaled_identity(2, flags.variance),
                                  g_o, flags.wo, flags.noise_var);

  const std::vector<double> center = spec.w_prime_o();
  AxisSpec a0{center[0] - flags.span, center[0] + flags.span, flags.samples};
  AxisSpec a1{center[1] - flags.span, center[1] + flags.span, flags.samples};
  if (sub.count("--w0-lo")) a0.lo = flags.w0_lo;
  if (sub.count("--w0-hi")) a0.hi = flags.w0_hi;
  if (sub.count("--w1-lo")) a1.lo = flags.w1_lo;
  if (sub.count("--w1-hi")) a1.hi = flags.w1_hi;

  const ContourGrid grid = contour_grid(spec, a0, a1);
  const std::filesystem::path out(flags.out_dir);
  write_grid_csv(out / "grid.csv", grid);
  write_grid_plot_script(out / "plot.gp", "grid.csv", grid);

  std::cout << "wrote " << (out / "grid.csv").string() << " ("
            << grid.axis0.samples << "x" << grid.axis1.samples
            << " samples, surface condition number "
            << trim_number(cond(spec.r_prime())) << ")\n";
  return kExitOk;
}

struct AnalyzeFlags {
  std::vector<double> wo;
  std::string rule = "prop";
  double variance = 1.0;
};

int cmd_analyze(const AnalyzeFlags& flags) {
  const GainRule rule = rule_from_tag(flags.rule);
  const std::vector<double> g_o = optimal_gain(flags.wo, rule);
  const Matrix r = Matrix::scaled_identity(flags.wo.size(), flags.variance);

  bool degenerate = false;
  for (double g : g_o)
    if (!(g > 0.0)) degenerate = true;

  if (degenerate) {
    // zero gain entries: the transformed surface is infinitely ill-conditioned
    std::cout << "kappa(R)      = " << trim_number(cond(r)) << "\n";
    std::cout << "kappa(G_o)    = inf\n";
    std::cout << "kappa(R')     = inf\n";
    std::cout << "bound kappa(R') <= kappa(G_o) * kappa(R): holds (degenerate)\n";
    return kExitOk;
  }

  const BoundCheck b = bound_check(r, g_o);
  std::cout << "kappa(R)      = " << trim_number(b.kappa_r) << "\n";
  std::cout << "kappa(G_o)    = " << trim_number(b.kappa_gain) << "\n";
  std::cout << "kappa(R')     = " << trim_number(b.kappa_r_prime) << "\n";
  std::cout << "bound kappa(R') <= kappa(G_o) * kappa(R): "
            << (b.holds ? "holds" : "VIOLATED") << "\n";
  return b.holds ? kExitOk : kExitNumerical;
}

int cmd_list() {
  for (const std::string& name : preset_names()) {
    const RunPreset p = make_preset(name);
    std::cout << p.name << ": taps=" << p.scenario.taps()
              << " horizon=" << p.scenario.horizon
              << " trials=" << p.scenario.trials << " algorithms=";
    for (std::size_t a = 0; a < p.algorithms.size(); ++a) {
      if (a > 0) std::cout << ",";
      std::cout << p.algorithms[a].name << "(mu=" << p.algorithms[a].mu << ")";
    }
    std::cout << "\n    " << p.description << "\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ptnlms: proportionate-type NLMS adaptive filters, surface-conditioning "
      "analysis, and Monte-Carlo experiment runner"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run = app.add_subcommand(
      "run", "run a Monte-Carlo experiment and write learning-curve CSVs");
  run->add_option("--scenario", rf.scenario, "built-in scenario name (see `list`)");
  run->add_option("--config", rf.config_path,
                  "JSON config file (same schema as the emitted meta.txt)");
  run->add_option("--trials", rf.trials, "number of independent trials");
  run->add_option("--horizon", rf.horizon, "iterations per trial");
  run->add_option("--seed", rf.seed, "base seed; trial t uses seed+t");
  run->add_option("--out", rf.out_dir, "output directory");
  run->add_option("--mu.nlms", rf.mu_nlms, "step-size override");
  run->add_option("--mu.pnlms", rf.mu_pnlms, "step-size override");
  run->add_option("--mu.ipnlms", rf.mu_ipnlms, "step-size override");
  run->add_option("--mu.l0nlms", rf.mu_l0, "step-size override");

  ContourFlags cf;
  CLI::App* contours = app.add_subcommand(
      "contours", "sample the 2-tap error surface onto a CSV grid");
  contours->add_option("--wo", cf.wo, "true system coefficients (two values)")
      ->required()
      ->delimiter(',');
  contours->add_option("--rule", cf.rule, "nlms|pnlms|ipnlms|prop|l0nlms");
  contours->add_option("--variance", cf.variance, "white input variance");
  contours->add_option("--noise-var", cf.noise_var, "measurement noise power");
  contours->add_option("--span", cf.span, "halfwidth of the default grid");
  contours->add_option("--samples", cf.samples, "samples per axis");
  contours->add_option("--w0-lo", cf.w0_lo, "explicit axis-0 lower bound");
  contours->add_option("--w0-hi", cf.w0_hi, "explicit axis-0 upper bound");
  contours->add_option("--w1-lo", cf.w1_lo, "explicit axis-1 lower bound");
  contours->add_option("--w1-hi", cf.w1_hi, "explicit axis-1 upper bound");
  contours->add_option("--out", cf.out_dir, "output directory");

  AnalyzeFlags af;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "condition numbers of the plain and gain-scaled surfaces");
  analyze->add_option("--wo", af.wo, "true system coefficients")
      ->required()
      ->delimiter(',');
  analyze->add_option("--rule", af.rule, "nlms|pnlms|ipnlms|prop|l0nlms");
  analyze->add_option("--variance", af.variance, "white input variance");

  CLI::App* list = app.add_subcommand("list", "print the scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(rf, *run);
    if (contours->parsed()) return cmd_contours(cf, *contours);
    if (analyze->parsed()) return cmd_analyze(af);
    if (list->parsed()) return cmd_list();
  } catch (const DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptnlms/analysis.hpp"
#include "ptnlms/harness.hpp"
#include "ptnlms/io.hpp"
#include "ptnlms/scenarios.hpp"

namespace py = pybind11;
using namespace ptnlms;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw std::invalid_argument("matrix rows must form a square matrix");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

} // namespace

PYBIND11_MODULE(_ptnlms, m) {
  m.doc() =
      "Proportionate-type NLMS adaptive filters, error-surface conditioning "
      "analysis, and a Monte-Carlo experiment runner";
  m.attr("__version__") = "0.1.0";

  py::class_<ZeroAttractor>(m, "ZeroAttractor")
      .def(py::init<double, double>(), py::arg("kappa") = 2e-3,
           py::arg("beta") = 5.0)
      .def_readwrite("kappa", &ZeroAttractor::kappa)
      .def_readwrite("beta", &ZeroAttractor::beta);

  py::class_<GainRule>(m, "GainRule")
      .def_static("identity", &GainRule::identity)
      .def_static("pnlms", &GainRule::pnlms, py::arg("delta_p") = 0.01,
                  py::arg("rho") = 0.01)
      .def_static("ipnlms", &GainRule::ipnlms, py::arg("alpha") = -0.5,
                  py::arg("delta_ip") = 0.01)
      .def_static("pure_proportional", &GainRule::pure_proportional)
      .def_static("l0_nlms", &GainRule::l0_nlms, py::arg("kappa") = 2e-3,
                  py::arg("beta") = 5.0)
      .def("validate", &GainRule::validate);

  py::class_<FilterState>(m, "FilterState")
      .def(py::init<std::size_t>(), py::arg("taps"))
      .def(py::init<std::vector<double>>(), py::arg("init"))
      .def_readwrite("w", &FilterState::w)
      .def_readonly("iteration", &FilterState::iteration);

  m.def(
      "gain_pnlms",
      [](const std::vector<double>& w, double delta_p, double rho) {
        return gain_pnlms(w, delta_p, rho);
      },
      py::arg("w"), py::arg("delta_p") = 0.01, py::arg("rho") = 0.01);
  m.def(
      "gain_ipnlms",
      [](const std::vector<double>& w, double alpha, double delta_ip) {
        return gain_ipnlms(w, alpha, delta_ip);
      },
      py::arg("w"), py::arg("alpha"), py::arg("delta_ip"));
  m.def(
      "gain_pure_proportional",
      [](const std::vector<double>& w) { return gain_pure_proportional(w); },
      py::arg("w"));
  m.def(
      "gain",
      [](const GainRule& rule, const std::vector<double>& w) {
        return gain(rule, w);
      },
      py::arg("rule"), py::arg("w"));

  m.def(
      "step",
      [](FilterState& state, const std::vector<double>& x, double d, double mu,
         double delta, const GainRule& rule) {
        const StepResult r = step(state, StepInput{x, d, mu, delta}, rule);
        return py::make_tuple(r.y, r.e);
      },
      py::arg("state"), py::arg("x"), py::arg("d"), py::arg("mu"),
      py::arg("delta"), py::arg("rule"),
      "Advance one sample; returns (y, e) and updates state in place.");

  // analysis
  py::class_<SymEig>(m, "SymEig")
      .def_readonly("lambda_min", &SymEig::lambda_min)
      .def_readonly("lambda_max", &SymEig::lambda_max)
      .def_readonly("positive_definite", &SymEig::positive_definite);
  py::class_<BoundCheck>(m, "BoundCheck")
      .def_readonly("kappa_r_prime", &BoundCheck::kappa_r_prime)
      .def_readonly("kappa_gain", &BoundCheck::kappa_gain)
      .def_readonly("kappa_r", &BoundCheck::kappa_r)
      .def_readonly("holds", &BoundCheck::holds);

  m.def("eig_sym", [](const std::vector<std::vector<double>>& rows) {
    return eig_sym(to_matrix(rows));
  });
  m.def("cond", [](const std::vector<std::vector<double>>& rows) {
    return cond(to_matrix(rows));
  });
  m.def(
      "cond_gain",
      [](const std::vector<double>& w) { return cond_gain(w); },
      py::arg("w_o"));
  m.def(
      "bound_check",
      [](const std::vector<std::vector<double>>& rows,
         const std::vector<double>& g_o) {
        return bound_check(to_matrix(rows), g_o);
      },
      py::arg("R"), py::arg("g_o"));
  m.def(
      "optimal_gain",
      [](const std::vector<double>& w_o, const GainRule& rule) {
        return optimal_gain(w_o, rule);
      },
      py::arg("w_o"), py::arg("rule"));
  m.def(
      "transform",
      [](const std::vector<double>& w, const std::vector<double>& x,
         const std::vector<double>& g) {
        const TransformedPair p = transform(w, x, g);
        return py::make_tuple(p.w, p.x);
      },
      py::arg("w"), py::arg("x"), py::arg("g"));

  py::class_<SurfaceSpec>(m, "SurfaceSpec")
      .def_static(
          "identification",
          [](const std::vector<std::vector<double>>& R,
             const std::vector<double>& g_o, const std::vector<double>& w_o,
             double noise_var) {
            return SurfaceSpec::identification(to_matrix(R), g_o, w_o,
                                               noise_var);
          },
          py::arg("R"), py::arg("g_o"), py::arg("w_o"), py::arg("noise_var"))
      .def_property_readonly("xi_min", &SurfaceSpec::xi_min)
      .def_property_readonly("w_prime_o", &SurfaceSpec::w_prime_o)
      .def_readonly("g_o", &SurfaceSpec::g_o)
      .def_readonly("w_o", &SurfaceSpec::w_o)
      .def_readonly("sigma_d2", &SurfaceSpec::sigma_d2)
      .def_readonly("sigma_n2", &SurfaceSpec::sigma_n2);

  m.def(
      "mse",
      [](const SurfaceSpec& spec, const std::vector<double>& w) {
        return mse(spec, w);
      },
      py::arg("spec"), py::arg("w"));
  m.def(
      "mse_transformed",
      [](const SurfaceSpec& spec, const std::vector<double>& w_prime) {
        return mse_transformed(spec, w_prime);
      },
      py::arg("spec"), py::arg("w_prime"));

  py::class_<AxisSpec>(m, "AxisSpec")
      .def(py::init<double, double, std::size_t>(), py::arg("lo"),
           py::arg("hi"), py::arg("samples"))
      .def_readwrite("lo", &AxisSpec::lo)
      .def_readwrite("hi", &AxisSpec::hi)
      .def_readwrite("samples", &AxisSpec::samples);
  py::class_<ContourGrid>(m, "ContourGrid")
      .def_readonly("axis0", &ContourGrid::axis0)
      .def_readonly("axis1", &ContourGrid::axis1)
      .def_readonly("xi", &ContourGrid::xi)
      .def("at", &ContourGrid::at, py::arg("i"), py::arg("j"))
      .def("coord0", &ContourGrid::coord0)
      .def("coord1", &ContourGrid::coord1);
  m.def("contour_grid", &contour_grid, py::arg("spec"), py::arg("axis0"),
        py::arg("axis1"));

  // signals
  py::class_<InputModel>(m, "InputModel")
      .def_static("wgn", &InputModel::wgn, py::arg("variance") = 1.0)
      .def_static("bpsk", &InputModel::bpsk)
      .def_readonly("variance", &InputModel::variance);
  m.def("gen_input", &gen_input, py::arg("model"), py::arg("n"),
        py::arg("seed"));
  m.def("gen_noise", &gen_noise, py::arg("variance"), py::arg("n"),
        py::arg("seed"));
  m.def(
      "regressor",
      [](const std::vector<double>& u, std::size_t k, std::size_t taps) {
        return regressor(u, k, taps);
      },
      py::arg("u"), py::arg("k"), py::arg("taps"));

  py::class_<UnknownSystem>(m, "UnknownSystem")
      .def_static("fixed", &UnknownSystem::fixed, py::arg("w"))
      .def_static("switching", &UnknownSystem::switching, py::arg("before"),
                  py::arg("after"), py::arg("switch_at"))
      .def_property_readonly("taps", &UnknownSystem::taps)
      .def("coeffs_at", [](const UnknownSystem& s, std::size_t k) {
        const auto w = s.coeffs_at(k);
        return std::vector<double>(w.begin(), w.end());
      });
  m.def(
      "desired",
      [](const UnknownSystem& s, const std::vector<double>& x, std::size_t k,
         double noise) { return desired(s, x, k, noise); },
      py::arg("system"), py::arg("x"), py::arg("k"), py::arg("noise_sample"));

  m.def("near_sparse_two_tap", &systems::near_sparse_two_tap);
  m.def("single_tap_64", &systems::single_tap_64);
  m.def("tail_support_100", &systems::tail_support_100);
  m.def("front_support_100", &systems::front_support_100);
  m.def("support_switch_100", &systems::support_switch_100,
        py::arg("switch_at") = 2000);

  // harness
  py::class_<Algorithm>(m, "Algorithm")
      .def(py::init([](std::string name, GainRule rule, double mu) {
             return Algorithm{std::move(name), rule, mu};
           }),
           py::arg("name"), py::arg("rule"), py::arg("mu"))
      .def_readwrite("name", &Algorithm::name)
      .def_readwrite("rule", &Algorithm::rule)
      .def_readwrite("mu", &Algorithm::mu);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("system", &Scenario::system)
      .def_readwrite("input", &Scenario::input)
      .def_readwrite("noise_var", &Scenario::noise_var)
      .def_readwrite("horizon", &Scenario::horizon)
      .def_readwrite("trials", &Scenario::trials)
      .def_readwrite("init", &Scenario::init)
      .def_readwrite("delta", &Scenario::delta)
      .def("validate", &Scenario::validate);

  py::class_<TrialResult>(m, "TrialResult")
      .def_readonly("squared_error", &TrialResult::squared_error)
      .def_readonly("weights", &TrialResult::weights)
      .def_readonly("diverged", &TrialResult::diverged)
      .def_readonly("diverged_at", &TrialResult::diverged_at);
  m.def("run_trial", &run_trial, py::arg("scenario"), py::arg("rule"),
        py::arg("mu"), py::arg("seed"), py::arg("record_weights") = false);

  py::class_<LearningCurve>(m, "LearningCurve")
      .def_readonly("mse", &LearningCurve::mse)
      .def_readonly("mean_weights", &LearningCurve::mean_weights);
  m.def(
      "run_monte_carlo",
      [](const Scenario& scn, const std::vector<Algorithm>& algos,
         std::uint64_t base_seed, bool record_weights, unsigned threads) {
        MonteCarloOptions opts;
        opts.base_seed = base_seed;
        opts.record_weights = record_weights;
        opts.threads = threads;
        return run_monte_carlo(scn, algos, opts);
      },
      py::arg("scenario"), py::arg("algorithms"), py::arg("base_seed") = 1,
      py::arg("record_weights") = false, py::arg("threads") = 0);

  m.def(
      "steady_state_mse",
      [](const std::vector<double>& curve, std::size_t window) {
        return steady_state_mse(curve, window);
      },
      py::arg("curve"), py::arg("window") = 0);
  m.def(
      "time_to_threshold",
      [](const std::vector<double>& curve, double level) {
        return time_to_threshold(curve, level);
      },
      py::arg("curve"), py::arg("level"));
  m.def("to_db", &to_db, py::arg("power"));
  m.def("from_db", &from_db, py::arg("db"));

  // scenario catalog
  py::class_<RunPreset>(m, "RunPreset")
      .def_readonly("name", &RunPreset::name)
      .def_readonly("description", &RunPreset::description)
      .def_readonly("scenario", &RunPreset::scenario)
      .def_readonly("algorithms", &RunPreset::algorithms)
      .def_readonly("record_weights", &RunPreset::record_weights);
  m.def("preset_names", &preset_names);
  m.def("make_preset", &make_preset, py::arg("name"));

  py::register_exception<DivergenceError>(m, "DivergenceError");
}

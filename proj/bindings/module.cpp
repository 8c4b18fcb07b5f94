#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "picardlab/apriori.hpp"
#include "picardlab/bounds.hpp"
#include "picardlab/brownian.hpp"
#include "picardlab/config.hpp"
#include "picardlab/driver_zoo.hpp"
#include "picardlab/error_norm.hpp"
#include "picardlab/experiments.hpp"
#include "picardlab/linear_example.hpp"
#include "picardlab/nested_picard.hpp"
#include "picardlab/rate_fit.hpp"
#include "picardlab/special_functions.hpp"

namespace py = pybind11;
using namespace picardlab;

namespace {

LinearExampleSpec spec_from_args(const std::optional<std::vector<double>>& drift, int dim,
                                 double b_norm_sq) {
  if (drift) return LinearExampleSpec(*drift);
  return LinearExampleSpec::isotropic(dim, b_norm_sq);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form Picard iterates, convergence envelopes, and Monte Carlo "
            "error estimators for the linear example BSDE";

  // ---- special functions ----
  m.def("hermite_eval", &hermite_eval, py::arg("k"), py::arg("x"),
        "Probabilists' Hermite polynomial H_k(x)");
  m.def("gaussian_hermite_expectation", &gaussian_hermite_expectation, py::arg("k"));
  m.def("double_factorial", &double_factorial, py::arg("n"));
  m.def("log_factorial", &log_factorial, py::arg("k"));
  py::class_<HermitePoly>(m, "HermitePoly")
      .def(py::init<int>(), py::arg("degree"))
      .def_property_readonly("degree", &HermitePoly::degree)
      .def_property_readonly("coefficients",
                             [](const HermitePoly& h) {
                               return std::vector<double>(h.coefficients().begin(),
                                                          h.coefficients().end());
                             })
      .def("eval", &HermitePoly::eval, py::arg("x"));

  m.def(
      "multi_indices",
      [](int d, int k) {
        std::vector<std::vector<int>> out;
        for (const auto& mi : multi_indices(d, k)) out.push_back(mi.entries);
        return out;
      },
      py::arg("d"), py::arg("k"));
  m.def(
      "log_multinomial",
      [](int k, const std::vector<int>& alpha) { return log_multinomial(k, alpha); },
      py::arg("k"), py::arg("alpha"));

  // ---- linear example ----
  py::class_<LinearExampleSpec>(m, "LinearExampleSpec")
      .def(py::init<std::vector<double>>(), py::arg("drift"))
      .def_static("isotropic", &LinearExampleSpec::isotropic, py::arg("dim"),
                  py::arg("b_norm_sq"))
      .def_property_readonly("dim", &LinearExampleSpec::dim)
      .def_property_readonly("drift",
                             [](const LinearExampleSpec& s) {
                               return std::vector<double>(s.drift().begin(), s.drift().end());
                             })
      .def_property_readonly("drift_norm_sq", &LinearExampleSpec::drift_norm_sq);

  m.attr("INFINITE_ORDER") = kInfiniteOrder;

  py::class_<IterateEvaluator>(m, "IterateEvaluator")
      .def(py::init<LinearExampleSpec, int>(), py::arg("spec"), py::arg("order"))
      .def_property_readonly("order", &IterateEvaluator::order)
      .def("value",
           [](const IterateEvaluator& ev, double t, const std::vector<double>& x) {
             return ev.value(t, x);
           },
           py::arg("t"), py::arg("x"))
      .def("gradient",
           [](const IterateEvaluator& ev, double t, const std::vector<double>& x) {
             return ev.gradient(t, x);
           },
           py::arg("t"), py::arg("x"));

  m.def("smoothed_gaussian_deriv", &smoothed_gaussian_deriv, py::arg("t"), py::arg("x"),
        py::arg("k"));
  m.def("v_origin_series", &v_origin_series, py::arg("spec"), py::arg("n"));
  m.def("origin_gap", &origin_gap, py::arg("spec"), py::arg("n"));
  m.def(
      "pde_residual",
      [](const LinearExampleSpec& s, double t, const std::vector<double>& x, double h) {
        return pde_residual(s, t, x, h);
      },
      py::arg("spec"), py::arg("t"), py::arg("x"), py::arg("h"));
  m.def("xi_second_moment", &xi_second_moment, py::arg("spec"));
  m.def("driver_norm_integral", &driver_norm_integral, py::arg("spec"));

  // ---- bounds ----
  py::class_<BsdeProblem>(m, "BsdeProblem")
      .def(py::init([](double horizon, int value_dim, int noise_dim, double lip_y,
                       double lip_z, double xi_sq, double driver_int) {
             BsdeProblem p{horizon, value_dim, noise_dim, lip_y, lip_z, xi_sq, driver_int};
             p.validate();
             return p;
           }),
           py::arg("horizon") = 1.0, py::arg("value_dim") = 1, py::arg("noise_dim") = 1,
           py::arg("lip_y") = 0.0, py::arg("lip_z") = 0.0, py::arg("xi_second_moment") = 0.0,
           py::arg("driver_norm_integral") = 0.0)
      .def_static("linear_example", &BsdeProblem::linear_example, py::arg("spec"))
      .def_readwrite("horizon", &BsdeProblem::horizon)
      .def_readwrite("lip_y", &BsdeProblem::lip_y)
      .def_readwrite("lip_z", &BsdeProblem::lip_z)
      .def_readwrite("xi_second_moment", &BsdeProblem::xi_second_moment)
      .def_readwrite("driver_norm_integral", &BsdeProblem::driver_norm_integral);

  m.def("b20_bound", &b20_bound, py::arg("problem"), py::arg("k"));
  m.def("r01_bound", &r01_bound, py::arg("problem"), py::arg("k"));
  m.def("r02_bound", &r02_bound, py::arg("problem"), py::arg("k"));
  m.def(
      "a21_sandwich",
      [](const LinearExampleSpec& s, int n, double eps) {
        const SandwichBounds b = a21_sandwich(s, n, eps);
        return std::make_pair(b.lower, b.upper);
      },
      py::arg("spec"), py::arg("n"), py::arg("eps"));
  m.def("a10_lower", &a10_lower, py::arg("spec"), py::arg("n"));
  m.def("l01_iterate", &l01_iterate, py::arg("horizon"), py::arg("n"), py::arg("s"));
  m.def(
      "l01_error",
      [](double horizon, int n) {
        const OdeError e = l01_error(horizon, n);
        return std::make_pair(e.exact, e.lower);
      },
      py::arg("horizon"), py::arg("n"));

  // ---- rate fitting ----
  py::enum_<RateMode>(m, "RateMode")
      .value("sqrt_factorial", RateMode::sqrt_factorial)
      .value("factorial", RateMode::factorial);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("log_c", &RateFit::log_c)
      .def_readonly("residual", &RateFit::residual)
      .def_readonly("log_k_coef", &RateFit::log_k_coef)
      .def_readonly("points_used", &RateFit::points_used);

  m.def(
      "fit_rate",
      [](const std::vector<std::pair<int, double>>& series, RateMode mode, int min_k) {
        ErrorSeries es;
        for (const auto& [k, e] : series) {
          ErrorSeriesEntry entry;
          entry.k = k;
          entry.estimate = e;
          es.entries.push_back(entry);
        }
        return fit_rate(es, mode, min_k);
      },
      py::arg("series"), py::arg("mode"), py::arg("min_k") = 4,
      "series: list of (k, error) pairs");

  // ---- stochastic engine ----
  py::class_<ErrorSeriesEntry>(m, "ErrorSeriesEntry")
      .def_readonly("k", &ErrorSeriesEntry::k)
      .def_readonly("estimate", &ErrorSeriesEntry::estimate)
      .def_readonly("half_width", &ErrorSeriesEntry::half_width)
      .def_readonly("paths", &ErrorSeriesEntry::paths)
      .def_readonly("steps", &ErrorSeriesEntry::steps)
      .def_readonly("seed", &ErrorSeriesEntry::seed);

  m.def(
      "estimate_e_k",
      [](const LinearExampleSpec& spec, int k, std::uint64_t paths, int steps,
         std::uint64_t seed, int threads) {
        ErrorNormConfig cfg;
        cfg.paths = paths;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.threads = threads;
        return estimate_e_k(spec, k, cfg);
      },
      py::arg("spec"), py::arg("k"), py::arg("paths") = 10000, py::arg("steps") = 128,
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

  m.def(
      "brownian_path",
      [](double horizon, int steps, int dim, std::uint64_t seed, std::uint64_t path_index) {
        PathGrid grid(horizon, steps, dim, seed, path_index);
        std::vector<double> flat((static_cast<std::size_t>(steps) + 1) * static_cast<std::size_t>(dim));
        grid.positions(flat);
        return flat;
      },
      py::arg("horizon"), py::arg("steps"), py::arg("dim"), py::arg("seed"),
      py::arg("path_index"), "positions W_{t_i}, row-major (steps+1) x dim");

  py::enum_<AprioriVariant>(m, "AprioriVariant")
      .value("conditional_l2", AprioriVariant::conditional_l2)
      .value("supremum", AprioriVariant::supremum)
      .value("gamma_weighted", AprioriVariant::gamma_weighted);

  py::class_<AprioriReport>(m, "AprioriReport")
      .def_readonly("lhs", &AprioriReport::lhs)
      .def_readonly("rhs", &AprioriReport::rhs)
      .def_readonly("margin", &AprioriReport::margin)
      .def_readonly("lhs_half_width", &AprioriReport::lhs_half_width)
      .def_readonly("rhs_half_width", &AprioriReport::rhs_half_width)
      .def_readonly("diff_se", &AprioriReport::diff_se)
      .def_readonly("pass_", &AprioriReport::pass)
      .def_readonly("s_effective", &AprioriReport::s_effective);

  m.def(
      "apriori_check",
      [](const LinearExampleSpec& spec, int k, double lambda, double s, AprioriVariant v,
         double alpha, std::uint64_t paths, int steps, std::uint64_t seed, int threads) {
        AprioriConfig cfg;
        cfg.paths = paths;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.threads = threads;
        return apriori_check(spec, k, lambda, s, v, alpha, cfg);
      },
      py::arg("spec"), py::arg("k"), py::arg("lambda"), py::arg("s"), py::arg("variant"),
      py::arg("alpha") = 1.0, py::arg("paths") = 10000, py::arg("steps") = 128,
      py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);

  py::class_<NestedPicardResult>(m, "NestedPicardResult")
      .def_readonly("y", &NestedPicardResult::y)
      .def_readonly("z", &NestedPicardResult::z)
      .def_readonly("y_se", &NestedPicardResult::y_se)
      .def_readonly("z_se", &NestedPicardResult::z_se)
      .def_readonly("time_cutoff", &NestedPicardResult::time_cutoff)
      .def_readonly("bias_bound", &NestedPicardResult::bias_bound)
      .def_readonly("evaluations", &NestedPicardResult::evaluations);

  m.def(
      "nested_picard",
      [](const std::string& driver, const LinearExampleSpec& spec, int n, double t,
         const std::vector<double>& x, std::uint64_t budget, double cost_ceiling,
         std::uint64_t seed, double lip_y) {
        GenericBsde problem;
        if (driver == "linear-z") problem = make_linear_z_problem(spec);
        else if (driver == "linear-y") problem = make_linear_y_problem(lip_y);
        else if (driver == "zero") problem = make_zero_driver_problem(spec);
        else throw std::invalid_argument("driver must be linear-z, linear-y, or zero");
        NestedPicardBudget b;
        b.per_level = {budget};
        b.cost_ceiling = cost_ceiling;
        return nested_picard(problem, n, t, x, b, seed);
      },
      py::arg("driver"), py::arg("spec"), py::arg("n"), py::arg("t"), py::arg("x"),
      py::arg("budget") = 200, py::arg("cost_ceiling") = 1e9,
      py::arg("seed") = kDefaultSeed, py::arg("lip_y") = 1.0,
      "Nested Monte Carlo Picard iterate for one of the built-in drivers");

  // ---- experiment commands (same artifacts as the CLI) ----
  m.def(
      "run_experiment",
      [](const std::map<std::string, std::string>& kv) {
        ExperimentConfig cfg;
        for (const auto& [k, v] : kv) cfg.set(k, v);
        const CommandResult r = run_command(cfg);
        return std::make_pair(r.files_written, r.summary_json);
      },
      py::arg("config"),
      "Runs one experiment from a flat key/value dict; returns (files, summary_json)");
}

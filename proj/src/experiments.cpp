#include "picardlab/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "picardlab/apriori.hpp"
#include "picardlab/bounds.hpp"
#include "picardlab/error_norm.hpp"
#include "picardlab/linear_example.hpp"
#include "picardlab/driver_zoo.hpp"
#include "picardlab/nested_picard.hpp"
#include "picardlab/rate_fit.hpp"
#include "picardlab/special_functions.hpp"

namespace picardlab {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string header_comment(const ExperimentConfig& cfg) {
  std::string out = "# config_hash=" + hex64(cfg.hash()) + "\n";
  out += "# seed=" + std::to_string(cfg.get_u64("seed", kDefaultSeed)) + "\n";
  return out;
}

fs::path output_dir(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.get_string("out_dir", "out");
  fs::create_directories(dir);
  return dir;
}

std::string write_artifact(const ExperimentConfig& cfg, const std::string& name,
                           const std::string& content) {
  const fs::path path = output_dir(cfg) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  return path.string();
}

LinearExampleSpec spec_from_config(const ExperimentConfig& cfg) {
  const int dim = cfg.get_int("dim", 1);
  const double bns = cfg.get_f64("b_norm_sq", 4.0);
  if (dim < 1) throw ConfigError("dim", "must be >= 1");
  if (!(bns >= 0.0)) throw ConfigError("b_norm_sq", "must be >= 0");
  return LinearExampleSpec::isotropic(dim, bns);
}

int checked_range(const ExperimentConfig& cfg, int def_min, int def_max, int* k_min_out) {
  const int k_min = cfg.get_int("k_min", def_min);
  const int k_max = cfg.get_int("k_max", def_max);
  if (k_min < 1) throw ConfigError("k_min", "must be >= 1");
  if (k_max < k_min) throw ConfigError("k_max", "must be >= k_min");
  *k_min_out = k_min;
  return k_max;
}

int checked_threads(const ExperimentConfig& cfg) {
  const int threads = cfg.get_int("threads", 1);
  if (threads < 1) throw ConfigError("threads", "must be >= 1");
  return threads;
}

ordered_json fit_to_json(const RateFit& fit) {
  return ordered_json{{"log_c", fit.log_c},
                      {"residual", fit.residual},
                      {"log_k_coef", fit.log_k_coef},
                      {"points_used", fit.points_used}};
}

ordered_json series_fit_summary(const ErrorSeries& series, RateMode correct_mode) {
  const RateFit fit_sqrt = fit_rate(series, RateMode::sqrt_factorial);
  const RateFit fit_fact = fit_rate(series, RateMode::factorial);
  const bool sqrt_wins = fit_sqrt.residual < fit_fact.residual;
  const double lo = std::min(fit_sqrt.residual, fit_fact.residual);
  const double hi = std::max(fit_sqrt.residual, fit_fact.residual);
  ordered_json j;
  j["fits"] = ordered_json{{"sqrt-factorial", fit_to_json(fit_sqrt)},
                           {"factorial", fit_to_json(fit_fact)}};
  j["winner"] = sqrt_wins ? "sqrt-factorial" : "factorial";
  j["expected_winner"] =
      correct_mode == RateMode::sqrt_factorial ? "sqrt-factorial" : "factorial";
  j["residual_ratio"] = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  j["tie_warning"] = std::abs(fit_sqrt.residual - fit_fact.residual) < 1e-12;
  return j;
}

}  // namespace

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

CommandResult run_series(const ExperimentConfig& cfg) {
  cfg.restrict_keys({"experiment", "out_dir", "seed", "threads", "dim", "b_norm_sq", "eps",
                     "k_min", "k_max"});
  const LinearExampleSpec spec = spec_from_config(cfg);
  const double eps = cfg.get_f64("eps", 0.5);
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps", "must be in (0,1)");
  int n_min = 1;
  const int n_max = checked_range(cfg, 1, 20, &n_min);

  const double bns = spec.drift_norm_sq();
  const double v_inf = std::exp(-bns / 4.0);
  std::string csv = header_comment(cfg);
  csv += "# command=series b_norm_sq=" + format_sci(bns) + " eps=" + format_sci(eps) + "\n";
  csv += "n,v_n_origin,v_inf_origin,abs_gap,a21_lower,a21_upper,a10_lower\n";
  for (int n = n_min; n <= n_max; ++n) {
    const double vn = v_origin_series(spec, n);
    const double gap = std::abs(origin_gap(spec, n));
    csv += std::to_string(n) + "," + format_sci(vn) + "," + format_sci(v_inf) + "," +
           format_sci(gap);
    const bool a21_ok = static_cast<double>(n) >= bns / (2.0 * eps) - 1.0 - 1e-12;
    if (a21_ok) {
      const SandwichBounds sw = a21_sandwich(spec, n, eps);
      csv += "," + format_sci(sw.lower) + "," + format_sci(sw.upper);
    } else {
      csv += ",n/a,n/a";
    }
    const bool a10_ok = static_cast<double>(n) >= bns - 1.0 - 1e-12;
    csv += a10_ok ? "," + format_sci(a10_lower(spec, n)) : ",n/a";
    csv += "\n";
  }
  CommandResult result;
  result.files_written.push_back(write_artifact(cfg, "series.csv", csv));
  return result;
}

CommandResult run_phase_transition(const ExperimentConfig& cfg) {
  cfg.restrict_keys({"experiment", "out_dir", "seed", "threads", "dim", "b_norm_sq", "eps",
                     "k_min", "k_max", "e_source", "ode_horizon", "paths", "steps",
                     "cost_ceiling"});
  const int dim = cfg.get_int("dim", 1);
  const double bns = cfg.get_f64("b_norm_sq", 9.0);  // default shows the transition best
  if (dim < 1) throw ConfigError("dim", "must be >= 1");
  if (!(bns >= 0.0)) throw ConfigError("b_norm_sq", "must be >= 0");
  const LinearExampleSpec spec = LinearExampleSpec::isotropic(dim, bns);
  int k_min = 4;
  const int k_max = checked_range(cfg, 4, 20, &k_min);
  if (k_max - k_min + 1 < 3) throw ConfigError("k_max", "need at least 3 points in [k_min, k_max]");
  const std::string source = cfg.get_string("e_source", "gap");
  if (source != "gap" && source != "mc")
    throw ConfigError("e_source", "must be 'gap' or 'mc'");
  const double ode_T = cfg.get_f64("ode_horizon", 1.0);
  if (!(ode_T > 0.0)) throw ConfigError("ode_horizon", "must be > 0");
  const std::uint64_t seed = cfg.get_u64("seed", kDefaultSeed);

  ErrorSeries zdep;
  if (source == "gap") {
    for (int k = k_min; k <= k_max; ++k) {
      ErrorSeriesEntry e;
      e.k = k;
      e.estimate = std::abs(origin_gap(spec, k));
      e.seed = seed;
      zdep.entries.push_back(e);
    }
  } else {
    ErrorNormConfig mc;
    mc.paths = cfg.get_u64("paths", 10000);
    mc.steps = cfg.get_int("steps", 128);
    mc.seed = seed;
    mc.threads = checked_threads(cfg);
    // launch gate: one iterate evaluation per (path, grid point, order)
    const double cost = static_cast<double>(mc.paths) * mc.steps * (k_max + 1);
    const double ceiling = cfg.get_f64("cost_ceiling", 5e9);
    if (cost > ceiling)
      throw BudgetError("phase-transition: estimated Monte Carlo cost " +
                            std::to_string(cost) + " evaluations exceeds the ceiling " +
                            std::to_string(ceiling),
                        cost);
    zdep = estimate_e_series(spec, k_min, k_max, mc);
  }

  ErrorSeries ode;
  for (int k = k_min; k <= k_max; ++k) {
    ErrorSeriesEntry e;
    e.k = k;
    e.estimate = l01_error(ode_T, k).exact;
    e.seed = seed;
    ode.entries.push_back(e);
  }

  std::string csv = header_comment(cfg);
  csv += "# command=phase-transition e_source=" + source + "\n";
  csv += "series,k,error,half_width\n";
  for (const auto& e : zdep.entries)
    csv += "z_dependent," + std::to_string(e.k) + "," + format_sci(e.estimate) + "," +
           format_sci(e.half_width) + "\n";
  for (const auto& e : ode.entries)
    csv += "ode," + std::to_string(e.k) + "," + format_sci(e.estimate) + "," +
           format_sci(e.half_width) + "\n";

  ordered_json summary;
  summary["config_hash"] = hex64(cfg.hash());
  summary["seed"] = seed;
  summary["k_min"] = k_min;
  summary["k_max"] = k_max;
  summary["z_dependent"] = series_fit_summary(zdep, RateMode::sqrt_factorial);
  summary["z_dependent"]["source"] = source;
  summary["ode"] = series_fit_summary(ode, RateMode::factorial);
  summary["ode"]["horizon"] = ode_T;

  CommandResult result;
  result.summary_json = summary.dump(2) + "\n";
  result.files_written.push_back(write_artifact(cfg, "phase_transition.csv", csv));
  result.files_written.push_back(
      write_artifact(cfg, "phase_transition_summary.json", result.summary_json));
  return result;
}

CommandResult run_dimension_sweep(const ExperimentConfig& cfg) {
  cfg.restrict_keys({"experiment", "out_dir", "seed", "threads", "dims_list", "dim_alpha",
                     "k_list"});
  const std::vector<int> dims = cfg.get_int_list("dims_list", {1, 2, 4, 8, 16});
  const double alpha = cfg.get_f64("dim_alpha", 1.0);
  const std::vector<int> ks = cfg.get_int_list("k_list", {2, 4, 6});
  for (int m : dims)
    if (m < 1) throw ConfigError("dims_list", "dimensions must be >= 1");
  for (int k : ks)
    if (k < 1) throw ConfigError("k_list", "iteration indices must be >= 1");
  if (!(alpha >= 0.0)) throw ConfigError("dim_alpha", "must be >= 0");

  std::string csv = header_comment(cfg);
  csv += "# command=dimension-sweep lip_z_m=m^alpha alpha=" + format_sci(alpha) +
         " xi_second_moment=1 driver_norm_integral=0 horizon=1\n";
  csv += "m,k,lip_z,log_r01_envelope,log_a10_lower,admissible\n";
  for (int m : dims) {
    const double lz = std::pow(static_cast<double>(m), alpha);
    const double bns = lz * lz;  // |b|^2 = L_z^2 T with T = 1
    BsdeProblem problem;
    problem.horizon = 1.0;
    problem.value_dim = 1;
    problem.noise_dim = m;
    problem.lip_y = 0.0;
    problem.lip_z = lz;
    problem.xi_second_moment = 1.0;
    problem.driver_norm_integral = 0.0;
    for (int k : ks) {
      const double log_r01_env = 0.5 * r01_bound(problem, k);
      const int j = (k + 1) / 2;
      const double log_a10 =
          std::log(0.5) + j * std::log(bns / 4.0) - 0.5 * log_factorial(k);
      const bool admissible = static_cast<double>(k) >= bns - 1.0 - 1e-12;
      csv += std::to_string(m) + "," + std::to_string(k) + "," + format_sci(lz) + "," +
             format_sci(log_r01_env) + "," + format_sci(log_a10) + "," +
             (admissible ? "yes" : "no") + "\n";
    }
  }
  CommandResult result;
  result.files_written.push_back(write_artifact(cfg, "dimension_sweep.csv", csv));
  return result;
}

CommandResult run_apriori(const ExperimentConfig& cfg) {
  cfg.restrict_keys({"experiment", "out_dir", "seed", "threads", "dim", "b_norm_sq", "paths",
                     "steps", "k_list", "lambda_list", "alpha_list", "variants", "s"});
  const LinearExampleSpec spec = spec_from_config(cfg);
  const std::vector<int> ks = cfg.get_int_list("k_list", {1, 2, 3});
  for (int k : ks)
    if (k < 1) throw ConfigError("k_list", "iteration indices must be >= 1");
  const std::vector<std::string> lambda_tokens =
      cfg.get_string_list("lambda_list", {"0.5", "1", "k", "2k"});
  const std::vector<double> alphas = cfg.get_f64_list("alpha_list", {1.0, 2.0});
  for (double a : alphas)
    if (!(a > 0.0)) throw ConfigError("alpha_list", "alpha must be > 0");
  const std::vector<std::string> variant_names =
      cfg.get_string_list("variants", {"i", "ii", "iii"});
  const double s = cfg.get_f64("s", 0.0);
  if (!(s >= 0.0 && s < 1.0)) throw ConfigError("s", "must lie in [0,1)");

  AprioriConfig mc;
  mc.paths = cfg.get_u64("paths", 10000);
  mc.steps = cfg.get_int("steps", 128);
  mc.seed = cfg.get_u64("seed", kDefaultSeed);
  mc.threads = checked_threads(cfg);
  if (mc.paths < 2) throw ConfigError("paths", "must be >= 2");
  if (mc.steps < 2) throw ConfigError("steps", "must be >= 2");

  // lambda tokens: plain numbers, or multiples of k written like "k", "2k"
  const auto resolve_lambda = [&](const std::string& token, int k) -> double {
    try {
      double v = 0.0;
      if (token.back() == 'k') {
        const std::string coef = token.substr(0, token.size() - 1);
        v = (coef.empty() ? 1.0 : std::stod(coef)) * k;
      } else {
        v = std::stod(token);
      }
      if (!(v > 0.0)) throw ConfigError("lambda_list", "lambda must be > 0");
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("lambda_list", "bad token '" + token + "'");
    }
  };

  ordered_json entries = ordered_json::array();
  bool all_pass = true;
  for (int k : ks) {
    std::set<double> seen;
    for (const auto& token : lambda_tokens) {
      const double lambda = resolve_lambda(token, k);
      if (!seen.insert(lambda).second) continue;
      for (const auto& vn : variant_names) {
        AprioriVariant variant;
        if (vn == "i") variant = AprioriVariant::conditional_l2;
        else if (vn == "ii") variant = AprioriVariant::supremum;
        else if (vn == "iii") variant = AprioriVariant::gamma_weighted;
        else throw ConfigError("variants", "unknown variant '" + vn + "'");
        const std::vector<double> alpha_sweep =
            (variant == AprioriVariant::gamma_weighted) ? alphas : std::vector<double>{1.0};
        for (double a : alpha_sweep) {
          const AprioriReport rep = apriori_check(spec, k, lambda, s, variant, a, mc);
          ordered_json cell;
          cell["k"] = k;
          cell["lambda"] = lambda;
          cell["variant"] = vn;
          if (variant == AprioriVariant::gamma_weighted) cell["alpha"] = a;
          cell["s"] = rep.s_effective;
          cell["lhs"] = rep.lhs;
          cell["rhs"] = rep.rhs;
          cell["margin"] = rep.margin;
          cell["lhs_half_width"] = rep.lhs_half_width;
          cell["rhs_half_width"] = rep.rhs_half_width;
          cell["diff_se"] = rep.diff_se;
          cell["pass"] = rep.pass;
          all_pass = all_pass && rep.pass;
          entries.push_back(cell);
        }
      }
    }
  }

  ordered_json summary;
  summary["config_hash"] = hex64(cfg.hash());
  summary["seed"] = mc.seed;
  summary["paths"] = mc.paths;
  summary["steps"] = mc.steps;
  summary["b_norm_sq"] = spec.drift_norm_sq();
  summary["all_pass"] = all_pass;
  summary["entries"] = entries;

  CommandResult result;
  result.summary_json = summary.dump(2) + "\n";
  result.files_written.push_back(write_artifact(cfg, "apriori.json", result.summary_json));
  return result;
}

CommandResult run_picard_mc(const ExperimentConfig& cfg) {
  cfg.restrict_keys({"experiment", "out_dir", "seed", "threads", "dim", "b_norm_sq", "driver",
                     "k_min", "k_max", "budget", "cost_ceiling", "lip_y"});
  const std::string driver_name = cfg.get_string("driver", "linear-z");
  const int dim = cfg.get_int("dim", 1);
  if (dim < 1) throw ConfigError("dim", "must be >= 1");
  int n_min = 0;
  const int n_max = cfg.get_int("k_max", 3);
  n_min = cfg.get_int("k_min", 0);
  if (n_min < 0) throw ConfigError("k_min", "must be >= 0");
  if (n_max < n_min) throw ConfigError("k_max", "must be >= k_min");
  const std::uint64_t seed = cfg.get_u64("seed", kDefaultSeed);

  NestedPicardBudget budget;
  budget.per_level = {cfg.get_u64("budget", 200)};
  budget.cost_ceiling = cfg.get_f64("cost_ceiling", 1e9);
  if (budget.per_level[0] < 2) throw ConfigError("budget", "must be >= 2");
  if (!(budget.cost_ceiling > 0.0)) throw ConfigError("cost_ceiling", "must be > 0");

  const LinearExampleSpec spec = spec_from_config(cfg);
  const double lip_y = cfg.get_f64("lip_y", 1.0);

  enum class Zoo { linear_z, linear_y, zero } zoo;
  GenericBsde problem;
  if (driver_name == "linear-z") {
    zoo = Zoo::linear_z;
    problem = make_linear_z_problem(spec);
  } else if (driver_name == "linear-y") {
    if (dim != 1) throw ConfigError("dim", "linear-y driver is 1-dimensional");
    if (!(lip_y >= 0.0)) throw ConfigError("lip_y", "must be >= 0");
    zoo = Zoo::linear_y;
    problem = make_linear_y_problem(lip_y);
  } else if (driver_name == "zero") {
    zoo = Zoo::zero;
    problem = make_zero_driver_problem(spec);
  } else {
    throw ConfigError("driver", "must be one of linear-z, linear-y, zero");
  }

  validate_driver_lipschitz(problem, 64, seed);

  // gate on the deepest call before anything launches
  const double worst_cost = nested_picard_cost(budget, n_max);
  if (worst_cost > budget.cost_ceiling)
    throw BudgetError("picard-mc: estimated cost " + std::to_string(worst_cost) +
                          " sample evaluations at n = " + std::to_string(n_max) +
                          " exceeds the ceiling " + std::to_string(budget.cost_ceiling),
                      worst_cost);

  // oracle values at (t, x) = (0, 0)
  const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
  const auto oracle = [&](int n, double* y_oracle,
                          std::vector<double>* z_oracle) -> bool {
    switch (zoo) {
      case Zoo::linear_z: {
        const IterateEvaluator ev(spec, n);
        *y_oracle = ev.value(0.0, origin);
        *z_oracle = ev.gradient(0.0, origin);
        return true;
      }
      case Zoo::linear_y: {
        if (lip_y != 1.0) return false;  // closed form pinned for the unit constant
        *y_oracle = n == 0 ? 0.0 : l01_iterate(1.0, n - 1, 0.0);
        z_oracle->assign(1, 0.0);
        return true;
      }
      case Zoo::zero: {
        const IterateEvaluator ev(spec, std::min(n, 1));
        *y_oracle = ev.value(0.0, origin);
        *z_oracle = ev.gradient(0.0, origin);
        return true;
      }
    }
    return false;
  };

  std::string csv = header_comment(cfg);
  csv += "# command=picard-mc driver=" + driver_name +
         " budget=" + std::to_string(budget.per_level[0]) + "\n";
  csv += "n,y,y_se,y_oracle,y_dev_sigmas";
  for (int j = 0; j < dim; ++j) {
    const std::string z = "z" + std::to_string(j);
    csv += "," + z + "," + z + "_se," + z + "_oracle," + z + "_dev_sigmas";
  }
  csv += ",evaluations,time_cutoff,bias_bound\n";

  for (int n = n_min; n <= n_max; ++n) {
    const NestedPicardResult r = nested_picard(problem, n, 0.0, origin, budget, seed + static_cast<std::uint64_t>(n));
    double y_oracle = 0.0;
    std::vector<double> z_oracle;
    const bool have_oracle = oracle(n, &y_oracle, &z_oracle);
    csv += std::to_string(n) + "," + format_sci(r.y[0]) + "," + format_sci(r.y_se[0]);
    if (have_oracle) {
      const double dev = r.y_se[0] > 0.0 ? std::abs(r.y[0] - y_oracle) / r.y_se[0]
                                         : std::abs(r.y[0] - y_oracle);
      csv += "," + format_sci(y_oracle) + "," + format_sci(dev);
    } else {
      csv += ",n/a,n/a";
    }
    for (int j = 0; j < dim; ++j) {
      const double z = r.z[static_cast<std::size_t>(j)];
      const double se = r.z_se[static_cast<std::size_t>(j)];
      csv += "," + format_sci(z) + "," + format_sci(se);
      if (have_oracle) {
        const double zo = z_oracle[static_cast<std::size_t>(j)];
        const double dev = se > 0.0 ? std::abs(z - zo) / se : std::abs(z - zo);
        csv += "," + format_sci(zo) + "," + format_sci(dev);
      } else {
        csv += ",n/a,n/a";
      }
    }
    csv += "," + std::to_string(r.evaluations) + "," + format_sci(r.time_cutoff) + "," +
           format_sci(r.bias_bound) + "\n";
  }

  CommandResult result;
  result.files_written.push_back(write_artifact(cfg, "picard_mc.csv", csv));
  return result;
}

CommandResult run_command(const ExperimentConfig& cfg) {
  const std::string name = cfg.get_string("experiment", "");
  if (name == "series") return run_series(cfg);
  if (name == "phase-transition") return run_phase_transition(cfg);
  if (name == "dimension-sweep") return run_dimension_sweep(cfg);
  if (name == "apriori") return run_apriori(cfg);
  if (name == "picard-mc") return run_picard_mc(cfg);
  throw ConfigError("experiment", name.empty() ? "missing" : "unknown experiment '" + name + "'");
}

}  // namespace picardlab

#include "picardlab/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "picardlab/numeric_util.hpp"
#include "picardlab/special_functions.hpp"

namespace picardlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog35 = 3.5553480614894135;  // log(35)

double moment_factor_log(const BsdeProblem& p, int k) {
  const double m = p.xi_second_moment + p.horizon / static_cast<double>(k) * p.driver_norm_integral;
  return m > 0.0 ? std::log(m) : kNegInf;
}

}  // namespace

void BsdeProblem::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw std::invalid_argument("BsdeProblem: horizon must be finite and > 0");
  if (value_dim < 1 || noise_dim < 1)
    throw std::invalid_argument("BsdeProblem: dimensions must be >= 1");
  for (double v : {lip_y, lip_z, xi_second_moment, driver_norm_integral})
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("BsdeProblem: constants must be finite and >= 0");
}

BsdeProblem BsdeProblem::linear_example(const LinearExampleSpec& spec) {
  BsdeProblem p;
  p.horizon = LinearExampleSpec::horizon;
  p.value_dim = 1;
  p.noise_dim = spec.dim();
  p.lip_y = 0.0;
  p.lip_z = std::sqrt(spec.drift_norm_sq());
  p.xi_second_moment = ::picardlab::xi_second_moment(spec);
  p.driver_norm_integral = ::picardlab::driver_norm_integral(spec);
  return p;
}

double b20_bound(const BsdeProblem& problem, int k) {
  problem.validate();
  if (k < 1) throw std::invalid_argument("b20_bound: k must be >= 1");
  const double T = problem.horizon;
  const double log_ly = problem.lip_y > 0.0 ? std::log(problem.lip_y) : kNegInf;
  const double log_lz = problem.lip_z > 0.0 ? std::log(problem.lip_z) : kNegInf;
  // S(k) = sum_l k! L_y^l L_z^{k-l} T^{l/2} / (l!(k-l)! sqrt(l!)), 0^0 = 1
  double log_s = kNegInf;
  for (int l = 0; l <= k; ++l) {
    if (l > 0 && problem.lip_y == 0.0) continue;
    if (l < k && problem.lip_z == 0.0) continue;
    const double term = log_factorial(k) - log_factorial(l) - log_factorial(k - l) -
                        0.5 * log_factorial(l) + l * (log_ly == kNegInf ? 0.0 : log_ly) +
                        (k - l) * (log_lz == kNegInf ? 0.0 : log_lz) +
                        0.5 * l * std::log(T);
    log_s = log_add_exp(log_s, term);
  }
  const double log_moment = moment_factor_log(problem, k);
  if (log_s == kNegInf || log_moment == kNegInf) return kNegInf;
  return kLog35 + k * (std::log(T) + 1.0 - std::log(static_cast<double>(k))) + 2.0 * log_s +
         log_moment;
}

double r01_bound(const BsdeProblem& problem, int k) {
  problem.validate();
  if (k < 1) throw std::invalid_argument("r01_bound: k must be >= 1");
  const double base =
      4.0 * std::max(problem.horizon * problem.horizon, 1.0) * std::exp(1.0) *
      std::max(problem.lip_y * problem.lip_y, problem.lip_z * problem.lip_z);
  const double log_moment = moment_factor_log(problem, k);
  if (base == 0.0 || log_moment == kNegInf) return kNegInf;
  return kLog35 + k * std::log(base) - log_factorial(k) + log_moment;
}

double r02_bound(const BsdeProblem& problem, int k) {
  problem.validate();
  if (problem.lip_z != 0.0)
    throw std::invalid_argument("r02_bound: requires the z-independent case lip_z = 0");
  if (k < 1) throw std::invalid_argument("r02_bound: k must be >= 1");
  const double base = problem.horizon * problem.horizon * std::exp(1.0) * problem.lip_y *
                      problem.lip_y;
  const double log_moment = moment_factor_log(problem, k);
  if (base == 0.0 || log_moment == kNegInf) return kNegInf;
  return kLog35 + k * std::log(base) - 2.0 * log_factorial(k) + log_moment;
}

SandwichBounds a21_sandwich(const LinearExampleSpec& spec, int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("a21_sandwich: eps must be in (0,1)");
  if (n < 1) throw std::invalid_argument("a21_sandwich: n must be >= 1");
  const double bns = spec.drift_norm_sq();
  const double threshold = bns / (2.0 * eps) - 1.0;
  if (static_cast<double>(n) < threshold - 1e-12) {
    const int min_n = static_cast<int>(std::ceil(threshold - 1e-12));
    throw std::invalid_argument("a21_sandwich: n = " + std::to_string(n) +
                                " below the admissible threshold; need n >= " +
                                std::to_string(std::max(min_n, 1)));
  }
  const int j = (n + 1) / 2;
  double base = 1.0;  // (|b|^2/4)^j / j!
  for (int i = 1; i <= j; ++i) base *= (bns / 4.0) / static_cast<double>(i);
  return {base * (1.0 - eps), base / (1.0 - eps)};
}

double a10_lower_value(double b_norm_sq, int n) {
  if (n < 1) throw std::invalid_argument("a10_lower: n must be >= 1");
  if (b_norm_sq == 0.0) return 0.0;
  const int j = (n + 1) / 2;
  const double log_val = std::log(0.5) + j * std::log(b_norm_sq / 4.0) - 0.5 * log_factorial(n);
  return std::exp(log_val);
}

double a10_lower(const LinearExampleSpec& spec, int n) {
  const double bns = spec.drift_norm_sq();
  if (static_cast<double>(n) < bns - 1.0 - 1e-12)
    throw std::invalid_argument("a10_lower: requires n >= |b|^2 - 1, i.e. n >= " +
                                std::to_string(static_cast<int>(std::ceil(bns - 1.0 - 1e-12))));
  return a10_lower_value(bns, n);
}

double l01_iterate(double horizon, int n, double s) {
  if (!(horizon > 0.0)) throw std::invalid_argument("l01_iterate: horizon must be > 0");
  if (!(s >= 0.0 && s <= horizon))
    throw std::invalid_argument("l01_iterate: s must lie in [0, horizon]");
  if (n == kInfiniteOrder) return std::exp(horizon - s);
  if (n < 0) throw std::invalid_argument("l01_iterate: n must be >= 0 or kInfiniteOrder");
  KahanSum acc;
  double term = 1.0;
  acc.add(term);
  for (int k = 1; k <= n; ++k) {
    term *= (horizon - s) / static_cast<double>(k);
    acc.add(term);
  }
  return acc.value();
}

OdeError l01_error(double horizon, int n) {
  if (!(horizon > 0.0)) throw std::invalid_argument("l01_error: horizon must be > 0");
  if (n < 0) throw std::invalid_argument("l01_error: n must be >= 0");
  // tail of the exponential series, summed positively (no cancellation);
  // switches to log-sum-exp when e^T alone would overflow
  if (horizon <= 300.0) {
    KahanSum acc;
    double term = 1.0;
    for (int k = 1; k <= n + 1; ++k) term *= horizon / static_cast<double>(k);
    int k = n + 1;
    while (term > 0.0) {
      acc.add(term);
      ++k;
      term *= horizon / static_cast<double>(k);
      if (term < 1e-25 * acc.value() && k > horizon) break;
      if (k > n + 100000) break;
    }
    double lower = 1.0;
    for (int i = 1; i <= n + 1; ++i) lower *= horizon / static_cast<double>(i);
    return {acc.value(), lower};
  }
  double log_tail = kNegInf;
  for (int k = n + 1; k < n + 1 + 4 * static_cast<int>(horizon) + 200; ++k) {
    log_tail = log_add_exp(log_tail, k * std::log(horizon) - log_factorial(k));
  }
  const double log_lower = (n + 1) * std::log(horizon) - log_factorial(n + 1);
  return {std::exp(log_tail), std::exp(log_lower)};
}

BoundCurve bound_curve(BoundCurve::Kind kind, const BsdeProblem& problem,
                       std::span<const int> ks) {
  BoundCurve curve{kind, {}};
  for (int k : ks) {
    switch (kind) {
      case BoundCurve::Kind::b20_exact:
        curve.log_values[k] = 0.5 * b20_bound(problem, k);
        break;
      case BoundCurve::Kind::r01:
        curve.log_values[k] = 0.5 * r01_bound(problem, k);
        break;
      case BoundCurve::Kind::r02:
        curve.log_values[k] = 0.5 * r02_bound(problem, k);
        break;
      default:
        throw std::invalid_argument("bound_curve: kind does not take a BsdeProblem");
    }
  }
  return curve;
}

BoundCurve bound_curve(BoundCurve::Kind kind, const LinearExampleSpec& spec, double eps,
                       std::span<const int> ks) {
  BoundCurve curve{kind, {}};
  const double bns = spec.drift_norm_sq();
  for (int k : ks) {
    switch (kind) {
      case BoundCurve::Kind::thm1_lower:
      case BoundCurve::Kind::a10_lower: {
        if (static_cast<double>(k) < bns - 1.0 - 1e-12) continue;
        const double v = a10_lower(spec, k);
        if (v > 0.0) curve.log_values[k] = std::log(v);
        break;
      }
      case BoundCurve::Kind::a21_lower:
      case BoundCurve::Kind::a21_upper: {
        if (static_cast<double>(k) < bns / (2.0 * eps) - 1.0 - 1e-12) continue;
        const SandwichBounds sw = a21_sandwich(spec, k, eps);
        const double v = kind == BoundCurve::Kind::a21_lower ? sw.lower : sw.upper;
        if (v > 0.0) curve.log_values[k] = std::log(v);
        break;
      }
      default:
        throw std::invalid_argument("bound_curve: kind does not take a LinearExampleSpec");
    }
  }
  return curve;
}

BoundCurve bound_curve(BoundCurve::Kind kind, double horizon, std::span<const int> ks) {
  BoundCurve curve{kind, {}};
  for (int k : ks) {
    const OdeError e = l01_error(horizon, k);
    switch (kind) {
      case BoundCurve::Kind::l01_exact:
        curve.log_values[k] = std::log(e.exact);
        break;
      case BoundCurve::Kind::l01_lower:
        curve.log_values[k] = std::log(e.lower);
        break;
      default:
        throw std::invalid_argument("bound_curve: kind does not take a horizon");
    }
  }
  return curve;
}

std::string to_string(BoundCurve::Kind kind) {
  switch (kind) {
    case BoundCurve::Kind::b20_exact: return "b20-exact";
    case BoundCurve::Kind::r01: return "r01";
    case BoundCurve::Kind::r02: return "r02";
    case BoundCurve::Kind::thm1_lower: return "thm1-lower";
    case BoundCurve::Kind::a21_lower: return "a21-lower";
    case BoundCurve::Kind::a21_upper: return "a21-upper";
    case BoundCurve::Kind::a10_lower: return "a10-lower";
    case BoundCurve::Kind::l01_lower: return "l01-lower";
    case BoundCurve::Kind::l01_exact: return "l01-exact";
  }
  return "unknown";
}

}  // namespace picardlab

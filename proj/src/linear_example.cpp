#include "picardlab/linear_example.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "picardlab/numeric_util.hpp"
#include "picardlab/special_functions.hpp"

namespace picardlab {

namespace {

void check_point(const LinearExampleSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim())
    throw std::invalid_argument("linear example: point has dimension " +
                                std::to_string(x.size()) + ", spec has " +
                                std::to_string(spec.dim()));
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("linear example: non-finite point");
}

void check_time(double t, bool allow_one) {
  if (!(t >= 0.0) || !(allow_one ? t <= 1.0 : t < 1.0))
    throw std::invalid_argument("linear example: t = " + std::to_string(t) +
                                " outside " + (allow_one ? "[0,1]" : "[0,1)"));
}

// b^j / j! * D[j] tables per dimension, the per-coordinate factors of the
// multi-index expansion of the iterate series.
struct DimTables {
  std::vector<double> deriv;     // D[j] = d^j g_t(x_l)
  std::vector<double> weighted;  // c[j] = b^j/j! * D[j]
};

std::vector<DimTables> build_tables(const LinearExampleSpec& spec, double t,
                                    std::span<const double> x, int jmax) {
  std::vector<DimTables> tables(static_cast<std::size_t>(spec.dim()));
  for (int l = 0; l < spec.dim(); ++l) {
    auto& tab = tables[static_cast<std::size_t>(l)];
    tab.deriv.resize(static_cast<std::size_t>(jmax) + 1);
    tab.weighted.resize(static_cast<std::size_t>(jmax) + 1);
    smoothed_gaussian_deriv_table(t, x[static_cast<std::size_t>(l)], tab.deriv);
    double w = 1.0;  // b^j / j!
    const double b = spec.drift()[static_cast<std::size_t>(l)];
    for (int j = 0; j <= jmax; ++j) {
      if (j > 0) w *= b / static_cast<double>(j);
      tab.weighted[static_cast<std::size_t>(j)] = w * tab.deriv[static_cast<std::size_t>(j)];
    }
  }
  return tables;
}

}  // namespace

LinearExampleSpec::LinearExampleSpec(std::vector<double> drift) : drift_(std::move(drift)) {
  if (drift_.empty()) throw std::invalid_argument("LinearExampleSpec: dimension must be >= 1");
  double s = 0.0;
  for (double b : drift_) {
    if (!std::isfinite(b)) throw std::invalid_argument("LinearExampleSpec: non-finite drift");
    s += b * b;
  }
  drift_norm_sq_ = s;
}

LinearExampleSpec LinearExampleSpec::isotropic(int dim, double b_norm_sq) {
  if (dim < 1) throw std::invalid_argument("LinearExampleSpec: dimension must be >= 1");
  if (!(b_norm_sq >= 0.0) || !std::isfinite(b_norm_sq))
    throw std::invalid_argument("LinearExampleSpec: |b|^2 must be finite and >= 0");
  return LinearExampleSpec(
      std::vector<double>(static_cast<std::size_t>(dim), std::sqrt(b_norm_sq / dim)));
}

double smoothed_gaussian_deriv(double t, double x, int k) {
  if (k < 0) throw std::invalid_argument("smoothed_gaussian_deriv: k must be >= 0");
  check_time(t, /*allow_one=*/false);
  if (!std::isfinite(x)) throw std::invalid_argument("smoothed_gaussian_deriv: non-finite x");
  const double s = 2.0 - t;
  const double inv_sqrt_s = 1.0 / std::sqrt(s);
  const double u = x * inv_sqrt_s;
  const double g = inv_sqrt_s * std::exp(-0.5 * u * u);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(inv_sqrt_s, k) * hermite_eval(k, u) * g;
}

void smoothed_gaussian_deriv_table(double t, double x, std::span<double> out) {
  if (out.empty()) return;
  check_time(t, /*allow_one=*/false);
  if (!std::isfinite(x))
    throw std::invalid_argument("smoothed_gaussian_deriv_table: non-finite x");
  const double s = 2.0 - t;
  const double inv_sqrt_s = 1.0 / std::sqrt(s);
  const double u = x * inv_sqrt_s;
  const double g = inv_sqrt_s * std::exp(-0.5 * u * u);
  out[0] = g;
  if (out.size() == 1) return;
  double h_prev = 1.0;  // H_0(u)
  double h_cur = u;     // H_1(u)
  double scale = -inv_sqrt_s;
  for (std::size_t j = 1; j < out.size(); ++j) {
    out[j] = scale * h_cur * g;
    const double h_next = u * h_cur - static_cast<double>(j) * h_prev;
    h_prev = h_cur;
    h_cur = h_next;
    scale *= -inv_sqrt_s;
  }
}

IterateEvaluator::IterateEvaluator(LinearExampleSpec spec, int order)
    : spec_(std::move(spec)), order_(order) {
  if (order < 0 && order != kInfiniteOrder)
    throw std::invalid_argument("IterateEvaluator: order must be >= 0 or kInfiniteOrder");
}

double terminal_condition(const LinearExampleSpec& spec, std::span<const double> x) {
  check_point(spec, x);
  double nsq = 0.0;
  for (double v : x) nsq += v * v;
  return std::pow(2.0, 0.5 * spec.dim()) * std::exp(-0.5 * nsq);
}

double IterateEvaluator::value(double t, std::span<const double> x) const {
  check_point(spec_, x);
  check_time(t, /*allow_one=*/true);
  if (order_ == 0) return 0.0;
  if (t == 1.0) return terminal_condition(spec_, x);
  if (order_ == kInfiniteOrder) return eval_limit(spec_, t, x, {});

  const int d = spec_.dim();
  const int jmax = order_ - 1;
  const auto tables = build_tables(spec_, t, x, jmax);
  const double front = std::pow(2.0, 0.5 * d);
  std::vector<double> terms;
  terms.reserve(64);
  double time_pow = 1.0;  // (1-t)^k
  for (int k = 0; k <= jmax; ++k) {
    for_each_multi_index(d, k, [&](std::span<const int> alpha) {
      double prod = 1.0;
      for (int l = 0; l < d; ++l)
        prod *= tables[static_cast<std::size_t>(l)]
                    .weighted[static_cast<std::size_t>(alpha[static_cast<std::size_t>(l)])];
      terms.push_back(front * time_pow * prod);
    });
    time_pow *= (1.0 - t);
  }
  return sum_descending(terms);
}

std::vector<double> IterateEvaluator::gradient(double t, std::span<const double> x) const {
  check_point(spec_, x);
  check_time(t, /*allow_one=*/false);
  const int d = spec_.dim();
  std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
  if (order_ == 0) return grad;
  if (order_ == kInfiniteOrder) {
    eval_limit(spec_, t, x, grad);
    return grad;
  }

  const int jmax = order_;  // one extra derivative order per component
  const auto tables = build_tables(spec_, t, x, jmax);
  const double front = std::pow(2.0, 0.5 * d);
  std::vector<std::vector<double>> terms(static_cast<std::size_t>(d));
  std::vector<double> prefix(static_cast<std::size_t>(d) + 1);
  std::vector<double> suffix(static_cast<std::size_t>(d) + 1);
  double time_pow = 1.0;
  for (int k = 0; k < order_; ++k) {
    for_each_multi_index(d, k, [&](std::span<const int> alpha) {
      prefix[0] = 1.0;
      for (int l = 0; l < d; ++l)
        prefix[static_cast<std::size_t>(l) + 1] =
            prefix[static_cast<std::size_t>(l)] *
            tables[static_cast<std::size_t>(l)]
                .weighted[static_cast<std::size_t>(alpha[static_cast<std::size_t>(l)])];
      suffix[static_cast<std::size_t>(d)] = 1.0;
      for (int l = d - 1; l >= 0; --l)
        suffix[static_cast<std::size_t>(l)] =
            suffix[static_cast<std::size_t>(l) + 1] *
            tables[static_cast<std::size_t>(l)]
                .weighted[static_cast<std::size_t>(alpha[static_cast<std::size_t>(l)])];
      for (int j = 0; j < d; ++j) {
        const auto& tab = tables[static_cast<std::size_t>(j)];
        const int aj = alpha[static_cast<std::size_t>(j)];
        // replace the j-th factor b^a/a! * D[a] by b^a/a! * D[a+1]
        double wj = 1.0;
        const double b = spec_.drift()[static_cast<std::size_t>(j)];
        for (int i = 1; i <= aj; ++i) wj *= b / static_cast<double>(i);
        const double factor = wj * tab.deriv[static_cast<std::size_t>(aj) + 1];
        terms[static_cast<std::size_t>(j)].push_back(
            front * time_pow * prefix[static_cast<std::size_t>(j)] *
            suffix[static_cast<std::size_t>(j) + 1] * factor);
      }
    });
    time_pow *= (1.0 - t);
  }
  for (int j = 0; j < d; ++j)
    grad[static_cast<std::size_t>(j)] = sum_descending(terms[static_cast<std::size_t>(j)]);
  return grad;
}

void eval_iterates(const LinearExampleSpec& spec, double t, std::span<const double> x,
                   int kmax, std::span<double> values, std::span<double> gradients) {
  check_point(spec, x);
  check_time(t, /*allow_one=*/gradients.empty());
  if (kmax < 0) throw std::invalid_argument("eval_iterates: kmax must be >= 0");
  const int d = spec.dim();
  const std::size_t n_orders = static_cast<std::size_t>(kmax) + 1;
  if (values.size() != n_orders)
    throw std::invalid_argument("eval_iterates: values span must have kmax+1 entries");
  const bool want_grad = !gradients.empty();
  if (want_grad && gradients.size() != n_orders * static_cast<std::size_t>(d))
    throw std::invalid_argument("eval_iterates: gradients span must be (kmax+1)*dim");

  if (t == 1.0) {
    const double term = terminal_condition(spec, x);
    values[0] = 0.0;
    for (int k = 1; k <= kmax; ++k) values[static_cast<std::size_t>(k)] = term;
    return;
  }

  const int jmax = want_grad ? kmax : std::max(kmax - 1, 0);
  const auto tables = build_tables(spec, t, x, jmax);
  const double front = std::pow(2.0, 0.5 * d);

  // per-order sums O_k and their gradient counterparts
  std::vector<double> order_sum(static_cast<std::size_t>(kmax), 0.0);
  std::vector<double> order_grad(want_grad ? static_cast<std::size_t>(kmax) * d : 0, 0.0);
  std::vector<double> prefix(static_cast<std::size_t>(d) + 1);
  std::vector<double> suffix(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k + 1 <= kmax; ++k) {
    for_each_multi_index(d, k, [&](std::span<const int> alpha) {
      prefix[0] = 1.0;
      for (int l = 0; l < d; ++l)
        prefix[static_cast<std::size_t>(l) + 1] =
            prefix[static_cast<std::size_t>(l)] *
            tables[static_cast<std::size_t>(l)]
                .weighted[static_cast<std::size_t>(alpha[static_cast<std::size_t>(l)])];
      order_sum[static_cast<std::size_t>(k)] += prefix[static_cast<std::size_t>(d)];
      if (want_grad) {
        suffix[static_cast<std::size_t>(d)] = 1.0;
        for (int l = d - 1; l >= 0; --l)
          suffix[static_cast<std::size_t>(l)] =
              suffix[static_cast<std::size_t>(l) + 1] *
              tables[static_cast<std::size_t>(l)]
                  .weighted[static_cast<std::size_t>(alpha[static_cast<std::size_t>(l)])];
        for (int j = 0; j < d; ++j) {
          const auto& tab = tables[static_cast<std::size_t>(j)];
          const int aj = alpha[static_cast<std::size_t>(j)];
          double wj = 1.0;
          const double b = spec.drift()[static_cast<std::size_t>(j)];
          for (int i = 1; i <= aj; ++i) wj *= b / static_cast<double>(i);
          order_grad[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] +=
              prefix[static_cast<std::size_t>(j)] * suffix[static_cast<std::size_t>(j) + 1] *
              wj * tab.deriv[static_cast<std::size_t>(aj) + 1];
        }
      }
    });
  }

  values[0] = 0.0;
  if (want_grad)
    for (int j = 0; j < d; ++j) gradients[static_cast<std::size_t>(j)] = 0.0;
  KahanSum vsum;
  std::vector<KahanSum> gsum(static_cast<std::size_t>(d));
  double time_pow = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    vsum.add(front * time_pow * order_sum[static_cast<std::size_t>(k - 1)]);
    values[static_cast<std::size_t>(k)] = vsum.value();
    if (want_grad) {
      for (int j = 0; j < d; ++j) {
        gsum[static_cast<std::size_t>(j)].add(
            front * time_pow *
            order_grad[static_cast<std::size_t>(k - 1) * d + static_cast<std::size_t>(j)]);
        gradients[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] =
            gsum[static_cast<std::size_t>(j)].value();
      }
    }
    time_pow *= (1.0 - t);
  }
}

double eval_limit(const LinearExampleSpec& spec, double t, std::span<const double> x,
                  std::span<double> grad_out) {
  check_point(spec, x);
  const bool want_grad = !grad_out.empty();
  check_time(t, /*allow_one=*/!want_grad);
  if (want_grad && grad_out.size() != static_cast<std::size_t>(spec.dim()))
    throw std::invalid_argument("eval_limit: grad_out must have dim entries");
  const int d = spec.dim();
  if (t == 1.0) return terminal_condition(spec, x);
  // v^inf(t,x) = 2^{d/2} prod_l g_t(x_l + b_l(1-t)); the arithmetic mirrors
  // eval_iterates exactly so that b = 0 makes iterate and limit coincide
  // bit for bit
  const double front = std::pow(2.0, 0.5 * d);
  std::vector<std::array<double, 2>> tab(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    const double y =
        x[static_cast<std::size_t>(l)] + spec.drift()[static_cast<std::size_t>(l)] * (1.0 - t);
    smoothed_gaussian_deriv_table(
        t, y, std::span<double>(tab[static_cast<std::size_t>(l)].data(), want_grad ? 2 : 1));
  }
  std::vector<double> prefix(static_cast<std::size_t>(d) + 1);
  std::vector<double> suffix(static_cast<std::size_t>(d) + 1);
  prefix[0] = 1.0;
  for (int l = 0; l < d; ++l)
    prefix[static_cast<std::size_t>(l) + 1] =
        prefix[static_cast<std::size_t>(l)] * tab[static_cast<std::size_t>(l)][0];
  const double order_sum = 0.0 + prefix[static_cast<std::size_t>(d)];
  const double value = front * 1.0 * order_sum;
  if (want_grad) {
    suffix[static_cast<std::size_t>(d)] = 1.0;
    for (int l = d - 1; l >= 0; --l)
      suffix[static_cast<std::size_t>(l)] =
          suffix[static_cast<std::size_t>(l) + 1] * tab[static_cast<std::size_t>(l)][0];
    for (int j = 0; j < d; ++j) {
      const double og = 0.0 + prefix[static_cast<std::size_t>(j)] *
                                  suffix[static_cast<std::size_t>(j) + 1] * 1.0 *
                                  tab[static_cast<std::size_t>(j)][1];
      grad_out[static_cast<std::size_t>(j)] = front * 1.0 * og;
    }
  }
  return value;
}

double v_origin_series(const LinearExampleSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("v_origin_series: n must be >= 1");
  const double x = spec.drift_norm_sq() / 4.0;
  const int imax = (n - 1) / 2;
  KahanSum acc;
  double term = 1.0;
  acc.add(term);
  for (int i = 1; i <= imax; ++i) {
    term *= -x / static_cast<double>(i);
    acc.add(term);
  }
  return acc.value();
}

double origin_gap(const LinearExampleSpec& spec, int n) {
  if (n < 1) throw std::invalid_argument("origin_gap: n must be >= 1");
  const double x = spec.drift_norm_sq() / 4.0;
  if (x == 0.0) return 0.0;
  const int j = (n + 1) / 2;
  double term = (j % 2 == 0) ? 1.0 : -1.0;
  for (int i = 1; i <= j; ++i) term *= x / static_cast<double>(i);
  KahanSum acc;
  int i = j;
  while (term != 0.0) {
    acc.add(term);
    ++i;
    term *= -x / static_cast<double>(i);
    if (std::abs(term) < 1e-25 * std::abs(acc.value()) && i > j + 4) break;
    if (i > j + 300) break;
  }
  return acc.value();
}

double pde_residual(const LinearExampleSpec& spec, double t, std::span<const double> x,
                    double h) {
  check_point(spec, x);
  if (!(h > 0.0)) throw std::invalid_argument("pde_residual: h must be > 0");
  if (!(t - h > 0.0) || !(t + h < 1.0))
    throw std::invalid_argument("pde_residual: need 0 < t-h and t+h < 1");
  const IterateEvaluator v(spec, kInfiniteOrder);
  const double center = v.value(t, x);
  double res = (v.value(t + h, x) - v.value(t - h, x)) / (2.0 * h);
  std::vector<double> xp(x.begin(), x.end());
  for (int j = 0; j < spec.dim(); ++j) {
    const double xj = xp[static_cast<std::size_t>(j)];
    xp[static_cast<std::size_t>(j)] = xj + h;
    const double up = v.value(t, xp);
    xp[static_cast<std::size_t>(j)] = xj - h;
    const double um = v.value(t, xp);
    xp[static_cast<std::size_t>(j)] = xj;
    res += 0.5 * (up - 2.0 * center + um) / (h * h);
    res += spec.drift()[static_cast<std::size_t>(j)] * (up - um) / (2.0 * h);
  }
  return res;
}

double xi_second_moment(const LinearExampleSpec& spec) {
  return std::pow(2.0 / std::sqrt(3.0), spec.dim());
}

double driver_norm_density(const LinearExampleSpec& spec, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("driver_norm_density: t must be in [0,1]");
  const double bns = spec.drift_norm_sq();
  const double d = spec.dim();
  const double one_mt = 1.0 - t;
  const double amp = std::pow(4.0 / (4.0 - t * t), 0.5 * d) *
                     std::exp(-bns * one_mt * one_mt / (t + 2.0));
  const double bracket =
      bns * one_mt * one_mt / ((t + 2.0) * (t + 2.0)) + t / (4.0 - t * t);
  return amp * bns * bracket;
}

double driver_norm_integral(const LinearExampleSpec& spec) {
  return integrate_adaptive([&](double t) { return driver_norm_density(spec, t); }, 0.0, 1.0,
                            1e-12);
}

}  // namespace picardlab

#include "picardlab/rate_fit.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "picardlab/special_functions.hpp"

namespace picardlab {

namespace {

// least squares for up to 3 regressors via normal equations
std::vector<double> solve_least_squares(const std::vector<std::array<double, 3>>& rows,
                                        const std::vector<double>& y, int m) {
  std::array<std::array<double, 4>, 3> a{};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            rows[r][static_cast<std::size_t>(i)] * rows[r][static_cast<std::size_t>(j)];
      a[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] +=
          rows[r][static_cast<std::size_t>(i)] * y[r];
    }
  }
  // Gaussian elimination with partial pivoting
  for (int c = 0; c < m; ++c) {
    int pivot = c;
    for (int r = c + 1; r < m; ++r)
      if (std::abs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
          std::abs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(c)]))
        pivot = r;
    std::swap(a[static_cast<std::size_t>(c)], a[static_cast<std::size_t>(pivot)]);
    const double diag = a[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    if (diag == 0.0) throw std::domain_error("fit_rate: singular regression system");
    for (int r = 0; r < m; ++r) {
      if (r == c) continue;
      const double factor =
          a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / diag;
      for (int j = c; j <= m; ++j)
        a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
            factor * a[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
    }
  }
  std::vector<double> beta(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    beta[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] /
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return beta;
}

}  // namespace

RateFit fit_rate(const ErrorSeries& errors, RateMode mode, int min_k) {
  const double pow_fact = (mode == RateMode::sqrt_factorial) ? 0.5 : 1.0;
  int finite_entries = 0;
  bool any_positive = false;
  std::map<int, std::pair<double, std::pair<double, int>>> groups;  // j -> (sum_k, (sum_y, n))
  for (const auto& e : errors.entries) {
    if (!std::isfinite(e.estimate)) continue;
    ++finite_entries;
    if (e.estimate > 0.0) any_positive = true;
  }
  if (finite_entries < 3)
    throw std::invalid_argument("fit_rate: need at least 3 finite error entries");
  if (!any_positive) throw std::domain_error("fit_rate: all errors are zero, fit degenerate");

  for (const auto& e : errors.entries) {
    if (!std::isfinite(e.estimate) || e.estimate <= 0.0 || e.k < min_k) continue;
    const double y = std::log(e.estimate) + pow_fact * log_factorial(e.k);
    const int j = (e.k + 1) / 2;
    auto& g = groups[j];
    g.first += e.k;
    g.second.first += y;
    g.second.second += 1;
  }
  if (groups.size() < 2)
    throw std::invalid_argument("fit_rate: need at least 2 usable groups with k >= " +
                                std::to_string(min_k));

  std::vector<std::array<double, 3>> rows;
  std::vector<double> ys;
  for (const auto& [j, g] : groups) {
    const double kbar = g.first / g.second.second;
    const double ybar = g.second.first / g.second.second;
    rows.push_back({kbar, std::log(kbar), 1.0});
    ys.push_back(ybar);
  }
  const int m = rows.size() >= 3 ? 3 : 2;
  if (m == 2)
    for (auto& r : rows) r[1] = 1.0;  // drop the log k regressor, keep {k, 1}
  const auto beta = solve_least_squares(rows, ys, m);

  double ss = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double fit = 0.0;
    for (int i = 0; i < m; ++i) fit += beta[static_cast<std::size_t>(i)] * rows[r][static_cast<std::size_t>(i)];
    const double d = ys[r] - fit;
    ss += d * d;
  }
  RateFit out;
  out.log_c = beta[0];
  out.log_k_coef = (m == 3) ? beta[1] : 0.0;
  out.residual = std::sqrt(ss / static_cast<double>(rows.size()));
  out.points_used = static_cast<int>(rows.size());
  return out;
}

}  // namespace picardlab

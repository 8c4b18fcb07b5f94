#include "picardlab/nested_picard.hpp"

#include <cmath>

#include "picardlab/rng.hpp"

namespace picardlab {

namespace {

constexpr std::uint64_t kNestedDomain = 0x6e657374u;  // "nest"

std::uint64_t level_budget(const NestedPicardBudget& budget, int depth) {
  if (budget.per_level.empty())
    throw std::invalid_argument("nested_picard: budget must have at least one level entry");
  const std::size_t i =
      std::min(static_cast<std::size_t>(depth), budget.per_level.size() - 1);
  const std::uint64_t m = budget.per_level[i];
  if (m < 2) throw std::invalid_argument("nested_picard: per-level budget must be >= 2");
  return m;
}

struct Workspace {
  const GenericBsde* problem;
  const NestedPicardBudget* budget;
  std::uint64_t key;
  std::uint64_t evaluations = 0;
};

// accumulators for one estimate; mean over M of terminal and driver parts
void estimate(Workspace& ws, int level, int depth, double t, std::span<const double> x,
              std::uint64_t stream, std::span<double> y_out, std::span<double> z_out,
              std::span<double> y_var, std::span<double> z_var, double* bias_bound,
              double* delta_out) {
  const int d = ws.problem->value_dim;
  const int m = ws.problem->noise_dim;
  const std::size_t dz = static_cast<std::size_t>(d) * static_cast<std::size_t>(m);
  std::fill(y_out.begin(), y_out.end(), 0.0);
  std::fill(z_out.begin(), z_out.end(), 0.0);
  if (level == 0) return;

  const double T = ws.problem->horizon;
  const double span = T - t;
  const std::uint64_t M = level_budget(*ws.budget, depth);
  const bool want_var = !y_var.empty();

  CounterStream rng(ws.key, stream);
  std::vector<double> point(static_cast<std::size_t>(m));
  std::vector<double> shift(static_cast<std::size_t>(m));
  std::vector<double> gval(static_cast<std::size_t>(d));
  std::vector<double> y_sum(static_cast<std::size_t>(d), 0.0), y_sq(want_var ? static_cast<std::size_t>(d) : 0, 0.0);
  std::vector<double> z_sum(dz, 0.0), z_sq(want_var ? dz : 0, 0.0);

  // terminal part: E[g(x + W_T - W_t)] and its Brownian-weight gradient
  const double sigma = std::sqrt(span);
  for (std::uint64_t i = 0; i < M; ++i) {
    for (int j = 0; j < m; ++j) shift[static_cast<std::size_t>(j)] = sigma * rng.normal();
    for (int j = 0; j < m; ++j)
      point[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + shift[static_cast<std::size_t>(j)];
    ws.problem->terminal(point, gval);
    ++ws.evaluations;
    for (int a = 0; a < d; ++a) {
      y_sum[static_cast<std::size_t>(a)] += gval[static_cast<std::size_t>(a)];
      if (want_var) y_sq[static_cast<std::size_t>(a)] += gval[static_cast<std::size_t>(a)] * gval[static_cast<std::size_t>(a)];
      for (int j = 0; j < m; ++j) {
        const double zc = gval[static_cast<std::size_t>(a)] * shift[static_cast<std::size_t>(j)] / span;
        z_sum[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] += zc;
        if (want_var) z_sq[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] += zc * zc;
      }
    }
  }
  for (int a = 0; a < d; ++a) {
    y_out[static_cast<std::size_t>(a)] = y_sum[static_cast<std::size_t>(a)] / static_cast<double>(M);
    for (int j = 0; j < m; ++j)
      z_out[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] =
          z_sum[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] / static_cast<double>(M);
  }
  if (want_var) {
    for (int a = 0; a < d; ++a) {
      const double mean = y_out[static_cast<std::size_t>(a)];
      y_var[static_cast<std::size_t>(a)] =
          (y_sq[static_cast<std::size_t>(a)] / static_cast<double>(M) - mean * mean) / static_cast<double>(M);
      for (int j = 0; j < m; ++j) {
        const std::size_t idx = static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j);
        const double zmean = z_out[idx];
        z_var[idx] = (z_sq[idx] / static_cast<double>(M) - zmean * zmean) / static_cast<double>(M);
      }
    }
  }

  // driver part: int_t^T E[f(s, Y^{level-1}_s, Z^{level-1}_s)] ds with a
  // uniformly sampled time on [t + delta, T]; the cutoff keeps the
  // (W_s - W_t)/(s - t) weight variance finite
  const double delta = span / 1000.0;
  const double weight = span - delta;
  if (delta_out) *delta_out = delta;
  if (weight <= 0.0) return;

  std::fill(y_sum.begin(), y_sum.end(), 0.0);
  std::fill(z_sum.begin(), z_sum.end(), 0.0);
  if (want_var) {
    std::fill(y_sq.begin(), y_sq.end(), 0.0);
    std::fill(z_sq.begin(), z_sq.end(), 0.0);
  }
  std::vector<double> y_rec(static_cast<std::size_t>(d)), z_rec(dz);
  std::vector<double> fval(static_cast<std::size_t>(d));
  double f_norm_sum = 0.0;
  for (std::uint64_t i = 0; i < M; ++i) {
    const double u = rng.uniform();
    const double s = t + delta + u * weight;
    const double sig = std::sqrt(s - t);
    for (int j = 0; j < m; ++j) shift[static_cast<std::size_t>(j)] = sig * rng.normal();
    for (int j = 0; j < m; ++j)
      point[static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(j)] + shift[static_cast<std::size_t>(j)];
    estimate(ws, level - 1, depth + 1, s, point, rng.child(i), y_rec, z_rec, {}, {}, nullptr,
             nullptr);
    ws.problem->driver.f(s, y_rec, z_rec, fval);
    ++ws.evaluations;
    double fn = 0.0;
    for (int a = 0; a < d; ++a) fn += fval[static_cast<std::size_t>(a)] * fval[static_cast<std::size_t>(a)];
    f_norm_sum += std::sqrt(fn);
    for (int a = 0; a < d; ++a) {
      const double yc = weight * fval[static_cast<std::size_t>(a)];
      y_sum[static_cast<std::size_t>(a)] += yc;
      if (want_var) y_sq[static_cast<std::size_t>(a)] += yc * yc;
      for (int j = 0; j < m; ++j) {
        const double zc = weight * fval[static_cast<std::size_t>(a)] * shift[static_cast<std::size_t>(j)] / (s - t);
        z_sum[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] += zc;
        if (want_var) z_sq[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j)] += zc * zc;
      }
    }
  }
  for (int a = 0; a < d; ++a) {
    const double mean = y_sum[static_cast<std::size_t>(a)] / static_cast<double>(M);
    y_out[static_cast<std::size_t>(a)] += mean;
    if (want_var)
      y_var[static_cast<std::size_t>(a)] +=
          (y_sq[static_cast<std::size_t>(a)] / static_cast<double>(M) - mean * mean) / static_cast<double>(M);
    for (int j = 0; j < m; ++j) {
      const std::size_t idx = static_cast<std::size_t>(a) * m + static_cast<std::size_t>(j);
      const double zmean = z_sum[idx] / static_cast<double>(M);
      z_out[idx] += zmean;
      if (want_var) z_var[idx] += (z_sq[idx] / static_cast<double>(M) - zmean * zmean) / static_cast<double>(M);
    }
  }
  if (bias_bound) *bias_bound = delta * f_norm_sum / static_cast<double>(M);
}

}  // namespace

void validate_driver_lipschitz(const GenericBsde& problem, int probes, std::uint64_t seed) {
  const int d = problem.value_dim;
  const int m = problem.noise_dim;
  const std::size_t dz = static_cast<std::size_t>(d) * static_cast<std::size_t>(m);
  CounterStream rng(mix64(seed ^ 0x70726f62u), 0);
  std::vector<double> y1(static_cast<std::size_t>(d)), y2(static_cast<std::size_t>(d));
  std::vector<double> z1(dz), z2(dz), f1(static_cast<std::size_t>(d)), f2(static_cast<std::size_t>(d));
  for (int p = 0; p < probes; ++p) {
    const double t = problem.horizon * rng.uniform();
    double dy = 0.0, dzn = 0.0, df = 0.0;
    for (auto& v : y1) v = 3.0 * rng.normal();
    for (auto& v : y2) v = 3.0 * rng.normal();
    for (auto& v : z1) v = 3.0 * rng.normal();
    for (auto& v : z2) v = 3.0 * rng.normal();
    problem.driver.f(t, y1, z1, f1);
    problem.driver.f(t, y2, z2, f2);
    for (std::size_t i = 0; i < y1.size(); ++i) dy += (y1[i] - y2[i]) * (y1[i] - y2[i]);
    for (std::size_t i = 0; i < z1.size(); ++i) dzn += (z1[i] - z2[i]) * (z1[i] - z2[i]);
    for (std::size_t i = 0; i < f1.size(); ++i) df += (f1[i] - f2[i]) * (f1[i] - f2[i]);
    const double allowed = problem.driver.lip_y * std::sqrt(dy) +
                           problem.driver.lip_z * std::sqrt(dzn);
    if (std::sqrt(df) > allowed + 1e-12)
      throw std::invalid_argument(
          "validate_driver_lipschitz: probe exceeded the declared constants");
  }
}

double nested_picard_cost(const NestedPicardBudget& budget, int n) {
  double cost = 0.0;
  for (int depth = n - 1; depth >= 0; --depth) {
    const double m = static_cast<double>(level_budget(budget, depth));
    cost = m * (2.0 + cost);
  }
  return cost;
}

NestedPicardResult nested_picard(const GenericBsde& problem, int n, double t,
                                 std::span<const double> x, const NestedPicardBudget& budget,
                                 std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("nested_picard: n must be >= 0");
  if (!(problem.horizon > 0.0))
    throw std::invalid_argument("nested_picard: horizon must be > 0");
  if (!(t >= 0.0 && t < problem.horizon))
    throw std::invalid_argument("nested_picard: t must lie in [0, horizon)");
  if (static_cast<int>(x.size()) != problem.noise_dim)
    throw std::invalid_argument("nested_picard: state has wrong dimension");
  const double cost = nested_picard_cost(budget, n);
  if (cost > budget.cost_ceiling)
    throw BudgetError("nested_picard: estimated cost " + std::to_string(cost) +
                          " sample evaluations exceeds the ceiling " +
                          std::to_string(budget.cost_ceiling),
                      cost);

  const int d = problem.value_dim;
  const int m = problem.noise_dim;
  NestedPicardResult out;
  out.y.assign(static_cast<std::size_t>(d), 0.0);
  out.z.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(m), 0.0);
  out.y_se.assign(out.y.size(), 0.0);
  out.z_se.assign(out.z.size(), 0.0);
  if (n == 0) return out;

  Workspace ws{&problem, &budget, mix64(seed ^ kNestedDomain), 0};
  std::vector<double> y_var(out.y.size(), 0.0), z_var(out.z.size(), 0.0);
  estimate(ws, n, 0, t, x, mix64(seed), out.y, out.z, y_var, z_var, &out.bias_bound,
           &out.time_cutoff);
  for (std::size_t i = 0; i < y_var.size(); ++i) out.y_se[i] = std::sqrt(std::max(y_var[i], 0.0));
  for (std::size_t i = 0; i < z_var.size(); ++i) out.z_se[i] = std::sqrt(std::max(z_var[i], 0.0));
  out.evaluations = ws.evaluations;
  return out;
}

}  // namespace picardlab

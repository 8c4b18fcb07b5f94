#include "picardlab/error_norm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "picardlab/brownian.hpp"
#include "picardlab/parallel.hpp"

namespace picardlab {

ErrorSeries estimate_e_series(const LinearExampleSpec& spec, int k_min, int k_max,
                              const ErrorNormConfig& config) {
  if (k_min < 1 || k_max < k_min)
    throw std::invalid_argument("estimate_e_series: need 1 <= k_min <= k_max");
  if (config.paths < 2) throw std::invalid_argument("estimate_e_series: need paths >= 2");
  if (config.steps < 2) throw std::invalid_argument("estimate_e_series: need steps >= 2");

  const int d = spec.dim();
  const int n_steps = config.steps;
  const int n_orders = k_max + 1;
  const double dt = LinearExampleSpec::horizon / n_steps;
  const std::uint64_t n_paths = config.paths;
  const std::size_t n_k = static_cast<std::size_t>(k_max - k_min + 1);

  const PathEnsemble paths(LinearExampleSpec::horizon, n_steps, d, n_paths, config.seed);

  // per-path functionals, written to disjoint slots so the reduction below
  // is independent of the thread count
  std::vector<double> per_path(static_cast<std::size_t>(n_paths) * n_k);

  parallel_for(n_paths, config.threads, [&](std::uint64_t p) {
    std::vector<double> w(static_cast<std::size_t>(n_steps + 1) * d);
    paths.path(p).positions(w);
    std::vector<double> values(static_cast<std::size_t>(n_orders));
    std::vector<double> grads(static_cast<std::size_t>(n_orders) * d);
    std::vector<double> grad_inf(static_cast<std::size_t>(d));
    std::vector<double> sup_sq(n_k, 0.0);
    std::vector<double> z_int(n_k, 0.0);
    for (int i = 0; i < n_steps; ++i) {  // t = 1 contributes zero gap and no gradient
      const double t = i * dt;
      const std::span<const double> x(&w[static_cast<std::size_t>(i) * d],
                                      static_cast<std::size_t>(d));
      eval_iterates(spec, t, x, k_max, values, grads);
      const double v_inf = eval_limit(spec, t, x, grad_inf);
      // trapezoid weights on [0, t_{N-1}] plus a left rectangle on the final cell
      double weight = dt;
      if (i == 0) weight = 0.5 * dt;
      if (i == n_steps - 1) weight = 1.5 * dt;
      if (n_steps == 1) weight = dt;
      for (int k = k_min; k <= k_max; ++k) {
        const std::size_t slot = static_cast<std::size_t>(k - k_min);
        const double dy = values[static_cast<std::size_t>(k)] - v_inf;
        if (dy * dy > sup_sq[slot]) sup_sq[slot] = dy * dy;
        double zsq = 0.0;
        for (int j = 0; j < d; ++j) {
          const double dz = grads[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] -
                            grad_inf[static_cast<std::size_t>(j)];
          zsq += dz * dz;
        }
        z_int[slot] += weight * zsq;
      }
    }
    for (std::size_t s = 0; s < n_k; ++s)
      per_path[static_cast<std::size_t>(p) * n_k + s] = sup_sq[s] + z_int[s];
  });

  ErrorSeries out;
  for (int k = k_min; k <= k_max; ++k) {
    const std::size_t slot = static_cast<std::size_t>(k - k_min);
    double mean = 0.0;
    for (std::uint64_t p = 0; p < n_paths; ++p)
      mean += per_path[static_cast<std::size_t>(p) * n_k + slot];
    mean /= static_cast<double>(n_paths);
    double var = 0.0;
    for (std::uint64_t p = 0; p < n_paths; ++p) {
      const double dev = per_path[static_cast<std::size_t>(p) * n_k + slot] - mean;
      var += dev * dev;
    }
    var /= static_cast<double>(n_paths - 1);
    const double hw_mean = 1.959963984540054 * std::sqrt(var / static_cast<double>(n_paths));
    ErrorSeriesEntry e;
    e.k = k;
    e.estimate = std::sqrt(mean);
    // delta method through x -> sqrt(x); zero mean happens only for b = 0
    e.half_width = mean > 0.0 ? hw_mean / (2.0 * std::sqrt(mean)) : 0.0;
    e.paths = n_paths;
    e.steps = n_steps;
    e.seed = config.seed;
    out.entries.push_back(e);
  }
  return out;
}

ErrorSeriesEntry estimate_e_k(const LinearExampleSpec& spec, int k,
                              const ErrorNormConfig& config) {
  return estimate_e_series(spec, k, k, config).entries.front();
}

}  // namespace picardlab

#include "picardlab/apriori.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "picardlab/brownian.hpp"
#include "picardlab/parallel.hpp"

namespace picardlab {

AprioriReport apriori_check(const LinearExampleSpec& spec, int k, double lambda, double s,
                            AprioriVariant variant, double alpha, const AprioriConfig& config) {
  if (k < 1) throw std::invalid_argument("apriori_check: k must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("apriori_check: lambda must be > 0");
  if (variant == AprioriVariant::gamma_weighted && !(alpha > 0.0))
    throw std::invalid_argument("apriori_check: alpha must be > 0 for the weighted variant");
  if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("apriori_check: s must lie in [0,1)");
  if (config.paths < 2) throw std::invalid_argument("apriori_check: need paths >= 2");
  if (config.steps < 2) throw std::invalid_argument("apriori_check: need steps >= 2");

  const int d = spec.dim();
  const int n_steps = config.steps;
  const double dt = 1.0 / n_steps;
  const int i_s = static_cast<int>(std::lround(s / dt));
  const double s_eff = i_s * dt;
  const std::uint64_t n_paths = config.paths;
  const double gamma_a = std::tgamma(alpha);
  const double gamma_a1 = std::tgamma(alpha + 1.0);

  const PathEnsemble paths(1.0, n_steps, d, n_paths, config.seed);
  std::vector<double> lhs_p(static_cast<std::size_t>(n_paths));
  std::vector<double> rhs_p(static_cast<std::size_t>(n_paths));

  // cell mass of the weight u^beta over [t_i, t_{i+1}]
  const auto cell_mass = [&](int i, double beta) {
    const double a = i * dt;
    const double b = (i + 1) * dt;
    return (std::pow(b, beta + 1.0) - std::pow(a, beta + 1.0)) / (beta + 1.0);
  };

  parallel_for(n_paths, config.threads, [&](std::uint64_t p) {
    std::vector<double> w(static_cast<std::size_t>(n_steps + 1) * d);
    paths.path(p).positions(w);
    std::vector<double> values(static_cast<std::size_t>(k) + 1);
    std::vector<double> grads((static_cast<std::size_t>(k) + 1) * d);
    std::vector<double> grad_inf(static_cast<std::size_t>(d));
    // weighted integrands on grid points 0..N-1 (gradients stop before t=1)
    std::vector<double> ey(static_cast<std::size_t>(n_steps) + 1, 0.0);  // e^{lt} |Y_t|^2
    std::vector<double> ez(static_cast<std::size_t>(n_steps), 0.0);      // e^{lt} |Z_t|^2
    std::vector<double> ea(static_cast<std::size_t>(n_steps), 0.0);      // e^{lt} |A_t|^2
    for (int i = 0; i < n_steps; ++i) {
      const double t = i * dt;
      const std::span<const double> x(&w[static_cast<std::size_t>(i) * d],
                                      static_cast<std::size_t>(d));
      eval_iterates(spec, t, x, k, values, grads);
      const double v_inf = eval_limit(spec, t, x, grad_inf);
      const double elt = std::exp(lambda * t);
      const double dy = values[static_cast<std::size_t>(k)] - v_inf;
      double zsq = 0.0;
      double adot = 0.0;
      for (int j = 0; j < d; ++j) {
        const double dzk = grads[static_cast<std::size_t>(k) * d + static_cast<std::size_t>(j)] -
                           grad_inf[static_cast<std::size_t>(j)];
        const double dzk1 =
            grads[(static_cast<std::size_t>(k) - 1) * d + static_cast<std::size_t>(j)] -
            grad_inf[static_cast<std::size_t>(j)];
        zsq += dzk * dzk;
        adot += spec.drift()[static_cast<std::size_t>(j)] * dzk1;
      }
      ey[static_cast<std::size_t>(i)] = elt * dy * dy;
      ez[static_cast<std::size_t>(i)] = elt * zsq;
      ea[static_cast<std::size_t>(i)] = elt * adot * adot;
    }
    // terminal Y gap vanishes for k >= 1: both iterates hit the terminal
    ey[static_cast<std::size_t>(n_steps)] = 0.0;

    // trapezoid cells; the final cell uses its left endpoint
    const auto grid_integral = [&](const std::vector<double>& f, int from, double beta) {
      double acc = 0.0;
      for (int i = from; i < n_steps; ++i) {
        const double avg = (i + 1 < n_steps)
                               ? 0.5 * (f[static_cast<std::size_t>(i)] + f[static_cast<std::size_t>(i) + 1])
                               : f[static_cast<std::size_t>(i)];
        acc += cell_mass(i, beta) * avg;
      }
      return acc;
    };

    double lhs = 0.0, rhs = 0.0;
    switch (variant) {
      case AprioriVariant::conditional_l2: {
        lhs = ey[static_cast<std::size_t>(i_s)] + grid_integral(ez, i_s, 0.0);
        rhs = grid_integral(ea, i_s, 0.0) / lambda;
        break;
      }
      case AprioriVariant::supremum: {
        double tail = 0.0;
        double best = 0.0;  // i = N term: e^{lT} |Y_T|^2 + 0 = 0
        for (int i = n_steps - 1; i >= i_s; --i) {
          const double avg = (i + 1 < n_steps)
                                 ? 0.5 * (ez[static_cast<std::size_t>(i)] + ez[static_cast<std::size_t>(i) + 1])
                                 : ez[static_cast<std::size_t>(i)];
          tail += cell_mass(i, 0.0) * avg;
          best = std::max(best, ey[static_cast<std::size_t>(i)] + tail);
        }
        lhs = best;
        rhs = 34.0 * grid_integral(ea, i_s, 0.0) / lambda;
        break;
      }
      case AprioriVariant::gamma_weighted: {
        lhs = grid_integral(ey, 0, alpha - 1.0) / gamma_a +
              grid_integral(ez, 0, alpha) / gamma_a1;
        rhs = grid_integral(ea, 0, alpha) / (lambda * gamma_a1);
        break;
      }
    }
    lhs_p[static_cast<std::size_t>(p)] = lhs;
    rhs_p[static_cast<std::size_t>(p)] = rhs;
  });

  AprioriReport rep;
  rep.s_effective = s_eff;
  double lhs_mean = 0.0, rhs_mean = 0.0;
  for (std::uint64_t p = 0; p < n_paths; ++p) {
    lhs_mean += lhs_p[static_cast<std::size_t>(p)];
    rhs_mean += rhs_p[static_cast<std::size_t>(p)];
  }
  lhs_mean /= static_cast<double>(n_paths);
  rhs_mean /= static_cast<double>(n_paths);
  double lhs_var = 0.0, rhs_var = 0.0, diff_var = 0.0;
  for (std::uint64_t p = 0; p < n_paths; ++p) {
    const double dl = lhs_p[static_cast<std::size_t>(p)] - lhs_mean;
    const double dr = rhs_p[static_cast<std::size_t>(p)] - rhs_mean;
    lhs_var += dl * dl;
    rhs_var += dr * dr;
    diff_var += (dr - dl) * (dr - dl);
  }
  const double denom = static_cast<double>(n_paths - 1);
  lhs_var /= denom;
  rhs_var /= denom;
  diff_var /= denom;
  const double inv_sqrt_p = 1.0 / std::sqrt(static_cast<double>(n_paths));
  rep.lhs = lhs_mean;
  rep.rhs = rhs_mean;
  rep.margin = rhs_mean - lhs_mean;
  rep.lhs_half_width = 1.959963984540054 * std::sqrt(lhs_var) * inv_sqrt_p;
  rep.rhs_half_width = 1.959963984540054 * std::sqrt(rhs_var) * inv_sqrt_p;
  rep.diff_se = std::sqrt(diff_var) * inv_sqrt_p;
  rep.pass = lhs_mean <= rhs_mean + 4.0 * rep.diff_se;
  return rep;
}

}  // namespace picardlab

#pragma once

#include <span>
#include <vector>

namespace picardlab {

/// Iteration index standing for the n = infinity iterate (the solution).
inline constexpr int kInfiniteOrder = -1;

/// Parameters of the linear example: spatial dimension d, drift vector b,
/// horizon fixed to 1, terminal condition 2^{d/2} exp(-|x|^2/2).
class LinearExampleSpec {
 public:
  explicit LinearExampleSpec(std::vector<double> drift);

  /// b with |b|^2 = b_norm_sq spread evenly over `dim` coordinates.
  static LinearExampleSpec isotropic(int dim, double b_norm_sq);

  int dim() const { return static_cast<int>(drift_.size()); }
  std::span<const double> drift() const { return drift_; }
  double drift_norm_sq() const { return drift_norm_sq_; }

  static constexpr double horizon = 1.0;

 private:
  std::vector<double> drift_;
  double drift_norm_sq_;  // cached once at construction
};

/// d^k/dx^k of g_t(x) = E[exp(-(x+Z)^2/2)], Z ~ N(0, 1-t), via the
/// Gaussian-convolution closed form
///   g_t(x) = (2-t)^{-1/2} exp(-x^2 / (2(2-t)))
/// and the sign-corrected Hermite identity
///   d^k g_t(x) = (2-t)^{-(k+1)/2} (-1)^k H_k(x/sqrt(2-t)) exp(-x^2/(2(2-t))).
/// Requires 0 <= t < 1.
double smoothed_gaussian_deriv(double t, double x, int k);

/// Fills out[j] = d^j/dx^j g_t(x) for j = 0..out.size()-1 in one recurrence
/// sweep. Requires 0 <= t < 1.
void smoothed_gaussian_deriv_table(double t, double x, std::span<double> out);

/// Closed-form evaluator for the Picard iterate v^n (or the solution
/// v^infty when order == kInfiniteOrder). Immutable and safe to share
/// across threads.
class IterateEvaluator {
 public:
  IterateEvaluator(LinearExampleSpec spec, int order);

  const LinearExampleSpec& spec() const { return spec_; }
  int order() const { return order_; }

  /// v^n(t, x); t in [0, 1], x of length dim. t = 1 returns the terminal
  /// condition directly.
  double value(double t, std::span<const double> x) const;

  /// Spatial gradient of v^n at (t, x); requires t in [0, 1).
  std::vector<double> gradient(double t, std::span<const double> x) const;

 private:
  LinearExampleSpec spec_;
  int order_;
};

/// Terminal condition 2^{d/2} exp(-|x|^2/2).
double terminal_condition(const LinearExampleSpec& spec, std::span<const double> x);

/// Batch evaluation of v^k(t,x) for k = 0..kmax (values[k] = v^k) and,
/// when gradients is non-empty, of the gradients (row k holds grad v^k,
/// row-major (kmax+1) x dim; requires t < 1 in that case).
void eval_iterates(const LinearExampleSpec& spec, double t, std::span<const double> x,
                   int kmax, std::span<double> values, std::span<double> gradients);

/// v^infty(t,x) and optionally its gradient (grad_out empty or length dim;
/// gradient requires t < 1).
double eval_limit(const LinearExampleSpec& spec, double t, std::span<const double> x,
                  std::span<double> grad_out);

/// Exact partial sum v^n(0,0) = 1 + sum_{i=1}^{floor((n-1)/2)}
/// (-1)^i |b|^{2i} / (4^i i!); n >= 1.
double v_origin_series(const LinearExampleSpec& spec, int n);

/// Signed gap v^infty(0,0) - v^n(0,0), evaluated as the tail series
/// sum_{i=floor((n+1)/2)}^infty (-1)^i (|b|^2/4)^i / i!  so that it stays
/// accurate far below double cancellation level; n >= 1.
double origin_gap(const LinearExampleSpec& spec, int n);

/// Central-finite-difference residual of the PDE
///   dv/dt + (1/2) Lap v + <b, grad v> = 0
/// for v = v^infty at (t, x) with step h; requires 0 < t-h and t+h < 1.
double pde_residual(const LinearExampleSpec& spec, double t, std::span<const double> x,
                    double h);

/// E|xi|^2 = E[2^d exp(-|W_1|^2)] = (2/sqrt(3))^d, closed form.
double xi_second_moment(const LinearExampleSpec& spec);

/// Closed form of t -> E[ <b, grad v^infty(t, W_t)>^2 ].
double driver_norm_density(const LinearExampleSpec& spec, double t);

/// int_0^1 E[ <b, grad v^infty(t, W_t)>^2 ] dt by adaptive quadrature on
/// the closed-form density.
double driver_norm_integral(const LinearExampleSpec& spec);

}  // namespace picardlab

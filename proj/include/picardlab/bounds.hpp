#pragma once

#include <map>
#include <string>

#include "picardlab/linear_example.hpp"

namespace picardlab {

/// Generic Markovian BSDE description feeding the explicit error bounds.
struct BsdeProblem {
  double horizon = 1.0;            // T
  int value_dim = 1;               // d
  int noise_dim = 1;               // m
  double lip_y = 0.0;              // Lipschitz constant in y
  double lip_z = 0.0;              // Lipschitz constant in z
  double xi_second_moment = 0.0;   // E|xi|^2
  double driver_norm_integral = 0.0;  // int_0^T E|f(t,Y^inf,Z^inf)|^2 dt

  void validate() const;

  /// Problem instance whose bounds envelope the linear example:
  /// L_y = 0, L_z = |b|, T = 1, moments from the validated closed forms.
  static BsdeProblem linear_example(const LinearExampleSpec& spec);
};

/// log of the squared-error bound
///   35 (Te/k)^k S(k)^2 (E|xi|^2 + (T/k) int_0^T E|f^inf|^2 dt),
///   S(k) = sum_l k! L_y^l L_z^{k-l} T^{l/2} / (l! (k-l)! sqrt(l!)),
/// the l-sum accumulated with log-sum-exp. Returns -inf when S(k) or the
/// moment factor vanishes.
double b20_bound(const BsdeProblem& problem, int k);

/// log of 35 (4 max{T^2,1} e max{L_y^2, L_z^2})^k / k! times the moment
/// factor; dominates b20_bound pointwise.
double r01_bound(const BsdeProblem& problem, int k);

/// z-independent case: log of 35 (T^2 e L_y^2)^k / (k!)^2 times the moment
/// factor. Requires lip_z == 0.
double r02_bound(const BsdeProblem& problem, int k);

struct SandwichBounds {
  double lower;
  double upper;
};

/// Envelopes (|b|^2/4)^j (1-eps)/j! and (|b|^2/4)^j / (j! (1-eps)) with
/// j = floor((n+1)/2), valid for n >= |b|^2/(2 eps) - 1 (rejected below
/// that threshold, reporting the minimal admissible n).
SandwichBounds a21_sandwich(const LinearExampleSpec& spec, int n, double eps);

/// Lower bound (1/2) (|b|^2/4)^{floor((n+1)/2)} / sqrt(n!) on the t = 0
/// iterate error; requires n >= |b|^2 - 1.
double a10_lower(const LinearExampleSpec& spec, int n);

/// Same formula without the admissibility gate (used by the dimension
/// sweep, where the fixed k may sit below the threshold).
double a10_lower_value(double b_norm_sq, int n);

/// ODE Picard iterate Y_s^n = 1 + sum_{k=1}^n (T-s)^k / k!; returns
/// the solution e^{T-s} for n = kInfiniteOrder.
double l01_iterate(double horizon, int n, double s);

struct OdeError {
  double exact;  // sup_s |Y^inf_s - Y^n_s| = sum_{k=n+1}^inf T^k/k!
  double lower;  // T^{n+1}/(n+1)!
};

/// Exact sup-norm ODE Picard error and its factorial lower bound.
OdeError l01_error(double horizon, int n);

/// Convergence-envelope curves, values stored as log e_k per k.
struct BoundCurve {
  enum class Kind {
    b20_exact,
    r01,
    r02,
    thm1_lower,
    a21_lower,
    a21_upper,
    a10_lower,
    l01_lower,
    l01_exact,
  };

  Kind kind;
  std::map<int, double> log_values;
};

std::string to_string(BoundCurve::Kind kind);

/// Envelope curves over the iteration indices `ks` (log e_k per k).
/// b20_exact / r01 / r02 evaluate the squared-error bounds halved onto the
/// e_k scale.
BoundCurve bound_curve(BoundCurve::Kind kind, const BsdeProblem& problem,
                       std::span<const int> ks);

/// thm1_lower / a10_lower / a21_lower / a21_upper for the linear example;
/// eps only enters the sandwich kinds. Inadmissible k are skipped.
BoundCurve bound_curve(BoundCurve::Kind kind, const LinearExampleSpec& spec, double eps,
                       std::span<const int> ks);

/// l01_exact / l01_lower for the ODE example with the given horizon.
BoundCurve bound_curve(BoundCurve::Kind kind, double horizon, std::span<const int> ks);

}  // namespace picardlab

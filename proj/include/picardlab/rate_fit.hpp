#pragma once

#include "picardlab/error_series.hpp"

namespace picardlab {

/// Convergence-rate hypotheses: e_k ~ c^k / sqrt(k!) versus e_k ~ c^k / k!.
enum class RateMode { sqrt_factorial, factorial };

struct RateFit {
  double log_c = 0.0;       // fitted log c (coefficient of k)
  double residual = 0.0;    // RMS misfit of the regression
  double log_k_coef = 0.0;  // fitted coefficient of log k (polynomial prefactor order)
  int points_used = 0;      // regression points after filtering and pairing
};

/// Least-squares rate diagnostic. The transform
///   y_k = log e_k + (1/2) log k!   (sqrt-factorial mode)
///   y_k = log e_k +       log k!   (factorial mode)
/// is regressed on {k, log k, 1}. Points with the same floor exponent
/// j = floor((k+1)/2) are averaged first, which removes the period-2
/// oscillation that j induces in the exact gap series; the log k regressor
/// absorbs sub-exponential polynomial prefactors. A series matching the
/// mode leaves a near-zero residual; the wrong mode leaves the
/// unabsorbable (k/2) log k drift.
///
/// Entries with k < min_k are discarded (tiny k carry no asymptotics).
/// Throws std::invalid_argument on fewer than 3 usable entries and
/// std::domain_error when every error is zero (degenerate fit).
RateFit fit_rate(const ErrorSeries& errors, RateMode mode, int min_k = 4);

}  // namespace picardlab

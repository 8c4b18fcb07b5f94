#pragma once

#include <cstdint>

#include "picardlab/error_series.hpp"
#include "picardlab/linear_example.hpp"

namespace picardlab {

struct ErrorNormConfig {
  int steps = 128;
  std::uint64_t paths = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Monte Carlo estimate of
///   e_k = ( E[ sup_t |Y^k_t - Y^inf_t|^2 + int_0^1 |Z^k_t - Z^inf_t|^2 dt ] )^{1/2}
/// for the linear example, with Y^k_t = v^k(t, W_t) and Z^k_t =
/// grad v^k(t, W_t). The essential supremum is approximated by the grid
/// maximum; the time integral by the trapezoid rule whose last cell uses
/// the left endpoint (the gradient is not evaluated at t = 1). Half-widths
/// are 95% intervals mapped through the square root by the delta method.
/// One path sweep fills every k in [k_min, k_max].
ErrorSeries estimate_e_series(const LinearExampleSpec& spec, int k_min, int k_max,
                              const ErrorNormConfig& config);

ErrorSeriesEntry estimate_e_k(const LinearExampleSpec& spec, int k,
                              const ErrorNormConfig& config);

}  // namespace picardlab

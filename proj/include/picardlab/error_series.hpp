#pragma once

#include <cstdint>
#include <vector>

namespace picardlab {

/// One empirical (or exact) error value per Picard iteration index k.
struct ErrorSeriesEntry {
  int k = 0;
  double estimate = 0.0;    // e_k or its Monte Carlo estimate, >= 0
  double half_width = 0.0;  // 95% confidence half-width (0 for exact values)
  std::uint64_t paths = 0;  // Monte Carlo sample count (0 for exact values)
  int steps = 0;            // time grid size used (0 for exact values)
  std::uint64_t seed = 0;   // seed that reproduces the estimate
};

struct ErrorSeries {
  std::vector<ErrorSeriesEntry> entries;
};

}  // namespace picardlab

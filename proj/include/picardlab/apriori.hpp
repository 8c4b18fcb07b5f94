#pragma once

#include <cstdint>

#include "picardlab/linear_example.hpp"

namespace picardlab {

/// The three a priori estimates checked statistically on the Picard-gap
/// process Y_t = (v^k - v^inf)(t, W_t), Z_t = (grad v^k - grad v^inf)(t, W_t),
/// A_t = <b, (grad v^{k-1} - grad v^inf)(t, W_t)> with zero terminal value.
enum class AprioriVariant {
  conditional_l2,  // E[e^{ls}|Y_s|^2 + int_s^T e^{lt}|Z|^2] <= E[e^{lT}|Y_T|^2 + int e^{lt}/l |A|^2]
  supremum,        // sup-in-time version, universal constant 34
  gamma_weighted,  // t^{a-1} e^{lt} weights, Gamma-normalized
};

struct AprioriConfig {
  std::uint64_t paths = 10000;
  int steps = 128;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct AprioriReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;          // rhs - lhs
  double lhs_half_width = 0.0;  // 95% half-widths of each side
  double rhs_half_width = 0.0;
  double diff_se = 0.0;  // standard error of (rhs - lhs)
  bool pass = true;      // lhs <= rhs + 4 * diff_se
  double s_effective = 0.0;  // s snapped onto the time grid
};

/// Monte Carlo check of one inequality; expectation taken unconditionally
/// at fixed s (tower property). lambda must be > 0; alpha only enters the
/// gamma_weighted variant and must be > 0 there.
AprioriReport apriori_check(const LinearExampleSpec& spec, int k, double lambda, double s,
                            AprioriVariant variant, double alpha, const AprioriConfig& config);

}  // namespace picardlab

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace picardlab {

/// Raised when an estimated Monte Carlo cost exceeds the configured
/// ceiling; carries the estimate so callers can report it.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string what, double estimated_cost)
      : std::runtime_error(std::move(what)), estimated_cost_(estimated_cost) {}
  double estimated_cost() const { return estimated_cost_; }

 private:
  double estimated_cost_;
};

/// Driver f(t, y, z) -> R^d with declared Lipschitz constants
/// |f(t,y,z) - f(t,y',z')| <= lip_y |y - y'| + lip_z |z - z'|_F.
struct GenericDriver {
  std::function<void(double t, std::span<const double> y, std::span<const double> z,
                     std::span<double> out)>
      f;
  double lip_y = 0.0;
  double lip_z = 0.0;
  bool z_dependent = false;
};

/// Markovian BSDE: terminal g(W_T) and driver f, Y in R^d, W in R^m.
struct GenericBsde {
  double horizon = 1.0;
  int value_dim = 1;
  int noise_dim = 1;
  std::function<void(std::span<const double> x, std::span<double> out)> terminal;
  GenericDriver driver;
};

/// Spot-checks the declared Lipschitz constants on random probe pairs;
/// throws std::invalid_argument when a probe exceeds them beyond 1e-12
/// slack.
void validate_driver_lipschitz(const GenericBsde& problem, int probes, std::uint64_t seed);

struct NestedPicardBudget {
  /// per_level[l] = samples spent at recursion depth l (depth 0 estimates
  /// the final iterate); missing depths reuse the last entry.
  std::vector<std::uint64_t> per_level{200};
  double cost_ceiling = 1e9;
};

struct NestedPicardResult {
  std::vector<double> y;     // value_dim
  std::vector<double> z;     // value_dim x noise_dim, row-major
  std::vector<double> y_se;  // standard errors of y from top-level samples
  std::vector<double> z_se;
  double time_cutoff = 0.0;  // delta excluded near the lower integration limit
  double bias_bound = 0.0;   // first-order cutoff bias, delta * mean |f|
  std::uint64_t evaluations = 0;  // realized sample evaluations
};

/// Estimated sample evaluations of a depth-n call (the launch gate).
double nested_picard_cost(const NestedPicardBudget& budget, int n);

/// Recursive Monte Carlo estimate of the n-th Picard iterate
/// (Y^n_t, Z^n_t) = (y^n(t,x), grad y^n(t,x)) for the Markovian problem:
/// terminal part averaged over Gaussian endpoints, driver part via a
/// uniformly sampled time with importance weight, gradients via the
/// Brownian-increment weight (W_s - W_t)/(s - t). Time sampling starts at
/// t + delta, delta = (T-t)/1000; the induced bias bound is reported.
NestedPicardResult nested_picard(const GenericBsde& problem, int n, double t,
                                 std::span<const double> x, const NestedPicardBudget& budget,
                                 std::uint64_t seed);

}  // namespace picardlab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace picardlab {

/// One discretized Brownian path on the uniform grid t_i = i T / N.
/// Increments are a pure function of (seed, path_index, step, coordinate):
/// the same triple always yields the same numbers, independent of thread
/// scheduling or evaluation order.
class PathGrid {
 public:
  PathGrid(double horizon, int steps, int dim, std::uint64_t seed, std::uint64_t path_index);

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t path_index() const { return path_index_; }
  double dt() const { return horizon_ / steps_; }

  /// Gaussian increment W_{t_{step+1}} - W_{t_step} in coordinate `coord`.
  double increment(int step, int coord) const;

  /// Fills positions W_{t_i} for i = 0..N, row-major (N+1) x dim; W_0 = 0.
  void positions(std::span<double> out) const;

 private:
  double horizon_;
  int steps_;
  int dim_;
  std::uint64_t seed_;
  std::uint64_t path_index_;
  std::uint64_t key_;
};

/// The P paths {PathGrid(T, N, m, seed, p)}_{p < P}; a factory so callers
/// can iterate deterministically and in parallel.
class PathEnsemble {
 public:
  PathEnsemble(double horizon, int steps, int dim, std::uint64_t path_count,
               std::uint64_t seed);

  std::uint64_t path_count() const { return path_count_; }
  PathGrid path(std::uint64_t index) const;

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

 private:
  double horizon_;
  int steps_;
  int dim_;
  std::uint64_t path_count_;
  std::uint64_t seed_;
};

/// Convenience spelling of the spec operation.
PathEnsemble simulate_paths(double horizon, int dim, int steps, std::uint64_t path_count,
                            std::uint64_t seed);

}  // namespace picardlab

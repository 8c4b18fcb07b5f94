#include "picardlab/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "picardlab/rng.hpp"

namespace picardlab {

namespace {
// domain separator keeping path generation apart from other consumers of
// the same user seed
constexpr std::uint64_t kPathDomain = 0x70617468u;  // "path"
}  // namespace

PathGrid::PathGrid(double horizon, int steps, int dim, std::uint64_t seed,
                   std::uint64_t path_index)
    : horizon_(horizon),
      steps_(steps),
      dim_(dim),
      seed_(seed),
      path_index_(path_index),
      key_(mix64(seed ^ kPathDomain)) {
  if (!(horizon > 0.0)) throw std::invalid_argument("PathGrid: horizon must be > 0");
  if (steps < 1) throw std::invalid_argument("PathGrid: steps must be >= 1");
  if (dim < 1) throw std::invalid_argument("PathGrid: dim must be >= 1");
}

double PathGrid::increment(int step, int coord) const {
  if (step < 0 || step >= steps_) throw std::out_of_range("PathGrid: step out of range");
  if (coord < 0 || coord >= dim_) throw std::out_of_range("PathGrid: coord out of range");
  const std::uint64_t slots_per_step = (static_cast<std::uint64_t>(dim_) + 1) / 2;
  const std::uint64_t slot =
      static_cast<std::uint64_t>(step) * slots_per_step + static_cast<std::uint64_t>(coord) / 2;
  const NormalPair z = normal_pair(key_, path_index_, slot);
  const double g = (coord % 2 == 0) ? z.z0 : z.z1;
  return g * std::sqrt(dt());
}

void PathGrid::positions(std::span<double> out) const {
  const std::size_t stride = static_cast<std::size_t>(dim_);
  if (out.size() != (static_cast<std::size_t>(steps_) + 1) * stride)
    throw std::invalid_argument("PathGrid: positions span must be (steps+1)*dim");
  for (std::size_t j = 0; j < stride; ++j) out[j] = 0.0;
  for (int i = 0; i < steps_; ++i) {
    const std::size_t row = (static_cast<std::size_t>(i) + 1) * stride;
    for (int j = 0; j < dim_; ++j)
      out[row + static_cast<std::size_t>(j)] =
          out[row - stride + static_cast<std::size_t>(j)] + increment(i, j);
  }
}

PathEnsemble::PathEnsemble(double horizon, int steps, int dim, std::uint64_t path_count,
                           std::uint64_t seed)
    : horizon_(horizon), steps_(steps), dim_(dim), path_count_(path_count), seed_(seed) {
  if (path_count < 1) throw std::invalid_argument("PathEnsemble: need at least one path");
  PathGrid(horizon, steps, dim, seed, 0);  // validates the grid parameters
}

PathGrid PathEnsemble::path(std::uint64_t index) const {
  if (index >= path_count_) throw std::out_of_range("PathEnsemble: path index out of range");
  return PathGrid(horizon_, steps_, dim_, seed_, index);
}

PathEnsemble simulate_paths(double horizon, int dim, int steps, std::uint64_t path_count,
                            std::uint64_t seed) {
  return PathEnsemble(horizon, steps, dim, path_count, seed);
}

}  // namespace picardlab

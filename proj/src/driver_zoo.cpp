#include "picardlab/driver_zoo.hpp"

#include <cmath>
#include <stdexcept>

namespace picardlab {

GenericBsde make_linear_z_problem(const LinearExampleSpec& spec) {
  GenericBsde problem;
  problem.horizon = LinearExampleSpec::horizon;
  problem.value_dim = 1;
  problem.noise_dim = spec.dim();
  problem.terminal = [spec](std::span<const double> x, std::span<double> out) {
    out[0] = terminal_condition(spec, x);
  };
  problem.driver.f = [spec](double, std::span<const double>, std::span<const double> z,
                            std::span<double> out) {
    double acc = 0.0;
    for (int j = 0; j < spec.dim(); ++j)
      acc += spec.drift()[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    out[0] = acc;
  };
  problem.driver.lip_y = 0.0;
  problem.driver.lip_z = std::sqrt(spec.drift_norm_sq());
  problem.driver.z_dependent = spec.drift_norm_sq() > 0.0;
  return problem;
}

GenericBsde make_linear_y_problem(double lip_y, double horizon) {
  if (!(lip_y >= 0.0)) throw std::invalid_argument("make_linear_y_problem: lip_y must be >= 0");
  if (!(horizon > 0.0))
    throw std::invalid_argument("make_linear_y_problem: horizon must be > 0");
  GenericBsde problem;
  problem.horizon = horizon;
  problem.value_dim = 1;
  problem.noise_dim = 1;
  problem.terminal = [](std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  problem.driver.f = [lip_y](double, std::span<const double> y, std::span<const double>,
                             std::span<double> out) { out[0] = lip_y * y[0]; };
  problem.driver.lip_y = lip_y;
  problem.driver.lip_z = 0.0;
  problem.driver.z_dependent = false;
  return problem;
}

GenericBsde make_zero_driver_problem(const LinearExampleSpec& spec) {
  GenericBsde problem;
  problem.horizon = LinearExampleSpec::horizon;
  problem.value_dim = 1;
  problem.noise_dim = spec.dim();
  problem.terminal = [spec](std::span<const double> x, std::span<double> out) {
    out[0] = terminal_condition(spec, x);
  };
  problem.driver.f = [](double, std::span<const double>, std::span<const double>,
                        std::span<double> out) { out[0] = 0.0; };
  problem.driver.lip_y = 0.0;
  problem.driver.lip_z = 0.0;
  problem.driver.z_dependent = false;
  return problem;
}

}  // namespace picardlab

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "picardlab/bounds.hpp"
#include "picardlab/driver_zoo.hpp"
#include "picardlab/linear_example.hpp"
#include "picardlab/nested_picard.hpp"

using namespace picardlab;

TEST_CASE("nested_picard: n = 0 returns the zero pair exactly") {
  const auto spec = LinearExampleSpec::isotropic(1, 4.0);
  const auto problem = make_linear_z_problem(spec);
  NestedPicardBudget budget;
  budget.per_level = {100};
  const auto r = nested_picard(problem, 0, 0.0, std::vector<double>{0.0}, budget, 7);
  CHECK(r.y[0] == 0.0);
  CHECK(r.z[0] == 0.0);
  CHECK(r.evaluations == 0);
}

TEST_CASE("nested_picard_cost and the launch gate") {
  NestedPicardBudget budget;
  budget.per_level = {200};
  CHECK(nested_picard_cost(budget, 1) == doctest::Approx(400.0));
  CHECK(nested_picard_cost(budget, 2) == doctest::Approx(200.0 * (2.0 + 400.0)));
  budget.cost_ceiling = 1e5;
  const auto spec = LinearExampleSpec::isotropic(1, 4.0);
  const auto problem = make_linear_z_problem(spec);
  CHECK_THROWS_AS(
      (void)nested_picard(problem, 3, 0.0, std::vector<double>{0.0}, budget, 7),
      BudgetError);
  try {
    (void)nested_picard(problem, 3, 0.0, std::vector<double>{0.0}, budget, 7);
  } catch (const BudgetError& e) {
    CHECK(e.estimated_cost() == doctest::Approx(nested_picard_cost(budget, 3)));
    CHECK(e.estimated_cost() > 1e5);
  }
}

TEST_CASE("nested_picard: linear-z driver matches the closed-form iterates") {
  const auto spec = LinearExampleSpec::isotropic(1, 4.0);
  const auto problem = make_linear_z_problem(spec);
  validate_driver_lipschitz(problem, 128, 11);
  NestedPicardBudget budget;
  budget.per_level = {400};
  const std::vector<double> origin{0.0};
  for (int n = 1; n <= 3; ++n) {
    const auto r = nested_picard(problem, n, 0.0, origin, budget, 2026 + n);
    const IterateEvaluator ev(spec, n);
    const double y_true = ev.value(0.0, origin);
    const double z_true = ev.gradient(0.0, origin)[0];
    CHECK(std::abs(r.y[0] - y_true) <= 4.0 * r.y_se[0] + 0.005);
    CHECK(std::abs(r.z[0] - z_true) <= 4.0 * r.z_se[0] + 0.005);
    CHECK(r.y_se[0] > 0.0);
    CHECK(r.time_cutoff == doctest::Approx(1e-3));
  }
}

TEST_CASE("nested_picard: z-independent driver reproduces the exponential sums") {
  // driver f = y with terminal 1: iterate n equals the ODE iterate n-1
  const auto problem = make_linear_y_problem(1.0);
  validate_driver_lipschitz(problem, 128, 12);
  NestedPicardBudget budget;
  budget.per_level = {300};
  for (const double t : {0.0, 0.4}) {
    for (int n = 1; n <= 3; ++n) {
      const auto r = nested_picard(problem, n, t, std::vector<double>{0.3}, budget, 555 + n);
      const double y_true = l01_iterate(1.0, n - 1, t);
      CHECK(std::abs(r.y[0] - y_true) <= 4.0 * r.y_se[0] + 0.005);
      // the solution is deterministic: the z-part vanishes
      CHECK(std::abs(r.z[0]) <= 4.0 * r.z_se[0] + 0.01);
    }
  }
}

TEST_CASE("nested_picard: zero driver equals the conditional terminal expectation") {
  const auto spec = LinearExampleSpec::isotropic(1, 4.0);
  const auto problem = make_zero_driver_problem(spec);
  NestedPicardBudget budget;
  budget.per_level = {20000};
  const std::vector<double> origin{0.0};
  const auto r = nested_picard(problem, 1, 0.0, origin, budget, 808);
  const IterateEvaluator v1(spec, 1);
  CHECK(v1.value(0.0, origin) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.y[0] - 1.0) <= 4.0 * r.y_se[0]);
  const double z_true = v1.gradient(0.0, origin)[0];
  CHECK(std::abs(r.z[0] - z_true) <= 4.0 * r.z_se[0]);
}

TEST_CASE("nested_picard: doubling the budget shrinks the RMS deviation") {
  const auto spec = LinearExampleSpec::isotropic(1, 4.0);
  const auto problem = make_linear_z_problem(spec);
  const std::vector<double> origin{0.0};
  const IterateEvaluator ev(spec, 2);
  const double y_true = ev.value(0.0, origin);
  const int reps = 20;
  double ss_small = 0.0, ss_big = 0.0;
  for (int i = 0; i < reps; ++i) {
    NestedPicardBudget small;
    small.per_level = {150};
    NestedPicardBudget big;
    big.per_level = {300};
    const auto rs = nested_picard(problem, 2, 0.0, origin, small, 9000 + i);
    const auto rb = nested_picard(problem, 2, 0.0, origin, big, 9500 + i);
    ss_small += (rs.y[0] - y_true) * (rs.y[0] - y_true);
    ss_big += (rb.y[0] - y_true) * (rb.y[0] - y_true);
  }
  const double ratio = std::sqrt(ss_small / ss_big);
  // variance halves when every level doubles; allow wide stochastic slack
  CHECK(ratio > 1.05);
  CHECK(ratio < 3.2);
}

TEST_CASE("validate_driver_lipschitz rejects an understated constant") {
  GenericBsde problem = make_linear_y_problem(1.0);
  problem.driver.f = [](double, std::span<const double> y, std::span<const double>,
                        std::span<double> out) { out[0] = 2.0 * y[0]; };
  // declared lip_y stays 1.0 while the actual slope is 2
  CHECK_THROWS_AS(validate_driver_lipschitz(problem, 256, 3), std::invalid_argument);
}

TEST_CASE("nested_picard: argument validation") {
  const auto spec = LinearExampleSpec::isotropic(1, 1.0);
  const auto problem = make_linear_z_problem(spec);
  NestedPicardBudget budget;
  CHECK_THROWS_AS(
      (void)nested_picard(problem, -1, 0.0, std::vector<double>{0.0}, budget, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)nested_picard(problem, 1, 1.0, std::vector<double>{0.0}, budget, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)nested_picard(problem, 1, 0.0, std::vector<double>{0.0, 0.0}, budget, 1),
      std::invalid_argument);
}

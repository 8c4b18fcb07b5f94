#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "picardlab/special_functions.hpp"

using namespace picardlab;

namespace {

// Oracle: explicit coefficient sum
//   H_k(x) = sum_{l=0..floor(k/2)} k! (-1)^l / (l! (k-2l)!) x^{k-2l} / 2^l
// with exact 128-bit integer coefficients. Independent of the recurrence.
double hermite_sum_oracle(int k, double x) {
  double acc = 0.0, comp = 0.0;
  for (int l = 0; l <= k / 2; ++l) {
    unsigned __int128 num = 1;
    for (int i = 2; i <= k; ++i) num *= static_cast<unsigned>(i);
    for (int i = 2; i <= l; ++i) num /= static_cast<unsigned>(i);
    for (int i = 2; i <= k - 2 * l; ++i) num /= static_cast<unsigned>(i);
    for (int i = 0; i < l; ++i) num /= 2u;
    double term = static_cast<double>(static_cast<unsigned long long>(num));
    term *= std::pow(x, k - 2 * l);
    if (l % 2 == 1) term = -term;
    const double y = term - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

// Oracle: k-th order central finite difference with binomial weights,
// Richardson-extrapolated and accumulated in long double to keep the
// cancellation error under control at k = 8.
long double central_fd_once(long double (*f)(long double), long double x, int k,
                            long double h) {
  long double acc = 0.0L;
  for (int i = 0; i <= k; ++i) {
    long double c = 1.0L;
    for (int j = 0; j < i; ++j) c = c * static_cast<long double>(k - j) / (j + 1);
    if (i % 2 == 1) c = -c;
    acc += c * f(x + (0.5L * k - i) * h);
  }
  return acc / std::pow(h, static_cast<long double>(k));
}

double central_fd(long double (*f)(long double), double x, int k, double h) {
  const long double coarse = central_fd_once(f, x, k, h);
  const long double fine = central_fd_once(f, x, k, 0.5L * h);
  return static_cast<double>((4.0L * fine - coarse) / 3.0L);
}

long double gauss(long double x) { return std::exp(-0.5L * x * x); }

}  // namespace

TEST_CASE("hermite_eval: pinned values") {
  CHECK(hermite_eval(0, 3.7) == 1.0);
  CHECK(hermite_eval(2, 1.0) == 0.0);
  CHECK(hermite_eval(3, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(hermite_eval(1, -0.25) == doctest::Approx(-0.25));
}

TEST_CASE("hermite_eval: recurrence agrees with explicit sum, k <= 25") {
  const double xs[] = {-3.0, -1.0, 0.0, 0.5, 2.0};
  for (int k = 0; k <= 25; ++k) {
    for (double x : xs) {
      const double ref = hermite_sum_oracle(k, x);
      const double got = hermite_eval(k, x);
      CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("hermite_eval: parity H_k(-x) = (-1)^k H_k(x)") {
  for (int k = 0; k <= 20; ++k) {
    for (double x : {0.3, 1.7, 2.9}) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      CHECK(hermite_eval(k, -x) == doctest::Approx(sign * hermite_eval(k, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hermite derivative identity carries the (-1)^k factor") {
  // d^k/dx^k e^{-x^2/2} = (-1)^k e^{-x^2/2} H_k(x); checked against a
  // central finite difference, tolerance dominated by the FD error.
  for (int k = 1; k <= 8; ++k) {
    const double h = (k <= 4) ? 0.04 : 0.1;
    for (double x = -2.0; x <= 2.01; x += 0.5) {
      const double fd = central_fd(&gauss, x, k, h);
      const double claim = ((k % 2 == 0) ? 1.0 : -1.0) *
                           static_cast<double>(gauss(static_cast<long double>(x))) *
                           hermite_eval(k, x);
      CHECK(std::abs(fd - claim) <= 0.05 * std::max(1.0, std::abs(claim)));
      if (k % 2 == 1 && std::abs(claim) > 0.3) {
        // the sign flip is the point: the uncorrected identity fails badly
        CHECK(std::abs(fd - claim) < std::abs(fd + claim));
      }
    }
  }
}

TEST_CASE("HermitePoly: coefficient formula, parity, and recurrence agreement") {
  {  // H_4(x) = x^4 - 6x^2 + 3
    const HermitePoly h4(4);
    REQUIRE(h4.coefficients().size() == 5);
    CHECK(h4.coefficients()[4] == 1.0);
    CHECK(h4.coefficients()[3] == 0.0);
    CHECK(h4.coefficients()[2] == -6.0);
    CHECK(h4.coefficients()[1] == 0.0);
    CHECK(h4.coefficients()[0] == 3.0);
  }
  for (int k = 0; k <= 20; ++k) {
    const HermitePoly h(k);
    // exact integer coefficients against the 128-bit oracle
    for (int l = 0; l <= k / 2; ++l) {
      unsigned __int128 num = 1;
      for (int i = 2; i <= k; ++i) num *= static_cast<unsigned>(i);
      for (int i = 2; i <= l; ++i) num /= static_cast<unsigned>(i);
      for (int i = 2; i <= k - 2 * l; ++i) num /= static_cast<unsigned>(i);
      for (int i = 0; i < l; ++i) num /= 2u;
      const double expect =
          (l % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(static_cast<unsigned long long>(num));
      CHECK(h.coefficients()[static_cast<std::size_t>(k - 2 * l)] == expect);
    }
    // odd powers vanish between the populated slots
    for (int p = k - 1; p >= 0; p -= 2) CHECK(h.coefficients()[static_cast<std::size_t>(p)] == 0.0);
    for (double x : {-2.2, 0.4, 1.9}) {
      CHECK(h.eval(-x) == doctest::Approx((k % 2 == 0 ? 1.0 : -1.0) * h.eval(x)).epsilon(1e-12));
      CHECK(std::abs(h.eval(x) - hermite_eval(k, x)) <=
            1e-10 * std::max(1.0, std::abs(hermite_eval(k, x))));
    }
  }
  CHECK_THROWS_AS(HermitePoly(-1), std::invalid_argument);
}

TEST_CASE("hermite_eval: overflow is reported") {
  CHECK_THROWS_AS((void)hermite_eval(500, 5.0), std::overflow_error);
  CHECK_THROWS_AS((void)hermite_eval(-1, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian_hermite_expectation: pinned values") {
  CHECK(gaussian_hermite_expectation(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gaussian_hermite_expectation(1) == 0.0);
  CHECK(gaussian_hermite_expectation(2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(gaussian_hermite_expectation(7) == 0.0);
  // k = 4: 4! / (4^2 * 2!) = 24/32 = 0.75, sign (+)
  CHECK(gaussian_hermite_expectation(4) == doctest::Approx(0.75).epsilon(1e-14));
  // k = 10: 10! (-1)^5 / (4^5 * 5!) = -3628800/122880 = -29.53125
  CHECK(gaussian_hermite_expectation(10) == doctest::Approx(-29.53125).epsilon(1e-13));
}

TEST_CASE("gaussian_hermite_expectation: Monte Carlo oracle, k <= 10") {
  std::mt19937_64 rng(0x5f3759df9e3779b9ull);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = 1000000;
  std::vector<double> sum(11, 0.0), sumsq(11, 0.0);
  for (int i = 0; i < n; ++i) {
    const double w = normal(rng);
    const double base = std::sqrt(2.0) * std::exp(-0.5 * w * w);
    for (int k = 0; k <= 10; ++k) {
      const double v = base * hermite_eval(k, w);
      sum[static_cast<std::size_t>(k)] += v;
      sumsq[static_cast<std::size_t>(k)] += v * v;
    }
  }
  for (int k = 0; k <= 10; ++k) {
    const double mean = sum[static_cast<std::size_t>(k)] / n;
    const double var = sumsq[static_cast<std::size_t>(k)] / n - mean * mean;
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - gaussian_hermite_expectation(k)) <= 4.0 * se + 1e-12);
  }
}

TEST_CASE("double_factorial") {
  CHECK(double_factorial(-1) == 1);
  CHECK(double_factorial(0) == 1);
  CHECK(double_factorial(1) == 1);
  CHECK(double_factorial(5) == 15);   // 5*3*1
  CHECK(double_factorial(6) == 48);   // 6*4*2
  CHECK(double_factorial(33) == 6332659870762850625ull);
  CHECK_THROWS_AS((void)double_factorial(34), std::overflow_error);
  CHECK_THROWS_AS((void)double_factorial(-2), std::invalid_argument);
}

TEST_CASE("multi_indices: pinned enumerations") {
  {
    auto v = multi_indices(1, 4);
    REQUIRE(v.size() == 1);
    CHECK(v[0].entries == std::vector<int>{4});
  }
  {
    auto v = multi_indices(2, 2);
    REQUIRE(v.size() == 3);
    CHECK(v[0].entries == std::vector<int>{0, 2});
    CHECK(v[1].entries == std::vector<int>{1, 1});
    CHECK(v[2].entries == std::vector<int>{2, 0});
  }
  {
    auto v = multi_indices(3, 0);
    REQUIRE(v.size() == 1);
    CHECK(v[0].entries == std::vector<int>{0, 0, 0});
    CHECK(v[0].order() == 0);
  }
}

TEST_CASE("multi_indices: brute-force oracle in d=3") {
  const int k = 5;
  std::vector<std::vector<int>> expect;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b)
      for (int c = 0; c <= k; ++c)
        if (a + b + c == k) expect.push_back({a, b, c});
  std::sort(expect.begin(), expect.end());
  auto got = multi_indices(3, k);
  REQUIRE(got.size() == expect.size());
  CHECK(got.size() == multi_index_count(3, k));
  CHECK(multi_index_count(3, k) == 21);  // binom(7,2)
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].entries == expect[i]);
    CHECK(got[i].order() == k);
  }
}

TEST_CASE("multi_index_count: overflow is reported") {
  CHECK_THROWS_AS((void)multi_index_count(200, 100), std::overflow_error);
  CHECK(multi_index_count(4, 10) == 286);
}

TEST_CASE("log_multinomial: pinned values and errors") {
  {
    const int a[] = {1, 1};
    CHECK(log_multinomial(2, a) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  }
  {
    const int a[] = {3, 0};
    CHECK(log_multinomial(3, a) == 0.0);
  }
  {
    const int a[] = {2, 2};
    CHECK(log_multinomial(4, a) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  }
  {
    const int a[] = {1, 2};
    CHECK_THROWS_AS((void)log_multinomial(2, a), std::invalid_argument);
  }
  {
    // lgamma path (k > 33) against exact binom(40,20) = 137846528820
    const int a[] = {20, 20};
    CHECK(log_multinomial(40, a) == doctest::Approx(std::log(137846528820.0)).epsilon(1e-12));
  }
}

TEST_CASE("multinomial theorem: sum_{|a|=k} (k!/a!) prod u^a = (sum u)^k") {
  for (int d = 1; d <= 3; ++d) {
    std::vector<double> u(static_cast<std::size_t>(d));
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      u[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
      total += u[static_cast<std::size_t>(i)];
    }
    for (int k = 0; k <= 8; ++k) {
      double acc = 0.0;
      for_each_multi_index(d, k, [&](std::span<const int> alpha) {
        double term = std::exp(log_multinomial(k, alpha));
        for (int i = 0; i < d; ++i)
          term *= std::pow(u[static_cast<std::size_t>(i)], alpha[static_cast<std::size_t>(i)]);
        acc += term;
      });
      CHECK(acc == doctest::Approx(std::pow(total, k)).epsilon(1e-12));
    }
  }
}

#include "picardlab/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace picardlab {

namespace {

// exact factorials up to 33! fit in unsigned __int128
constexpr int kExactFactorialMax = 33;

unsigned __int128 exact_factorial(int k) {
  unsigned __int128 f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<unsigned>(i);
  return f;
}

double to_double(unsigned __int128 v) {
  const double two64 = 18446744073709551616.0;
  return static_cast<double>(static_cast<std::uint64_t>(v >> 64)) * two64 +
         static_cast<double>(static_cast<std::uint64_t>(v));
}

}  // namespace

double hermite_eval(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite_eval: k must be >= 0");
  if (!std::isfinite(x)) throw std::invalid_argument("hermite_eval: x must be finite");
  if (k == 0) return 1.0;
  double hm = 1.0;  // H_0
  double h = x;     // H_1
  for (int j = 1; j < k; ++j) {
    const double hn = x * h - static_cast<double>(j) * hm;
    hm = h;
    h = hn;
  }
  if (!std::isfinite(h))
    throw std::overflow_error("hermite_eval: H_" + std::to_string(k) + " overflowed");
  return h;
}

HermitePoly::HermitePoly(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("HermitePoly: degree must be >= 0");
  coefficients_.assign(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int l = 0; l <= degree / 2; ++l) {
    const int power = degree - 2 * l;
    double c;
    if (degree <= kExactFactorialMax) {
      unsigned __int128 num = exact_factorial(degree);
      num /= exact_factorial(l);
      num /= exact_factorial(power);
      for (int i = 0; i < l; ++i) num /= 2u;  // Hermite coefficients are integers
      c = to_double(num);
    } else {
      c = std::exp(log_factorial(degree) - log_factorial(l) - log_factorial(power) -
                   l * std::log(2.0));
    }
    coefficients_[static_cast<std::size_t>(power)] = (l % 2 == 0) ? c : -c;
  }
}

double HermitePoly::eval(double x) const {
  double acc = 0.0;
  for (int p = degree_; p >= 0; --p) acc = acc * x + coefficients_[static_cast<std::size_t>(p)];
  return acc;
}

double gaussian_hermite_expectation(int k) {
  if (k < 0) throw std::invalid_argument("gaussian_hermite_expectation: k must be >= 0");
  if (k % 2 == 1) return 0.0;
  const int half = k / 2;
  const double log_mag =
      log_factorial(k) - static_cast<double>(half) * std::log(4.0) - log_factorial(half);
  const double sign = (half % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_mag);
}

std::uint64_t double_factorial(int n) {
  if (n < -1) throw std::invalid_argument("double_factorial: n must be >= -1");
  unsigned __int128 prod = 1;
  for (int v = n; v >= 2; v -= 2) prod *= static_cast<unsigned>(v);
  if (prod > static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max()))
    throw std::overflow_error("double_factorial: " + std::to_string(n) +
                              "!! exceeds 64-bit range");
  return static_cast<std::uint64_t>(prod);
}

double log_factorial(int k) {
  if (k < 0) throw std::invalid_argument("log_factorial: k must be >= 0");
  if (k <= kExactFactorialMax) return std::log(to_double(exact_factorial(k)));
  return std::lgamma(static_cast<double>(k) + 1.0);
}

int MultiIndex::order() const {
  return std::accumulate(entries.begin(), entries.end(), 0);
}

std::uint64_t multi_index_count(int d, int k) {
  if (d < 1) throw std::invalid_argument("multi_index_count: d must be >= 1");
  if (k < 0) throw std::invalid_argument("multi_index_count: k must be >= 0");
  // binom(k+d-1, d-1), multiplicative form with exact division
  unsigned __int128 c = 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
  for (int i = 1; i <= d - 1; ++i) {
    c = c * static_cast<unsigned>(k + i) / static_cast<unsigned>(i);
    if (c > static_cast<unsigned __int128>(limit))
      throw std::overflow_error("multi_index_count: binom(k+d-1,d-1) exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(c);
}

std::vector<MultiIndex> multi_indices(int d, int k) {
  const std::uint64_t count = multi_index_count(d, k);
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  for_each_multi_index(d, k, [&](std::span<const int> alpha) {
    out.push_back(MultiIndex{std::vector<int>(alpha.begin(), alpha.end())});
  });
  return out;
}

double log_multinomial(int k, std::span<const int> alpha) {
  if (k < 0) throw std::invalid_argument("log_multinomial: k must be >= 0");
  int sum = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("log_multinomial: alpha entries must be >= 0");
    sum += a;
  }
  if (sum != k)
    throw std::invalid_argument("log_multinomial: |alpha| = " + std::to_string(sum) +
                                " does not match k = " + std::to_string(k));
  if (k <= kExactFactorialMax) {
    unsigned __int128 m = exact_factorial(k);
    for (int a : alpha) m /= exact_factorial(a);  // exact: multinomials are integers
    return std::log(to_double(m));
  }
  double lm = log_factorial(k);
  for (int a : alpha) lm -= log_factorial(a);
  return lm;
}

}  // namespace picardlab

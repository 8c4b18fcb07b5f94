#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace picardlab {

/// Probabilists' Hermite polynomial H_k evaluated by the three-term
/// recurrence H_{k+1}(x) = x H_k(x) - k H_{k-1}(x).
/// Throws std::overflow_error if the value leaves the double range.
double hermite_eval(int k, double x);

/// H_k in coefficient form: coefficients()[p] multiplies x^p, with
///   coeff of x^{k-2l} = k! (-1)^l / (l! (k-2l)! 2^l)
/// and every other entry zero. Exact integers up to degree 33, correctly
/// rounded doubles beyond. The recurrence above is the production
/// evaluation path; this form exists for inspection and cross-checks.
class HermitePoly {
 public:
  explicit HermitePoly(int degree);

  int degree() const { return degree_; }
  std::span<const double> coefficients() const { return coefficients_; }

  /// Horner evaluation of the coefficient form.
  double eval(double x) const;

 private:
  int degree_;
  std::vector<double> coefficients_;
};

/// E[sqrt(2) * exp(-W^2/2) * H_k(W)] for standard normal W.
/// Zero for odd k; k! (-1)^{k/2} / (4^{k/2} (k/2)!) for even k,
/// assembled from log-space magnitude and explicit sign.
double gaussian_hermite_expectation(int k);

/// n!! = prod_{j=0}^{ceil(n/2)-1} (n - 2j), with (-1)!! = 0!! = 1.
/// Throws std::overflow_error once the product exceeds uint64 range.
std::uint64_t double_factorial(int n);

/// log(k!), exact integer arithmetic for k <= 33, lgamma beyond.
double log_factorial(int k);

struct MultiIndex {
  std::vector<int> entries;

  int order() const;
};

/// Number of multi-indices alpha with |alpha| = k in dimension d,
/// i.e. binom(k+d-1, d-1). Throws std::overflow_error if it does not
/// fit in uint64.
std::uint64_t multi_index_count(int d, int k);

/// All alpha in N_0^d with |alpha| = k, lexicographically ascending.
std::vector<MultiIndex> multi_indices(int d, int k);

/// log( k! / (alpha_1! ... alpha_d!) ); requires |alpha| = k.
double log_multinomial(int k, std::span<const int> alpha);

/// Visits every composition of k into d non-negative parts in
/// lexicographic order. F is called with std::span<const int>.
template <class F>
void for_each_multi_index(int d, int k, F&& fn) {
  std::vector<int> alpha(static_cast<std::size_t>(d), 0);
  alpha[static_cast<std::size_t>(d) - 1] = k;
  for (;;) {
    fn(std::span<const int>(alpha));
    // advance: move one unit of mass leftwards, flush remainder right
    int tail = 0;
    int p = d - 1;
    while (p > 0) {
      tail += alpha[static_cast<std::size_t>(p)];
      if (tail > 0) break;
      --p;
    }
    if (p == 0) return;  // (k,0,...,0) reached
    alpha[static_cast<std::size_t>(p - 1)] += 1;
    for (int j = p; j < d; ++j) alpha[static_cast<std::size_t>(j)] = 0;
    alpha[static_cast<std::size_t>(d) - 1] = tail - 1;
  }
}

}  // namespace picardlab

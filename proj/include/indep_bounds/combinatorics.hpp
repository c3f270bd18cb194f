#pragma once

// Exact and log-domain counting kernels shared by every bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace indep_bounds {

using BigCount = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact binomial coefficient with the zero-outside-range convention:
/// C(n, k) = 0 whenever n < 0, k < 0 or k > n.
inline BigCount binom(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// (sum parts)! / prod parts!, accumulated as a product of binomials.
inline BigCount multinomial(std::span<const std::int64_t> parts) {
  BigCount r = 1;
  std::int64_t total = 0;
  for (auto p : parts) {
    if (p < 0) return 0;
    total += p;
    r *= binom(total, p);
  }
  return r;
}

inline BigCount multinomial(std::initializer_list<std::int64_t> parts) {
  return multinomial(std::span<const std::int64_t>(parts.begin(), parts.size()));
}

/// Pascal-triangle cache for repeated binomial lookups inside the nested sums
/// of the finite bounds. `Count` is BigCount for exact evaluation or a
/// floating type (long double) for log-rate evaluation at large n.
template <class Count>
class Binomials {
 public:
  explicit Binomials(std::int64_t max_n) : max_n_(std::max<std::int64_t>(max_n, 0)) {
    rows_.reserve(static_cast<std::size_t>(max_n_ + 1));
    rows_.push_back({Count(1)});
    for (std::int64_t n = 1; n <= max_n_; ++n) {
      const auto& prev = rows_.back();
      std::vector<Count> row(static_cast<std::size_t>(n + 1));
      row.front() = Count(1);
      row.back() = Count(1);
      for (std::int64_t k = 1; k < n; ++k)
        row[static_cast<std::size_t>(k)] =
            prev[static_cast<std::size_t>(k - 1)] + prev[static_cast<std::size_t>(k)];
      rows_.push_back(std::move(row));
    }
  }

  std::int64_t max_n() const { return max_n_; }

  const Count& operator()(std::int64_t n, std::int64_t k) const {
    static const Count zero(0);
    if (n < 0 || k < 0 || k > n) return zero;
    if (n > max_n_) throw std::out_of_range("Binomials: n exceeds cache size");
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }

 private:
  std::int64_t max_n_;
  std::vector<std::vector<Count>> rows_;
};

/// log2 of a nonnegative count; `is_zero` marks an exact zero, in which case
/// `log2_value` carries no meaning.
struct LogCount {
  double log2_value = 0.0;
  bool is_zero = false;

  static LogCount zero() { return {0.0, true}; }
};

inline double log2_factorial(std::int64_t n) {
  return boost::math::lgamma(static_cast<double>(n) + 1.0) / std::log(2.0);
}

inline LogCount log2_binom(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return LogCount::zero();
  if (k == 0 || k == n) return {0.0, false};
  return {log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k), false};
}

/// Exact log2 of a big integer (positive), good to double precision.
inline double log2_exact(const BigCount& v) {
  if (v <= 0) throw std::domain_error("log2_exact: nonpositive argument");
  const auto bits = boost::multiprecision::msb(v);
  if (bits < 1000) return std::log2(v.convert_to<double>());
  const auto shift = bits - 900;
  const BigCount top = v >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

/// -p log2 p with 0 log 0 = 0.
inline double xlog2x_neg(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Binary entropy in bits.
inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return xlog2x_neg(p) + xlog2x_neg(1.0 - p);
}

/// Entropy of a distribution over {-1, 0, 1}, in bits.
inline double ternary_entropy(double p_m1, double p_0, double p_1) {
  if (p_m1 < 0.0 || p_0 < 0.0 || p_1 < 0.0)
    throw std::invalid_argument("ternary_entropy: negative probability");
  if (std::abs(p_m1 + p_0 + p_1 - 1.0) > 1e-12)
    throw std::invalid_argument("ternary_entropy: probabilities do not sum to 1");
  return xlog2x_neg(p_m1) + xlog2x_neg(p_0) + xlog2x_neg(p_1);
}

/// Unnormalised entropy of a mass vector: total * H(parts / total). This is
/// the exponent of the multinomial (n x)! / prod (n x_i)! per unit n.
inline double mass_entropy(std::span<const double> parts) {
  double total = 0.0;
  for (double p : parts) total += p;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double p : parts)
    if (p > 0.0) h -= p * std::log2(p / total);
  return h;
}

inline double mass_entropy(std::initializer_list<double> parts) {
  return mass_entropy(std::span<const double>(parts.begin(), parts.size()));
}

/// Exponent of C(n a, n b) per unit n: a * H(b / a). Returns -infinity when
/// the binomial is zero (b outside [0, a]).
inline double binom_exponent(double a, double b, double eps = 1e-12) {
  if (b < -eps || b > a + eps) return -std::numeric_limits<double>::infinity();
  b = std::clamp(b, 0.0, std::max(a, 0.0));
  return mass_entropy({b, a - b});
}

/// True iff q = p^a for a prime p and a >= 1. q = 1 is rejected.
inline bool is_prime_power(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    while (q % p == 0) q /= p;
    return q == 1;
  }
  return true;
}

}  // namespace indep_bounds

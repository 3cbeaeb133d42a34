#pragma once

// Exact and log-space combinatorial primitives, the parameter triple (n, r, ell)
// and the seedable random number generator shared by every other header.

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace steiner {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Vertex labels are 1-based, matching [n] = {1, ..., n}.
using Vertex = std::uint32_t;

/// Signaled when an exact oracle would exceed its documented work budget.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Falling factorials and binomials

/// [x]_t = x (x-1) ... (x-t+1); 1 for t = 0 and 0 for t > x.
template <typename Int>
Int falling_factorial(const Int& x, const Int& t) {
  if (t < 0) throw std::domain_error("falling_factorial: negative t");
  if (t > x) return Int(0);
  Int result(1);
  for (Int i(0); i < t; ++i) result *= (x - i);
  return result;
}

inline std::int64_t falling_factorial(std::int64_t x, std::int64_t t) {
  return falling_factorial<std::int64_t>(x, t);
}

/// [x]_t for real x, used by the asymptotic evaluators.
inline double falling_factorial_real(double x, int t) {
  double result = 1.0;
  for (int i = 0; i < t; ++i) result *= (x - i);
  return result;
}

inline BigInt binomial_big(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return BigInt(0);
  k = std::min(k, n - k);
  BigInt result(1);
  for (std::int64_t i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

/// Exact binomial in 64 bits; throws std::overflow_error when it does not fit.
inline std::uint64_t binomial_u64(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (result > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial_u64: C(" + std::to_string(n) + "," + std::to_string(k) +
                                ") exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(result);
}

// ---------------------------------------------------------------------------
// LogNumber

/// A signed real stored as (sign, log|x|). Zero has sign 0 and log_magnitude -inf.
class LogNumber {
 public:
  static constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

  constexpr LogNumber() = default;

  static LogNumber from_log(double log_magnitude, int sign = 1) {
    if (sign == 0 || log_magnitude == kMinusInfinity) return LogNumber{};
    if (std::isnan(log_magnitude)) throw std::domain_error("LogNumber: NaN log magnitude");
    LogNumber x;
    x.log_ = log_magnitude;
    x.sign_ = sign > 0 ? 1 : -1;
    return x;
  }

  static LogNumber from_double(double value) {
    if (value == 0.0) return LogNumber{};
    return from_log(std::log(std::fabs(value)), value > 0 ? 1 : -1);
  }

  static LogNumber from_big(const BigInt& value) {
    if (value == 0) return LogNumber{};
    BigInt mag = value < 0 ? BigInt(-value) : value;
    // Keep the top 60 bits; the dropped bits only perturb the log by < 2^-59.
    const auto bits = static_cast<long>(boost::multiprecision::msb(mag)) + 1;
    const long shift = std::max(0L, bits - 60);
    const auto top = static_cast<std::uint64_t>(mag >> shift);
    return from_log(std::log(static_cast<double>(top)) + static_cast<double>(shift) * std::log(2.0),
                    value < 0 ? -1 : 1);
  }

  static LogNumber zero() { return LogNumber{}; }
  static LogNumber one() { return from_log(0.0, 1); }

  double log_magnitude() const { return log_; }
  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }

  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogNumber operator-() const {
    LogNumber x = *this;
    x.sign_ = -x.sign_;
    return x;
  }

  friend LogNumber operator*(const LogNumber& a, const LogNumber& b) {
    if (a.is_zero() || b.is_zero()) return LogNumber{};
    return from_log(a.log_ + b.log_, a.sign_ * b.sign_);
  }

  friend LogNumber operator/(const LogNumber& a, const LogNumber& b) {
    if (b.is_zero()) throw std::domain_error("LogNumber: division by zero");
    if (a.is_zero()) return LogNumber{};
    return from_log(a.log_ - b.log_, a.sign_ * b.sign_);
  }

  friend LogNumber operator+(const LogNumber& a, const LogNumber& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogNumber& hi = a.log_ >= b.log_ ? a : b;
    const LogNumber& lo = a.log_ >= b.log_ ? b : a;
    const double ratio = std::exp(lo.log_ - hi.log_);
    if (hi.sign_ == lo.sign_) return from_log(hi.log_ + std::log1p(ratio), hi.sign_);
    if (ratio == 1.0) return LogNumber{};
    return from_log(hi.log_ + std::log1p(-ratio), hi.sign_);
  }

  friend LogNumber operator-(const LogNumber& a, const LogNumber& b) { return a + (-b); }

  friend std::partial_ordering operator<=>(const LogNumber& a, const LogNumber& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    if (a.sign_ > 0) return a.log_ <=> b.log_;
    return b.log_ <=> a.log_;
  }

  friend bool operator==(const LogNumber& a, const LogNumber& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_ == b.log_);
  }

 private:
  double log_ = kMinusInfinity;
  int sign_ = 0;
};

/// log C(n, k). Small min(k, n-k) sums logs directly; otherwise extended-precision lgamma.
inline LogNumber log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n)
    throw std::domain_error("log_binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  const std::int64_t j = std::min(k, n - k);
  long double acc = 0.0L;
  if (j <= 64) {
    for (std::int64_t i = 1; i <= j; ++i)
      acc += std::log(static_cast<long double>(n - j + i)) - std::log(static_cast<long double>(i));
  } else {
    acc = std::lgamma(static_cast<long double>(n) + 1.0L) - std::lgamma(static_cast<long double>(k) + 1.0L) -
          std::lgamma(static_cast<long double>(n - k) + 1.0L);
  }
  return LogNumber::from_log(static_cast<double>(acc));
}

/// log [x]_t for integer x >= t >= 0.
inline double log_falling_factorial(std::int64_t x, std::int64_t t) {
  if (t > x) return LogNumber::kMinusInfinity;
  long double acc = 0.0L;
  if (t <= 64) {
    for (std::int64_t i = 0; i < t; ++i) acc += std::log(static_cast<long double>(x - i));
  } else {
    acc = std::lgamma(static_cast<long double>(x) + 1.0L) - std::lgamma(static_cast<long double>(x - t) + 1.0L);
  }
  return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Params

/// The triple (n, r, ell) with 3 <= r <= n and 2 <= ell <= r - 1.
struct Params {
  int n = 0;
  int r = 0;
  int ell = 0;

  void validate() const {
    if (r < 3 || r > n)
      throw std::invalid_argument("Params: need 3 <= r <= n (n=" + std::to_string(n) + ", r=" + std::to_string(r) + ")");
    if (ell < 2 || ell > r - 1)
      throw std::invalid_argument("Params: need 2 <= ell <= r-1 (r=" + std::to_string(r) +
                                  ", ell=" + std::to_string(ell) + ")");
  }

  bool valid() const { return r >= 3 && r <= n && ell >= 2 && ell <= r - 1; }

  /// N = C(n, r).
  std::uint64_t num_rsets() const { return binomial_u64(n, r); }
  BigInt num_rsets_big() const { return binomial_big(n, r); }
  double log_num_rsets() const { return log_binomial(n, r).log_magnitude(); }

  friend bool operator==(const Params&, const Params&) = default;
};

// ---------------------------------------------------------------------------
// Random numbers
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++ standard.
// Stream rule: trial i of a run with master seed s uses the engine seeded with
//   splitmix64(splitmix64(s) ^ splitmix64(i + 0x9E3779B97F4A7C15)).
// Only engine output is consumed (no std:: distributions), so draws are identical
// across standard libraries.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_index + 0x9E3779B97F4A7C15ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(stream_seed(master_seed, stream_index));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound) by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("Rng::below: zero bound");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform on the closed integer range [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform k-subset of {1..n}, sorted ascending. Floyd's algorithm: exactly
/// uniform over all C(n, k) subsets, k engine-driven draws, no rejection.
inline void sample_sorted_subset(int n, int k, Rng& rng, std::vector<Vertex>& out) {
  out.clear();
  for (int j = n - k + 1; j <= n; ++j) {
    const auto t = static_cast<Vertex>(rng.between(1, j));
    if (std::find(out.begin(), out.end(), t) == out.end())
      out.push_back(t);
    else
      out.push_back(static_cast<Vertex>(j));
  }
  std::sort(out.begin(), out.end());
}

}  // namespace steiner

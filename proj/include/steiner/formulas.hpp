#pragma once

// Closed-form asymptotic evaluators. Every evaluator returns the principal value
// together with the magnitude of the dropped O(.) terms, evaluated with constant 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "steiner/combinatorics.hpp"

namespace steiner {

struct Estimate {
  LogNumber value;
  /// Magnitude of the dropped error terms in the exponent (log scale).
  double dropped = 0.0;
};

inline double factorial_real(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

/// Quadratic exponent term [r]_ell^2 [m]_2 / (2 ell! n^ell), general form.
inline double quadratic_exponent(const Params& p, std::int64_t m) {
  const double rl = falling_factorial_real(p.r, p.ell);
  return rl * rl * falling_factorial_real(static_cast<double>(m), 2) /
         (2.0 * factorial_real(p.ell) * std::pow(static_cast<double>(p.n), p.ell));
}

/// The same term in exact rational arithmetic, general form.
inline Rational quadratic_exponent_exact(const Params& p, std::int64_t m) {
  const BigInt rl = falling_factorial<BigInt>(p.r, p.ell);
  const BigInt m2 = falling_factorial<BigInt>(m, 2);
  BigInt ell_fact = 1;
  for (int i = 2; i <= p.ell; ++i) ell_fact *= i;
  BigInt n_pow = 1;
  for (int i = 0; i < p.ell; ++i) n_pow *= p.n;
  return Rational(rl * rl * m2, 2 * ell_fact * n_pow);
}

/// The linear-hypergraph quadratic term [r]_2^2 [m]_2 / (4 n^2), exact.
inline Rational linear_quadratic_exponent_exact(int n, int r, std::int64_t m) {
  const BigInt r2 = falling_factorial<BigInt>(r, 2);
  return Rational(r2 * r2 * falling_factorial<BigInt>(m, 2), BigInt(4) * n * n);
}

/// The ell = 2 cubic term [r]_2^3 (3r^2 - 15r + 20) m^3 / (24 n^4).
inline double linear_cubic_exponent(int n, int r, std::int64_t m) {
  const double r2 = falling_factorial_real(r, 2);
  const double md = static_cast<double>(m);
  return r2 * r2 * r2 * (3.0 * r * r - 15.0 * r + 20.0) * md * md * md / (24.0 * std::pow(static_cast<double>(n), 4));
}

/// Exponent E with |S(n,r,ell;m)| ~ N^m / m! * exp(E).
inline Estimate count_exponent(const Params& p, std::int64_t m) {
  const double n = p.n;
  const double md = static_cast<double>(m);
  Estimate est;
  double e = -quadratic_exponent(p, m);
  if (p.ell == 2) {
    e -= linear_cubic_exponent(p.n, p.r, m);
    est.dropped = md * md / (n * n * n);
  } else {
    est.dropped = std::max(md * md / std::pow(n, p.ell + 1), md * md * md / std::pow(n, 2 * p.ell));
  }
  est.value = LogNumber::from_log(e);
  return est;
}

/// log |S(n,r,ell;m)| ~ log(N^m / m!) + E.
inline Estimate log_count_asymptotic(const Params& p, std::int64_t m) {
  if (m < 0) throw std::domain_error("log_count_asymptotic: negative m");
  Estimate est = count_exponent(p, m);
  const double log_nm = static_cast<double>(m) * p.log_num_rsets() - std::lgamma(static_cast<double>(m) + 1.0);
  est.value = LogNumber::from_log(log_nm + est.value.log_magnitude());
  return est;
}

/// Probability that a uniform m-subset of r-sets is a partial Steiner system,
/// as predicted by the count formula: exp(E).
inline Estimate log_partial_steiner_probability(const Params& p, std::int64_t m) { return count_exponent(p, m); }

/// log P[K in H] for a fixed K with k edges: log [m]_k - k log N + [r]_ell^2 k^2 / (2 ell! n^ell).
inline Estimate log_containment_asymptotic(const Params& p, std::int64_t m, std::int64_t k) {
  if (k < 0 || m < 0) throw std::domain_error("log_containment_asymptotic: negative argument");
  Estimate est;
  const double n = p.n;
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  est.dropped = kd / std::pow(n, p.ell) + md * md * kd / std::pow(n, p.ell + 1);
  if (k > m) return est;  // probability zero
  const double rl = falling_factorial_real(p.r, p.ell);
  const double boost = rl * rl * kd * kd / (2.0 * factorial_real(p.ell) * std::pow(n, p.ell));
  est.value = LogNumber::from_log(log_falling_factorial(m, k) - kd * p.log_num_rsets() + boost);
  return est;
}

/// log P[deg v_1 = ... = deg v_h = 0] ~ -h r m / n.
inline Estimate log_deg_zero_asymptotic(const Params& p, std::int64_t m, std::int64_t h) {
  if (h < 0 || m < 0) throw std::domain_error("log_deg_zero_asymptotic: negative argument");
  const double n = p.n;
  const double md = static_cast<double>(m);
  const double hd = static_cast<double>(h);
  Estimate est;
  est.value = LogNumber::from_log(-hd * p.r * md / n);
  est.dropped = hd * (md / (n * n) + md * md / std::pow(n, p.ell + 1));
  return est;
}

// ---------------------------------------------------------------------------
// Connectivity thresholds

struct ThresholdParams {
  int n = 0;
  int r = 0;
  double omega = std::numeric_limits<double>::quiet_NaN();  // NaN selects log log n
  double c = 0.0;

  double effective_omega() const { return std::isnan(omega) ? std::log(std::log(static_cast<double>(n))) : omega; }
};

struct Thresholds {
  std::int64_t m_L = 0;
  std::int64_t m_c = 0;
  std::int64_t m_R = 0;
};

/// ceil((n/r)(log n + x)) for x = -omega, c, +omega.
inline std::int64_t threshold_at(int n, int r, double shift) {
  const double v = static_cast<double>(n) / r * (std::log(static_cast<double>(n)) + shift);
  return static_cast<std::int64_t>(std::ceil(v));
}

inline Thresholds threshold_edge_count(const ThresholdParams& tp) {
  if (tp.n < tp.r || tp.r < 1) throw std::domain_error("threshold_edge_count: need n >= r >= 1");
  const double w = tp.effective_omega();
  return {threshold_at(tp.n, tp.r, -w), threshold_at(tp.n, tp.r, tp.c), threshold_at(tp.n, tp.r, w)};
}

// ---------------------------------------------------------------------------
// Switching ratio

/// Leading term of |S+(t)| / |S+(t-1)|: C(m - 2(t-1), 2) [r]_ell^2 / (ell! t n^ell).
inline double switching_ratio_predicted(const Params& p, std::int64_t m, std::int64_t t) {
  if (t < 1) throw std::domain_error("switching_ratio_predicted: t must be >= 1");
  const double free_edges = static_cast<double>(m - 2 * (t - 1));
  if (free_edges < 2) return 0.0;
  const double pairs = free_edges * (free_edges - 1) / 2.0;
  const double rl = falling_factorial_real(p.r, p.ell);
  return pairs * rl * rl / (factorial_real(p.ell) * static_cast<double>(t) * std::pow(static_cast<double>(p.n), p.ell));
}

// ---------------------------------------------------------------------------
// Summation bounds for sums of n_i with n_i / n_{i-1} = (A(i)/i)(1 - (i-1) B(i))

struct SummationInput {
  int N = 0;
  std::vector<double> A;  // A[i-1] = A(i), i = 1..N
  std::vector<double> B;
  double c_hat = 0.0;
};

struct SummationBounds {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double exact_sum = 0.0;
};

/// Throws std::domain_error naming the first failed hypothesis.
inline void validate_summation_input(const SummationInput& in) {
  if (in.N < 2) throw std::domain_error("summation_bounds: N >= 2 required");
  if (in.A.size() != static_cast<std::size_t>(in.N) || in.B.size() != static_cast<std::size_t>(in.N))
    throw std::domain_error("summation_bounds: A and B need N entries");
  if (!(in.c_hat > 0.0 && in.c_hat < 1.0 / 3.0)) throw std::domain_error("summation_bounds: c_hat must lie in (0, 1/3)");
  double a_max = 0.0, c_abs_max = 0.0;
  for (int i = 1; i <= in.N; ++i) {
    const double a = in.A[i - 1];
    const double b = in.B[i - 1];
    if (!(a >= 0.0)) throw std::domain_error("summation_bounds: A(" + std::to_string(i) + ") < 0");
    if (!(1.0 - (i - 1) * b >= 0.0)) throw std::domain_error("summation_bounds: 1 - (i-1)B(i) < 0 at i=" + std::to_string(i));
    a_max = std::max(a_max, a);
    c_abs_max = std::max(c_abs_max, std::fabs(a * b));
  }
  if (a_max / in.N > in.c_hat) throw std::domain_error("summation_bounds: A/N exceeds c_hat");
  if (c_abs_max > in.c_hat) throw std::domain_error("summation_bounds: |C| exceeds c_hat");
}

inline SummationBounds summation_bounds(const SummationInput& in) {
  validate_summation_input(in);
  double A1 = std::numeric_limits<double>::infinity(), A2 = -A1, C1 = A1, C2 = -A1;
  for (int i = 1; i <= in.N; ++i) {
    const double a = in.A[i - 1];
    const double c = a * in.B[i - 1];
    A1 = std::min(A1, a);
    A2 = std::max(A2, a);
    C1 = std::min(C1, c);
    C2 = std::max(C2, c);
  }
  const double tail = std::pow(2.0 * std::exp(1.0) * in.c_hat, in.N);
  SummationBounds out;
  out.sigma1 = std::exp(A1 - 0.5 * A1 * C2) - tail;
  out.sigma2 = std::exp(A2 - 0.5 * A2 * C1 + 0.5 * A2 * C1 * C1) + tail;

  double term = 1.0, sum = 1.0;
  for (int i = 1; i <= in.N; ++i) {
    const double factor = 1.0 - (i - 1) * in.B[i - 1];
    if (in.A[i - 1] == 0.0 || factor == 0.0) break;  // n_j = 0 for all j >= i
    term *= in.A[i - 1] / i * factor;
    sum += term;
  }
  out.exact_sum = sum;
  return out;
}

}  // namespace steiner

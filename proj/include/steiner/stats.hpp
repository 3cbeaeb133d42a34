#pragma once

// Sample summaries, factorial moments, Poisson goodness of fit and a chi-square
// uniformity statistic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "steiner/combinatorics.hpp"

namespace steiner {

struct SampleSummary {
  std::uint64_t count = 0;
  std::map<std::int64_t, std::uint64_t> histogram;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for a single sample

  static SampleSummary from_samples(const std::vector<std::int64_t>& samples) {
    SampleSummary s;
    for (auto x : samples) ++s.histogram[x];
    s.finish();
    return s;
  }

  static SampleSummary from_histogram(std::map<std::int64_t, std::uint64_t> h) {
    SampleSummary s;
    s.histogram = std::move(h);
    s.finish();
    return s;
  }

  double standard_error() const { return count > 1 ? std::sqrt(variance / static_cast<double>(count)) : 0.0; }

  double frequency(std::int64_t k) const {
    auto it = histogram.find(k);
    return (it == histogram.end() || count == 0) ? 0.0 : static_cast<double>(it->second) / static_cast<double>(count);
  }

 private:
  void finish() {
    count = 0;
    long double sum = 0;
    for (auto [v, f] : histogram) {
      count += f;
      sum += static_cast<long double>(v) * f;
    }
    if (count == 0) return;
    mean = static_cast<double>(sum / count);
    long double ss = 0;
    for (auto [v, f] : histogram) ss += (v - static_cast<long double>(mean)) * (v - static_cast<long double>(mean)) * f;
    variance = count > 1 ? static_cast<double>(ss / (count - 1)) : 0.0;
  }
};

/// Mean and standard error of a 0/1 indicator.
struct Proportion {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double estimate() const { return total ? static_cast<double>(hits) / static_cast<double>(total) : 0.0; }
  double standard_error() const {
    if (total == 0) return 0.0;
    const double p = estimate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
  }
};

/// Sample [s]_t values, summed exactly.
inline std::vector<BigInt> falling_factorial_samples(const std::vector<std::int64_t>& samples, int t) {
  std::vector<BigInt> out;
  out.reserve(samples.size());
  for (auto s : samples) out.push_back(falling_factorial<BigInt>(BigInt(s), t));
  return out;
}

/// (1/count) sum_s [s]_t, with the sum taken in exact integer arithmetic.
inline double factorial_moment(const std::vector<std::int64_t>& samples, int t) {
  if (samples.empty()) throw std::invalid_argument("factorial_moment: empty sample");
  if (t < 1) throw std::invalid_argument("factorial_moment: t must be >= 1");
  BigInt total = 0;
  for (auto s : samples) total += falling_factorial<BigInt>(BigInt(s), t);
  return static_cast<double>(Rational(total, BigInt(samples.size())));
}

/// Standard error of the t-th factorial moment estimator.
inline double factorial_moment_standard_error(const std::vector<std::int64_t>& samples, int t) {
  if (samples.size() < 2) return 0.0;
  std::vector<double> vals;
  vals.reserve(samples.size());
  double mean = 0.0;
  for (auto s : samples) {
    vals.push_back(falling_factorial_real(static_cast<double>(s), t));
    mean += vals.back();
  }
  mean /= static_cast<double>(vals.size());
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(vals.size() - 1) / static_cast<double>(vals.size()));
}

inline double poisson_pmf(std::int64_t k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0));
}

/// (1/2) sum_k |empirical(k) - Po(lambda)(k)|, the Poisson mass beyond the
/// largest observed value included.
inline double poisson_tv_distance(const SampleSummary& s, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_tv_distance: lambda must be >= 0");
  if (s.count == 0) throw std::invalid_argument("poisson_tv_distance: empty summary");
  double total = 0.0;
  double covered = 0.0;
  std::int64_t kmax = 0;
  for (auto [v, f] : s.histogram) {
    if (v < 0) total += static_cast<double>(f) / static_cast<double>(s.count);
    kmax = std::max(kmax, v);
  }
  for (std::int64_t k = 0; k <= kmax; ++k) {
    const double p = poisson_pmf(k, lambda);
    covered += p;
    total += std::fabs(s.frequency(k) - p);
  }
  total += std::max(0.0, 1.0 - covered);
  return std::clamp(0.5 * total, 0.0, 1.0);
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t categories = 0;  // after pooling
};

/// Chi-square test of `observed` (category index -> count, indices in
/// [0, k)) against the uniform law on k categories. Missing categories count as
/// zero. When the expected count per category is below 5, consecutive
/// categories are pooled into groups of size ceil(5 / expected); the last group
/// absorbs the remainder.
inline ChiSquareResult chi_square_uniformity(const std::map<std::int64_t, std::uint64_t>& observed, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("chi_square_uniformity: need at least one category");
  std::uint64_t total = 0;
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (auto [cat, c] : observed) {
    if (cat < 0 || cat >= k) throw std::invalid_argument("chi_square_uniformity: category out of range");
    counts[static_cast<std::size_t>(cat)] += static_cast<double>(c);
    total += c;
  }
  const double expected = static_cast<double>(total) / static_cast<double>(k);
  std::int64_t group = 1;
  if (expected < 5.0) group = expected > 0.0 ? static_cast<std::int64_t>(std::ceil(5.0 / expected)) : k;
  std::vector<double> obs, exp;
  for (std::int64_t start = 0; start < k; start += group) {
    const std::int64_t stop = std::min(k, start + group);
    double o = 0.0;
    for (std::int64_t i = start; i < stop; ++i) o += counts[static_cast<std::size_t>(i)];
    obs.push_back(o);
    exp.push_back(expected * static_cast<double>(stop - start));
  }
  if (obs.size() >= 2 && exp.back() < 5.0) {
    obs[obs.size() - 2] += obs.back();
    exp[exp.size() - 2] += exp.back();
    obs.pop_back();
    exp.pop_back();
  }
  if (obs.size() < 2) throw std::invalid_argument("chi_square_uniformity: fewer than 2 categories after pooling");
  ChiSquareResult res;
  res.categories = obs.size();
  for (std::size_t i = 0; i < obs.size(); ++i) res.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  res.dof = static_cast<int>(obs.size()) - 1;
  res.p_value = res.statistic <= 0.0 ? 1.0 : boost::math::gamma_q(0.5 * res.dof, 0.5 * res.statistic);
  return res;
}

/// Kolmogorov-Smirnov distance between the empirical law of `xs` and U[0, 1].
inline double ks_uniform_statistic(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("ks_uniform_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - xs[i]);
    d = std::max(d, xs[i] - static_cast<double>(i) / n);
  }
  return d;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(xs.begin(), xs.end());
  const std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

}  // namespace steiner

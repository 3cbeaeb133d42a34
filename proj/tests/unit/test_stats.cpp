#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "steiner/stats.hpp"

using namespace steiner;

TEST(FactorialMoment, Examples) {
  const std::vector<std::int64_t> twos(10, 2);
  EXPECT_EQ(factorial_moment(twos, 2), 2.0);
  EXPECT_EQ(factorial_moment(twos, 3), 0.0);
  EXPECT_EQ(factorial_moment({0, 1, 2, 3}, 2), (0 + 0 + 2 + 6) / 4.0);
  EXPECT_THROW(factorial_moment({}, 1), std::invalid_argument);
  EXPECT_THROW(factorial_moment({1, 2}, 0), std::invalid_argument);
}

TEST(FactorialMoment, FirstMomentIsMean) {
  std::mt19937_64 gen(1);
  std::uniform_int_distribution<std::int64_t> d(0, 30);
  std::vector<std::int64_t> xs(1001);
  for (auto& x : xs) x = d(gen);
  EXPECT_NEAR(factorial_moment(xs, 1), SampleSummary::from_samples(xs).mean, 1e-12);
}

TEST(FactorialMoment, ExactForHugeValues) {
  // [3e9]_3 overflows 64 bits; the mean of [x]_3 over {3e9, 0} is half of it.
  const std::int64_t x = 3'000'000'000;
  const long double expected = static_cast<long double>(x) * (x - 1) * (x - 2) / 2;
  EXPECT_NEAR(factorial_moment({x, 0}, 3) / static_cast<double>(expected), 1.0, 1e-12);
}

TEST(FactorialMoment, PoissonReference) {
  std::mt19937_64 gen(2024);
  std::poisson_distribution<std::int64_t> po(1.5);
  std::vector<std::int64_t> xs(1'000'000);
  for (auto& x : xs) x = po(gen);
  const double fm = factorial_moment(xs, 2);
  const double se = factorial_moment_standard_error(xs, 2);
  EXPECT_NEAR(fm, 2.25, 3 * se);
  EXPECT_GT(se, 0.0);
  EXPECT_LT(se, 0.01);
}

TEST(SampleSummary, Consistent) {
  const auto s = SampleSummary::from_samples({1, 1, 2, 5});
  EXPECT_EQ(s.count, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.25);
  EXPECT_DOUBLE_EQ(s.variance, (1.5625 * 2 + 0.0625 + 7.5625) / 3);
  EXPECT_DOUBLE_EQ(s.frequency(1), 0.5);
  EXPECT_EQ(s.frequency(3), 0.0);
  const auto h = SampleSummary::from_histogram({{1, 2}, {2, 1}, {5, 1}});
  EXPECT_EQ(h.count, s.count);
  EXPECT_EQ(h.mean, s.mean);
  EXPECT_EQ(h.variance, s.variance);
  EXPECT_EQ(SampleSummary::from_samples({7}).variance, 0.0);
}

TEST(Proportion, StandardError) {
  const Proportion p{25, 100};
  EXPECT_DOUBLE_EQ(p.estimate(), 0.25);
  EXPECT_DOUBLE_EQ(p.standard_error(), std::sqrt(0.25 * 0.75 / 100));
  EXPECT_EQ((Proportion{}).estimate(), 0.0);
}

TEST(PoissonTv, Examples) {
  const auto zeros = SampleSummary::from_samples(std::vector<std::int64_t>(50, 0));
  EXPECT_NEAR(poisson_tv_distance(zeros, 1.0), 1.0 - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(poisson_tv_distance(zeros, 0.0), 0.0, 1e-15);
  // Histogram proportional to Po(2) up to k = 25: only the (tiny) tail is missing.
  std::map<std::int64_t, std::uint64_t> h;
  for (int k = 0; k <= 25; ++k) h[k] = static_cast<std::uint64_t>(std::llround(poisson_pmf(k, 2.0) * 1e15));
  EXPECT_LT(poisson_tv_distance(SampleSummary::from_histogram(h), 2.0), 1e-9);
  const auto far = SampleSummary::from_samples(std::vector<std::int64_t>(10, 40));
  EXPECT_NEAR(poisson_tv_distance(far, 1.0), 1.0, 1e-12);
}

TEST(PoissonTv, BoundedAndConvex) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::int64_t> d(0, 6);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<std::int64_t> a(1 + gen() % 40), b(a.size());
    for (auto& x : a) x = d(gen);
    for (auto& x : b) x = d(gen) / 2;
    const double lambda = 0.1 + 3.0 * static_cast<double>(gen() % 1000) / 1000.0;
    const double ta = poisson_tv_distance(SampleSummary::from_samples(a), lambda);
    const double tb = poisson_tv_distance(SampleSummary::from_samples(b), lambda);
    EXPECT_GE(ta, 0.0);
    EXPECT_LE(ta, 1.0);
    auto mix = a;
    mix.insert(mix.end(), b.begin(), b.end());
    EXPECT_LE(poisson_tv_distance(SampleSummary::from_samples(mix), lambda), 0.5 * (ta + tb) + 1e-12);
  }
}

TEST(ChiSquare, UniformAndDegenerate) {
  std::map<std::int64_t, std::uint64_t> flat;
  for (int i = 0; i < 15; ++i) flat[i] = 1000;
  const ChiSquareResult r = chi_square_uniformity(flat, 15);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 14);

  const ChiSquareResult d = chi_square_uniformity({{3, 15000}}, 15);
  EXPECT_NEAR(d.statistic, 14.0 * 15000, 1e-6);
  EXPECT_LT(d.p_value, 1e-300);
}

TEST(ChiSquare, KnownPValue) {
  // Two categories, 60/40 of 100: statistic 4 on one degree of freedom, p = 0.0455.
  const ChiSquareResult r = chi_square_uniformity({{0, 60}, {1, 40}}, 2);
  EXPECT_NEAR(r.statistic, 4.0, 1e-12);
  EXPECT_NEAR(r.p_value, 0.04550026, 1e-7);
}

TEST(ChiSquare, PoolsSparseCategories) {
  std::map<std::int64_t, std::uint64_t> obs;
  for (int i = 0; i < 15; ++i) obs[i] = 2;  // expected 2 per category
  const ChiSquareResult r = chi_square_uniformity(obs, 15);
  EXPECT_EQ(r.categories, 5u);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_THROW(chi_square_uniformity({{0, 3}}, 1), std::invalid_argument);
  EXPECT_THROW(chi_square_uniformity({{0, 3}}, 10), std::invalid_argument);
  EXPECT_THROW(chi_square_uniformity({{15, 3}}, 15), std::invalid_argument);
}

TEST(ChiSquare, PValuesSelfCalibrate) {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<std::int64_t> cat(0, 14);
  std::vector<double> ps;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    std::map<std::int64_t, std::uint64_t> obs;
    for (int i = 0; i < 10000; ++i) ++obs[cat(gen)];
    ps.push_back(chi_square_uniformity(obs, 15).p_value);
  }
  // Kolmogorov critical value at level 0.05.
  EXPECT_LT(ks_uniform_statistic(ps), 1.358 / std::sqrt(static_cast<double>(reps)));
}

TEST(Ks, Examples) {
  EXPECT_NEAR(ks_uniform_statistic({0.5}), 0.5, 1e-15);
  EXPECT_NEAR(ks_uniform_statistic({0.125, 0.375, 0.625, 0.875}), 0.125, 1e-15);
  EXPECT_THROW(ks_uniform_statistic({}), std::invalid_argument);
}

TEST(Median, Examples) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);
}

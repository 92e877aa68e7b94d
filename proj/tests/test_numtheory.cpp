#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle_values.hpp"
#include "salemlab/errors.hpp"
#include "salemlab/numtheory.hpp"
#include "salemlab/specfun.hpp"

using namespace salemlab;

namespace {

int mu_trial(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

const MertensEvaluator& shared_evaluator() {
  static const MertensEvaluator ev(kDefaultSieveLimit);
  return ev;
}

}  // namespace

TEST(MoebiusSieve, FirstTen) {
  const auto t = moebius_sieve(10);
  const int expect[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.mu(n), expect[n - 1]) << n;
  EXPECT_EQ(moebius_sieve(100).mu(4), 0);
  EXPECT_EQ(moebius_sieve(100).mu(30), -1);
}

TEST(MoebiusSieve, Limits) {
  EXPECT_THROW(moebius_sieve(0), LimitError);
  EXPECT_THROW(moebius_sieve(kSieveCap + 1), LimitError);
  const auto t = moebius_sieve(50);
  EXPECT_THROW(t.mu(51), LimitError);
  EXPECT_THROW(t.mu(0), LimitError);
}

TEST(MoebiusSieve, AgreesWithTrialFactorization) {
  const auto& ev = shared_evaluator();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> pick(1, kDefaultSieveLimit);
  for (int i = 0; i < 1000; ++i) {
    const auto n = pick(rng);
    EXPECT_EQ(ev.mu(n), mu_trial(n)) << n;
  }
}

TEST(MoebiusSieve, SegmentedMatchesLinear) {
  // above the linear-sieve threshold the table is filled segment by segment
  const auto big = moebius_sieve(kLinearSieveMax + 5000);
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<std::int64_t> pick(kLinearSieveMax - 1000, kLinearSieveMax + 5000);
  for (int i = 0; i < 300; ++i) {
    const auto n = pick(rng);
    EXPECT_EQ(big.mu(n), mu_trial(n)) << n;
  }
  const auto& small = shared_evaluator();
  for (std::int64_t n = 1; n <= 2000; ++n) EXPECT_EQ(big.mu(n), small.mu(n));
}

TEST(MoebiusSieve, DivisorSumVanishes) {
  const auto& ev = shared_evaluator();
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::int64_t> pick(2, kDefaultSieveLimit);
  for (int i = 0; i < 1000; ++i) {
    const auto n = pick(rng);
    int sum = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
      if (n % d != 0) continue;
      sum += ev.mu(d);
      if (d * d != n) sum += ev.mu(n / d);
    }
    EXPECT_EQ(sum, 0) << n;
  }
}

TEST(Mertens, Examples) {
  const auto& ev = shared_evaluator();
  EXPECT_EQ(mertens(1.0, ev), 1);
  EXPECT_EQ(mertens(2.0, ev), 0);
  EXPECT_EQ(mertens(2.5, ev), 0);
  EXPECT_EQ(mertens(5.0, ev), -2);
  std::int64_t brute = 0;
  for (int n = 1; n <= 100; ++n) brute += mu_trial(n);
  EXPECT_EQ(mertens(100.0, ev), brute);
  EXPECT_THROW(mertens(2e6, ev), LimitError);
}

TEST(Mertens, PrefixConsistencyAndTrivialBound) {
  const auto& ev = shared_evaluator();
  for (std::int64_t n = 2; n <= ev.limit(); ++n) {
    ASSERT_EQ(ev.prefix(n) - ev.prefix(n - 1), ev.mu(n)) << n;
    ASSERT_LE(std::abs(ev.prefix(n)), n);
  }
}

TEST(Mertens, CsvExport) {
  const std::string csv = mertens_csv(shared_evaluator(), 5);
  EXPECT_EQ(csv, "n,mu,M\n1,1,1\n2,-1,0\n3,-1,-1\n4,0,-1\n5,-1,-2\n");
}

TEST(ExampleH, AtZeroFromEiOracle) {
  const double expect = oracle::kEiMinus1 - 2.0 * oracle::kEiMinus2;
  EXPECT_NEAR(example_h(0.0, 0.75), expect, 1e-12);
  EXPECT_LT(example_h(0.0, 0.75), 0.0);  // |Ei(-1)| > 2|Ei(-2)| makes the sum negative
}

TEST(ExampleH, DoubleExponentialDecay) {
  const double h5 = example_h(5.0, 0.75);
  EXPECT_TRUE(h5 == 0.0 || std::abs(h5) < 1e-60);
  EXPECT_LE(std::abs(h5), 3.0 * std::exp(0.75 * 5.0) * std::exp(-std::exp(5.0)) / std::exp(5.0));
  EXPECT_EQ(example_h(650.0, 0.75), 0.0);
  EXPECT_THROW(example_h(701.0, 0.75), OverflowError);
}

TEST(ExamplePhi, Examples) {
  const auto& ev = shared_evaluator();
  EXPECT_EQ(example_phi(0.5, 0.75, ev), 0.0);
  EXPECT_EQ(example_phi(-std::log(2.5), 0.75, ev), 0.0);
  EXPECT_NEAR(example_phi(-std::log(5.0), 0.75, ev), -std::pow(5.0, -0.75) * -2.0, 1e-15);
  EXPECT_GT(example_phi(-std::log(5.0), 0.75, ev), 0.0);
  EXPECT_THROW(example_phi(-std::log(3e6), 0.75, ev), LimitError);
}

TEST(ExamplePhi, SupportIsNegativeAxis) {
  const auto& ev = shared_evaluator();
  for (double sigma : {0.55, 0.75, 0.95}) {
    EXPECT_EQ(example_phi(0.0, sigma, ev), 0.0);
    for (double x = 1e-12; x < 50.0; x = x * 1.7 + 0.01) EXPECT_EQ(example_phi(x, sigma, ev), 0.0);
  }
}

TEST(ExamplePhi, StepStructure) {
  const auto& ev = shared_evaluator();
  const double sigma = 0.75;
  for (std::int64_t n = 1; n < 300; ++n) {
    // on (-log(n+1), -log n) phi e^{-sigma x} is the constant -M(n)
    const double a = -std::log(static_cast<double>(n + 1));
    const double b = -std::log(static_cast<double>(n));
    for (double f : {0.1, 0.5, 0.9}) {
      const double x = a + f * (b - a);
      ASSERT_NEAR(example_phi(x, sigma, ev) * std::exp(-sigma * x), -static_cast<double>(ev.prefix(n)), 1e-12) << n;
    }
    // a jump across -log(n+1) happens exactly when mu(n+1) != 0
    const double left = example_phi(a - 1e-9, sigma, ev) * std::exp(-sigma * (a - 1e-9));
    const double right = example_phi(a + 1e-9, sigma, ev) * std::exp(-sigma * (a + 1e-9));
    EXPECT_EQ(std::abs(left - right) > 0.5, ev.mu(n + 1) != 0) << n + 1;
  }
}

TEST(VerifyExample, PassesAtDefaultBudget) {
  const auto& ev = shared_evaluator();
  const auto r = verify_example(0.75, {-2.0, -1.0, 0.0, 1.0, 2.0}, std::log(1e6), 1e-4, ev);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_abs_err, 1e-4);
  ASSERT_EQ(r.per_point.size(), 5u);
  for (const auto& p : r.per_point) EXPECT_NEAR(p.rhs, example_h(p.x, 0.75), 0.0);
}

TEST(VerifyExample, TinyToleranceHitsFloor) {
  const auto r = verify_example(0.75, default_example_points(), std::log(1e6), 1e-30, shared_evaluator());
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_abs_err, 1e-30);
  EXPECT_LT(r.max_abs_err, 1e-12);
}

TEST(VerifyExample, UnderTruncationFails) {
  const auto r = verify_example(0.75, default_example_points(), 1.0, 1e-4, shared_evaluator());
  EXPECT_FALSE(r.pass);
  EXPECT_GT(r.max_abs_err, 100.0 * 1e-4);
}

TEST(VerifyExample, ErrorNonIncreasingInY) {
  const auto& ev = shared_evaluator();
  double previous = std::numeric_limits<double>::infinity();
  for (int e = 3; e <= 6; ++e) {
    const auto r = verify_example(0.75, default_example_points(), std::log(std::pow(10.0, e)), 1e-4, ev);
    EXPECT_LE(r.max_abs_err, previous) << e;
    previous = r.max_abs_err;
  }
}

TEST(VerifyExample, Preconditions) {
  const auto& ev = shared_evaluator();
  EXPECT_THROW(verify_example(0.4, {0.0}, 5.0, 1e-4, ev), DomainError);
  EXPECT_THROW(verify_example(0.75, {0.0}, std::log(1e7), 1e-4, ev), LimitError);
}

TEST(VerifyExample, DefaultPoints) {
  const auto xs = default_example_points();
  ASSERT_EQ(xs.size(), 11u);
  EXPECT_DOUBLE_EQ(xs.front(), -3.0);
  EXPECT_DOUBLE_EQ(xs.back(), 3.0);
}

TEST(EiMellin, Examples) {
  const auto a = ei_mellin_check(1.0, Complex(0.75, 0.0), 1e-8);
  EXPECT_TRUE(a.pass);
  EXPECT_LT(std::abs(a.numeric - oracle::kEiMellin_1_075) / std::abs(oracle::kEiMellin_1_075), 1e-10);
  EXPECT_LT(std::abs(a.analytic - oracle::kEiMellin_1_075) / std::abs(oracle::kEiMellin_1_075), 1e-12);
  const auto b = ei_mellin_check(2.0, Complex(0.75, 3.0), 1e-6);
  EXPECT_TRUE(b.pass);
  EXPECT_LT(std::abs(b.numeric - oracle::kEiMellin_2_075_3i) / std::abs(oracle::kEiMellin_2_075_3i), 1e-8);
  EXPECT_TRUE(ei_mellin_check(1.0, Complex(0.05, 0.0), 1e-8).pass);
}

TEST(EiMellin, Preconditions) {
  EXPECT_THROW(ei_mellin_check(0.0, Complex(0.75, 0.0), 1e-8), DomainError);
  EXPECT_THROW(ei_mellin_check(1.0, Complex(-0.1, 0.0), 1e-8), DomainError);
}

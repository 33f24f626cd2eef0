#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace gkmean;
using namespace gkmean::testing;

namespace {

FloatSum two_term() { return sum1<FloatCoeff>({{1.0, 0}, {1.0, 1}}); }
FloatSum one() { return sum1<FloatCoeff>({{1.0, 0}}); }

std::vector<Zero> two_term_zeros() {
  std::vector<Zero> z;
  for (double y : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) z.push_back({{0.0, y}, 1});
  return z;
}

}  // namespace

TEST(WeightedSum, Examples) {
  const auto zeros = two_term_zeros();
  EXPECT_NEAR(std::abs(weighted_sum(zeros, sum1<FloatCoeff>({{1.0, -1}})) + 6.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(weighted_sum(zeros, one()) - 6.0), 0.0, 1e-15);
  EXPECT_EQ(weighted_sum({}, one()), std::complex<double>(0.0));
}

TEST(WeightedSum, CountsMultiplicity) {
  EXPECT_EQ(weighted_sum({{{0.0, 0.0}, 3}}, one()), std::complex<double>(3.0));
}

TEST(EmpiricalMean, ArithmeticProgressionZeros) {
  const auto f = two_term();
  const auto em = empirical_mean(f, one(), 10.0);
  EXPECT_EQ(em.count(), 20);
  EXPECT_NEAR(em.value.real(), 20.0 / (2.0 * em.R_used()), 1e-15);
  EXPECT_NEAR(em.value.real(), 1.0, 1e-12);

  const auto neg = empirical_mean(f, sum1<FloatCoeff>({{1.0, -1}}), 10.0);
  EXPECT_NEAR(std::abs(neg.value + 1.0), 0.0, 1e-9);
}

TEST(EmpiricalMean, SingleTermIsInputError) {
  EXPECT_THROW(empirical_mean(sum1<FloatCoeff>({{1.0, 1}}), one(), 5.0), InputError);
}

TEST(EmpiricalMean, CommensurateExactness) {
  // Zeros lift with period 1 in Im z; summing over whole periods gives the
  // substitution value up to root-solver accuracy.
  Generator gen(99);
  for (int trial = 0; trial < 6; ++trial) {
    auto f = sum1<FloatCoeff>({{gen.complex_coeff(), 0}, {gen.complex_coeff(), 1}, {gen.complex_coeff(), 2}});
    auto g = sum1<FloatCoeff>({{gen.complex_coeff(), -1}, {gen.complex_coeff(), 1}});
    const auto s = find_zeros(f, 4.5);
    ASSERT_GT(s.ordinate, 4.0);
    for (const double N : {2.0, 4.0}) {
      std::vector<Zero> window;
      for (const auto& z : s.zeros)
        if (z.location.imag() >= -N && z.location.imag() < N) window.push_back(z);
      const auto emp = weighted_sum(window, g) / (2 * N);
      EXPECT_LT(std::abs(emp - mean_via_substitution(f, g)), 1e-7) << "trial " << trial;
    }
  }
}

TEST(FewnomialCheck, Examples) {
  EXPECT_TRUE(fewnomial_check(two_term_zeros(), 2, 1.0));
  EXPECT_FALSE(fewnomial_check({{{0.0, 1.0}, 1}, {{0.1, 1.0}, 1}}, 2, 1.0));
  EXPECT_FALSE(fewnomial_check({{{0.0, 1.0}, 2}}, 2, 1.0));
  EXPECT_TRUE(fewnomial_check({}, 3, 1.0));
  EXPECT_THROW(fewnomial_check({}, 3, 0.0), InputError);
}

TEST(ConvergenceReport, IncommensurateDensity) {
  const auto f = normalize<FloatCoeff>({{1.0, freq2(0, 0)}, {1.0, freq2(1, 0)}, {1.0, freq2(0, 1)}}, sqrt2_basis());
  const auto g = FloatSum::constant(1.0, sqrt2_basis());
  const auto rep = convergence_report(f, g, {5, 10, 20, 40});
  EXPECT_NEAR(rep.symbolic_mean.real(), std::numbers::sqrt2, 1e-15);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_LT(rep.rows.back().abs_error, 0.05);
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.rows) {
    EXPECT_TRUE(row.fewnomial_ok);
    EXPECT_TRUE(row.conserved);
  }
}

TEST(ConvergenceReport, CommensurateEnvelope) {
  const auto f = sum1<FloatCoeff>({{6.0, 0}, {-5.0, 1}, {1.0, 2}});
  const auto g = sum1<FloatCoeff>({{1.0, 1}});
  const auto rep = convergence_report(f, g, {5, 10, 20}, {}, 0.2);
  EXPECT_NEAR(rep.symbolic_mean.real(), 5.0, 1e-12);
  // Boundary crossings miss at most n zeros, each worth at most max|g| = e^{2 pi B}.
  const double gmax = std::exp(2 * std::numbers::pi * strip_bound(f, 0.5));
  for (const auto& row : rep.rows) EXPECT_LE(row.abs_error, gmax * 3 / row.R_used);
  EXPECT_TRUE(rep.pass);
}

TEST(ConvergenceReport, Errors) {
  const auto f = two_term();
  EXPECT_THROW(convergence_report(f, one(), {5}), InputError);
  EXPECT_THROW(convergence_report(f, one(), {10, 5}), InputError);
  EXPECT_THROW(convergence_report(sum1<FloatCoeff>({{1.0, 1}}), one(), {5, 10}), InputError);
}

TEST(ConvergenceReport, MedianRatio) {
  std::vector<ConvergenceRow> rows(3);
  rows[0].abs_error = 0.4;
  rows[1].abs_error = 0.2;
  rows[2].abs_error = 0.0;
  EXPECT_EQ(median_error_ratio(rows), std::numeric_limits<double>::infinity());
  rows[2].abs_error = 0.4;
  EXPECT_DOUBLE_EQ(median_error_ratio(rows), 1.25);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace gkmean;
using namespace gkmean::testing;

namespace {

ExactSum exact1(std::initializer_list<std::pair<GaussianRational, Rational>> terms) {
  std::vector<ExpTerm<ExactCoeff>> raw;
  for (const auto& [c, a] : terms) raw.push_back({ExactCoeff(c), freq1(a)});
  return normalize(std::move(raw), FrequencyBasis::unit());
}

ExactSum exact_one(const BasisPtr& b) { return ExactSum::constant(ExactCoeff(1), b); }

ExactCoeff two_pi_times(const Frequency& a, const FrequencyBasis& b) {
  return ExactCoeff::tau() * ExactCoeff::linear_form(a, b);
}

/// Drop terms beyond the cutoff on the expansion side.
ExactSum truncate_side(const ExactSum& s, End end, const Frequency& cutoff) {
  std::vector<ExpTerm<ExactCoeff>> kept;
  for (const auto& t : s.terms())
    if (end == End::First ? compare(t.freq, cutoff) <= 0 : compare(t.freq, -cutoff) >= 0) kept.push_back(t);
  return normalize(std::move(kept), s.basis());
}

}  // namespace

TEST(TruncatedReciprocal, GeometricSeries) {
  auto ft = exact1({{1, 0}, {1, 1}});
  auto s = truncated_reciprocal(ft, End::First, 2.5);
  EXPECT_EQ(s.sum, exact1({{1, 0}, {-1, 1}, {1, 2}}));
}

TEST(TruncatedReciprocal, OneIsItsOwnReciprocal) {
  auto one = exact_one(FrequencyBasis::unit());
  EXPECT_EQ(truncated_reciprocal(one, End::First, 7.0).sum, one);
  EXPECT_EQ(truncated_reciprocal(one, End::Last, 0.0).sum, one);
}

TEST(TruncatedReciprocal, TwoRoundsTruncatedAtOne) {
  auto ft = exact1({{1, 0}, {GaussianRational(Rational(-5, 6)), 1}, {GaussianRational(Rational(1, 6)), 2}});
  auto s = truncated_reciprocal(ft, End::First, freq1(1));
  EXPECT_EQ(s.sum, exact1({{1, 0}, {GaussianRational(Rational(5, 6)), 1}}));
  EXPECT_LE(s.rounds, 2);
}

TEST(TruncatedReciprocal, PreconditionErrors) {
  EXPECT_THROW(truncated_reciprocal(exact1({{2, 0}, {1, 1}}), End::First, 1.0), InputError);
  EXPECT_THROW(truncated_reciprocal(exact1({{1, 0}, {1, -1}}), End::First, 1.0), InputError);
  EXPECT_THROW(truncated_reciprocal(exact1({{1, 0}, {1, 1}}), End::Last, 1.0), InputError);
  EXPECT_THROW(truncated_reciprocal(exact1({{1, 0}, {1, 1}}), End::First, -1.0), InputError);
}

TEST(TruncatedReciprocal, RoundBoundAndTruncationSoundness) {
  Generator gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = gen.exact_sum(sqrt2_basis(), static_cast<int>(gen.integer(2, 4)), 3, 2);
    for (End end : {End::First, End::Last}) {
      auto ft = divide_by_extreme_term(f, end);
      const Frequency cutoff = freq2(gen.integer(0, 2), gen.integer(0, 1));
      if (sign(cutoff) < 0) continue;
      auto series = truncated_reciprocal(ft, end, cutoff);
      double d = std::numeric_limits<double>::infinity();
      for (const auto& t : ft.terms())
        if (!t.freq.is_zero()) d = std::min(d, std::abs(t.freq.to_double()));
      EXPECT_LE(series.rounds, std::floor(cutoff.to_double() / d) + 1);
      EXPECT_EQ(truncate_side(multiply(ft, series.sum), end, cutoff), exact_one(sqrt2_basis()));
    }
  }
}

TEST(ConstantTermA, GIsOne) {
  auto b = sqrt2_basis();
  auto f = normalize<ExactCoeff>({{ExactCoeff(1), freq2(0, 0)}, {ExactCoeff(1), freq2(1, 0)},
                                  {ExactCoeff(GaussianRational(2, 3)), freq2(0, 1)}},
                                 b);
  EXPECT_EQ(constant_term_A(f, exact_one(b), End::First), ExactCoeff(0));
  EXPECT_EQ(constant_term_A(f, exact_one(b), End::Last), two_pi_times(freq2(0, 1), *b));
}

TEST(ConstantTermA, HandExpansions) {
  auto f = exact1({{1, 0}, {1, 1}});
  auto g = exact1({{1, -1}});
  EXPECT_EQ(constant_term_A(f, g, End::First), ExactCoeff::tau());
  EXPECT_EQ(constant_term_A(f, g, End::Last), ExactCoeff(0));
  EXPECT_THROW(constant_term_A(ExactSum(), g, End::First), InputError);
}

TEST(ConstantTermA, ExactnessOfGEqualsOne) {
  Generator gen(100);
  for (int trial = 0; trial < 100; ++trial) {
    const BasisPtr b = trial % 2 ? sqrt2_basis() : FrequencyBasis::unit();
    auto f = gen.exact_sum(b, static_cast<int>(gen.integer(2, 6)));
    EXPECT_EQ(constant_term_A(f, exact_one(b), End::First), two_pi_times(f.first().freq, *b));
    EXPECT_EQ(constant_term_A(f, exact_one(b), End::Last), two_pi_times(f.last().freq, *b));
  }
}

TEST(ConstantTermA, CutoffIndependence) {
  Generator gen(31);
  for (int trial = 0; trial < 60; ++trial) {
    auto b = sqrt2_basis();
    auto f = gen.exact_sum(b, static_cast<int>(gen.integer(2, 4)));
    auto g = gen.exact_sum(b, static_cast<int>(gen.integer(1, 3)));
    for (End end : {End::First, End::Last}) {
      const auto& ext = f.extreme(end);
      auto ft = divide_by_extreme_term(f, end);
      auto P = multiply(g, derivative(f)).scaled(ext.coeff.inverse()).shifted(-ext.freq);
      const ExactCoeff base = constant_term_of_product(P, ft, end);
      for (double extra : {0.5, 1.7, 3.0}) {
        double C = 0;
        if (!P.is_zero()) C = std::max(0.0, end == End::First ? -P.first().freq.to_double() : P.last().freq.to_double());
        auto series = truncated_reciprocal(ft, end, C + extra);
        ExactCoeff acc;
        for (const auto& p : P.terms()) acc = acc + p.coeff * series.sum.coeff_at(-p.freq);
        EXPECT_EQ(acc, base);
      }
    }
  }
}

TEST(MeanValue, Examples) {
  auto r = mean_value(exact1({{1, 0}, {1, 1}}), exact1({{1, -1}}));
  EXPECT_EQ(r.mean, ExactCoeff(-1));
  EXPECT_EQ(r.A_first, ExactCoeff::tau());
  EXPECT_EQ(r.A_last, ExactCoeff(0));

  auto q = mean_value(exact1({{6, 0}, {-5, 1}, {1, 2}}), exact1({{1, 1}}));
  EXPECT_EQ(q.mean, ExactCoeff(5));

  auto b = sqrt2_basis();
  auto f = normalize<ExactCoeff>({{ExactCoeff(1), freq2(0, 0)}, {ExactCoeff(1), freq2(1, 0)},
                                  {ExactCoeff(1), freq2(0, 1)}},
                                 b);
  auto s = mean_value(f, exact_one(b));
  EXPECT_EQ(s.mean, ExactCoeff::linear_form(freq2(0, 1), *b));
  EXPECT_NEAR(s.numeric_mean().real(), std::numbers::sqrt2, 1e-15);
}

TEST(MeanValue, SingleTermAndZeroG) {
  auto r = mean_value(exact1({{3, 2}}), exact1({{1, 5}}));
  EXPECT_EQ(r.mean, ExactCoeff(0));
  EXPECT_EQ(r.A_first, r.A_last);
  EXPECT_EQ(mean_value(exact1({{1, 0}, {1, 1}}), ExactSum()).mean, ExactCoeff(0));
  EXPECT_THROW(mean_value(ExactSum(), ExactSum()), InputError);
}

TEST(MeanValue, GIsOneGivesSpan) {
  Generator gen(8);
  for (int trial = 0; trial < 50; ++trial) {
    auto b = sqrt2_basis();
    auto f = gen.exact_sum(b, static_cast<int>(gen.integer(2, 6)));
    auto r = mean_value(f, exact_one(b));
    EXPECT_EQ(r.mean, ExactCoeff::linear_form(f.last().freq - f.first().freq, *b));
    EXPECT_NEAR(r.numeric_mean().real(), mean_zero_count(f), 1e-14);
  }
}

TEST(MeanValue, ReflectionSymmetry) {
  Generator gen(13);
  for (int trial = 0; trial < 60; ++trial) {
    auto b = sqrt2_basis();
    auto f = gen.exact_sum(b, static_cast<int>(gen.integer(2, 4)));
    auto g = gen.exact_sum(b, static_cast<int>(gen.integer(1, 3)));
    EXPECT_EQ(mean_value(f, g).mean, mean_value(reflect(f), reflect(g)).mean);

    auto ff = gen.float_sum(static_cast<int>(gen.integer(2, 4)));
    auto gf = gen.float_sum(static_cast<int>(gen.integer(1, 3)));
    const auto m1 = mean_value(ff, gf).mean, m2 = mean_value(reflect(ff), reflect(gf)).mean;
    EXPECT_LE(std::abs(m1 - m2), 1e-12 * (1 + std::abs(m1)));
  }
}

TEST(MeanValue, SupportVanishing) {
  Generator gen(17);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto b = sqrt2_basis();
    auto f = gen.exact_sum(b, static_cast<int>(gen.integer(2, 4)));
    const Frequency alpha = freq2(gen.rational(4, 3), gen.rational(3, 2));
    auto gens = support_semigroup_generators(f);
    if (semigroup_contains(gens.neg, alpha) || semigroup_contains(gens.pos, alpha)) continue;
    ++checked;
    auto g = ExactSum::monomial(ExactCoeff(1), alpha, b);
    auto r = mean_value(f, g);
    EXPECT_TRUE(r.A_first.is_zero());
    EXPECT_TRUE(r.A_last.is_zero());
    EXPECT_TRUE(r.mean.is_zero());
  }
  EXPECT_GT(checked, 50);
}

TEST(MeanZeroCount, Examples) {
  EXPECT_DOUBLE_EQ(mean_zero_count(exact1({{1, 0}, {1, 1}})), 1.0);
  EXPECT_DOUBLE_EQ(mean_zero_count(exact1({{1, 3}})), 0.0);
  auto f = normalize<FloatCoeff>({{1.0, freq2(0, 0)}, {1.0, freq2(1, 0)}, {1.0, freq2(0, 1)}}, sqrt2_basis());
  EXPECT_NEAR(mean_zero_count(f), std::numbers::sqrt2, 1e-15);
  EXPECT_THROW(mean_zero_count(ExactSum()), InputError);
}

TEST(SemigroupGenerators, Examples) {
  auto f = normalize<FloatCoeff>({{1.0, freq2(0, 0)}, {1.0, freq2(1, 0)}, {1.0, freq2(0, 1)}}, sqrt2_basis());
  auto g = support_semigroup_generators(f);
  EXPECT_EQ(g.neg, (std::vector<Frequency>{freq2(-1, 0), freq2(0, -1)}));
  EXPECT_EQ(g.pos, (std::vector<Frequency>{freq2(0, 1), freq2(-1, 1)}));

  auto single = support_semigroup_generators(exact1({{1, 2}}));
  EXPECT_TRUE(single.neg.empty());
  EXPECT_TRUE(single.pos.empty());

  auto eq = support_semigroup_generators(exact1({{1, 0}, {1, 1}, {1, 2}}));
  EXPECT_EQ(eq.neg, (std::vector<Frequency>{freq1(-1), freq1(-2)}));
  EXPECT_EQ(eq.pos, (std::vector<Frequency>{freq1(2), freq1(1)}));
}

TEST(SemigroupContains, Examples) {
  const std::vector<Frequency> gens{freq2(-1, 0), freq2(0, -1)};
  EXPECT_TRUE(semigroup_contains(gens, freq2(-2, -1)));
  EXPECT_FALSE(semigroup_contains(gens, freq2(Rational(-1, 2), 0)));
  EXPECT_TRUE(semigroup_contains(gens, freq2(0, 0)));
  EXPECT_FALSE(semigroup_contains(gens, freq2(1, 0)));
  EXPECT_FALSE(semigroup_contains({}, freq2(-1, 0)));
}

TEST(SemigroupContains, Errors) {
  EXPECT_THROW(semigroup_contains({freq1(-1), freq1(2)}, freq1(-1)), InputError);
  // Many small generators and an unreachable target exhaust a tiny budget.
  std::vector<Frequency> gens;
  for (int k = 3; k < 12; ++k) gens.push_back(freq1(Rational(-1, k)));
  EXPECT_THROW(semigroup_contains(gens, freq1(Rational(-100, 13)), 50), ResourceError);
}

TEST(SemigroupContains, AgreesWithBruteForce) {
  // Brute force: enumerate all combinations with bounded multipliers.
  Generator gen(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<long, long>> raw;
    for (int i = 0; i < 3; ++i) raw.emplace_back(gen.integer(0, 2), gen.integer(0, 2));
    std::vector<Frequency> gens;
    for (auto [p, q] : raw)
      if (p || q) gens.push_back(freq2(p, q));
    const long tp = gen.integer(0, 5), tq = gen.integer(0, 5);
    bool want = tp == 0 && tq == 0;
    for (long m0 = 0; m0 <= 10 && !want; ++m0)
      for (long m1 = 0; m1 <= 10 && !want; ++m1)
        for (long m2 = 0; m2 <= 10 && !want; ++m2) {
          const long m[3] = {m0, m1, m2};
          long sp = 0, sq = 0;
          for (int i = 0; i < 3; ++i) {
            sp += m[i] * raw[i].first;
            sq += m[i] * raw[i].second;
          }
          want = sp == tp && sq == tq;
        }
    EXPECT_EQ(semigroup_contains(gens, freq2(tp, tq)), want);
  }
}

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"

namespace gkmean {

/// Partial sum of the geometric series for 1/f~, exact for every frequency
/// whose magnitude is at most `cutoff` on the expansion side.
template <Coefficient C>
struct TruncatedSeries {
  ExponentialSum<C> sum;
  HighPrec cutoff = 0;
  End end = End::First;
  int rounds = 0;
};

namespace detail {

/// 1 - f~ with the sign precondition checked; also returns min |frequency|.
template <Coefficient C>
ExponentialSum<C> geometric_ratio(const ExponentialSum<C>& ftilde, End end) {
  using traits = coeff_traits<C>;
  if (!traits::is_one(ftilde.constant_term()))
    throw InputError("reciprocal series needs a constant term equal to one");
  const int want = end == End::First ? 1 : -1;
  std::vector<ExpTerm<C>> raw;
  for (const auto& t : ftilde.terms()) {
    if (t.freq.is_zero()) continue;
    if (sign(t.freq) != want)
      throw InputError(std::string("1 - f~ has a frequency of the wrong sign for the ") +
                       (end == End::First ? "first" : "last") + "-term expansion: " + to_string(t.freq));
    raw.push_back({-t.coeff, t.freq});
  }
  return normalize(std::move(raw), ftilde.basis());
}

template <Coefficient C, class Keep>
TruncatedSeries<C> truncated_reciprocal_impl(const ExponentialSum<C>& ftilde, End end, const Keep& keep,
                                             HighPrec cutoff) {
  const ExponentialSum<C> ratio = geometric_ratio(ftilde, end);
  TruncatedSeries<C> out;
  out.cutoff = cutoff;
  out.end = end;

  auto truncate = [&](const ExponentialSum<C>& s) {
    std::vector<ExpTerm<C>> kept;
    for (const auto& t : s.terms())
      if (keep(t.freq)) kept.push_back(t);
    return normalize(std::move(kept), s.basis());
  };

  // Each power of the ratio moves at least min|freq| further from zero,
  // so the loop ends after floor(cutoff / min|freq|) + 1 rounds.
  ExponentialSum<C> power = ExponentialSum<C>::constant(coeff_traits<C>::one(), ftilde.basis());
  ExponentialSum<C> series = power;
  while (!ratio.is_zero()) {
    power = truncate(multiply(power, ratio));
    ++out.rounds;
    if (power.is_zero()) break;
    series = series + power;
  }
  out.sum = std::move(series);
  return out;
}

}  // namespace detail

/// Series 1 + (1 - f~) + (1 - f~)^2 + ... truncated to |frequency| <= cutoff,
/// with the cutoff given as an exact frequency magnitude (non-negative).
template <Coefficient C>
TruncatedSeries<C> truncated_reciprocal(const ExponentialSum<C>& ftilde, End end, const Frequency& cutoff) {
  if (sign(cutoff) < 0) throw InputError("cutoff must be non-negative");
  if (end == End::First)
    return detail::truncated_reciprocal_impl(
        ftilde, end, [&](const Frequency& a) { return compare(a, cutoff) <= 0; }, cutoff.value());
  const Frequency lower = -cutoff;
  return detail::truncated_reciprocal_impl(
      ftilde, end, [&](const Frequency& a) { return compare(a, lower) >= 0; }, cutoff.value());
}

/// Same, with a real cutoff compared against numeric frequency values.
template <Coefficient C>
TruncatedSeries<C> truncated_reciprocal(const ExponentialSum<C>& ftilde, End end, double cutoff) {
  if (!(cutoff >= 0) || !std::isfinite(cutoff)) throw InputError("cutoff must be finite and non-negative");
  const HighPrec c = cutoff;
  if (end == End::First)
    return detail::truncated_reciprocal_impl(
        ftilde, end, [&](const Frequency& a) { return a.value() <= c; }, c);
  return detail::truncated_reciprocal_impl(
      ftilde, end, [&](const Frequency& a) { return a.value() >= -c; }, c);
}

/// Constant term of P * (1/f~ expanded at `end`). The series is truncated at
/// the smallest cutoff that can still pair with a term of P to reach zero.
template <Coefficient C>
C constant_term_of_product(const ExponentialSum<C>& product, const ExponentialSum<C>& ftilde, End end) {
  using traits = coeff_traits<C>;
  if (product.is_zero()) return traits::zero();
  Frequency cutoff = Frequency::zero(*ftilde.basis());
  if (end == End::First) {
    if (sign(product.first().freq) < 0) cutoff = -product.first().freq;
  } else {
    if (sign(product.last().freq) > 0) cutoff = product.last().freq;
  }
  const TruncatedSeries<C> series = truncated_reciprocal(ftilde, end, cutoff);
  C acc = traits::zero();
  for (const auto& p : product.terms()) {
    const C s = series.sum.coeff_at(-p.freq);
    if (!traits::is_zero(s)) acc = acc + p.coeff * s;
  }
  return acc;
}

/// A_1 (End::First) or A_n (End::Last): constant term of
/// g f' / (c_k exp(2 pi alpha_k z)) times the reciprocal series of f~.
template <Coefficient C>
C constant_term_A(const ExponentialSum<C>& f, const ExponentialSum<C>& g, End end) {
  if (f.is_zero()) throw InputError("f must be a non-zero exponential sum");
  ExponentialSum<C>::require_same_basis(f, g);
  const auto& ext = f.extreme(end);
  const ExponentialSum<C> ftilde = divide_by_extreme_term(f, end);
  const ExponentialSum<C> product =
      multiply(g, derivative(f)).scaled(coeff_traits<C>::inverse(ext.coeff)).shifted(-ext.freq);
  return constant_term_of_product(product, ftilde, end);
}

struct SemigroupGenerators {
  std::vector<Frequency> neg;  ///< alpha_1 - alpha_i, i = 2..n
  std::vector<Frequency> pos;  ///< alpha_n - alpha_i, i = 1..n-1
};

template <Coefficient C>
SemigroupGenerators support_semigroup_generators(const ExponentialSum<C>& f) {
  if (f.is_zero()) throw InputError("f must be a non-zero exponential sum");
  SemigroupGenerators out;
  auto push_unique = [](std::vector<Frequency>& v, Frequency a) {
    if (a.is_zero()) return;
    for (const auto& x : v)
      if (x == a) return;
    v.push_back(std::move(a));
  };
  const Frequency& a1 = f.first().freq;
  const Frequency& an = f.last().freq;
  for (std::size_t i = 1; i < f.size(); ++i) push_unique(out.neg, a1 - f.terms()[i].freq);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) push_unique(out.pos, an - f.terms()[i].freq);
  return out;
}

/// Whether `alpha` is a non-negative integer combination of `generators`.
///
/// Exact depth-first search over multipliers. All generators share one sign,
/// so every branch terminates once the remainder changes sign; `max_nodes`
/// bounds the total work and raises ResourceError when exhausted.
inline bool semigroup_contains(const std::vector<Frequency>& generators, const Frequency& alpha,
                               std::uint64_t max_nodes = 1'000'000) {
  if (alpha.is_zero()) return true;
  std::vector<Frequency> gens;
  int s = 0;
  for (const auto& g : generators) {
    const int gs = sign(g);
    if (gs == 0) continue;
    if (s != 0 && gs != s) throw InputError("semigroup generators must all have the same sign");
    s = gs;
    gens.push_back(g);
  }
  if (gens.empty() || sign(alpha) != s) return false;

  // Largest generators first keeps the search tree shallow.
  std::sort(gens.begin(), gens.end(), [](const Frequency& a, const Frequency& b) {
    return abs(a.value()) > abs(b.value());
  });

  std::uint64_t nodes = 0;

  // r == m * g with m a non-negative integer, decided coordinate by coordinate.
  auto exact_multiple = [](const Frequency& r, const Frequency& g) {
    std::optional<Rational> m;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const Rational& gj = g.coords()[j];
      const Rational& rj = r.coords()[j];
      if (gj == 0) {
        if (rj != 0) return false;
        continue;
      }
      Rational q = rj / gj;
      if (m && *m != q) return false;
      m = q;
    }
    return m && *m >= 0 && m->get_den() == 1;
  };

  std::function<bool(std::size_t, const Frequency&)> search = [&](std::size_t i, const Frequency& rest) -> bool {
    if (++nodes > max_nodes) throw ResourceError("semigroup membership search exceeded its node budget");
    if (rest.is_zero()) return true;
    if (i + 1 == gens.size()) return exact_multiple(rest, gens[i]);
    Frequency r = rest;
    while (true) {
      if (search(i + 1, r)) return true;
      r = r - gens[i];
      const int rs = sign(r);
      if (rs == 0) return true;
      if (rs != s) return false;
    }
  };
  return search(0, alpha);
}

/// Mean value of g over the zeros of f, with the ingredients that produced it.
template <Coefficient C>
struct MeanValueResult {
  C A_first;
  C A_last;
  C mean;  ///< (A_last - A_first) / 2pi
  std::vector<Frequency> neg_generators;
  std::vector<Frequency> pos_generators;
  BasisPtr basis;

  FloatCoeff numeric_mean() const { return coeff_traits<C>::numeric(mean, *basis); }
  FloatCoeff numeric_A_first() const { return coeff_traits<C>::numeric(A_first, *basis); }
  FloatCoeff numeric_A_last() const { return coeff_traits<C>::numeric(A_last, *basis); }
};

template <Coefficient C>
MeanValueResult<C> mean_value(const ExponentialSum<C>& f, const ExponentialSum<C>& g) {
  using traits = coeff_traits<C>;
  if (f.is_zero()) throw InputError("f must be a non-zero exponential sum");
  ExponentialSum<C>::require_same_basis(f, g);
  MeanValueResult<C> r;
  r.basis = f.basis();
  r.A_first = constant_term_A(f, g, End::First);
  if (f.size() == 1) {
    // A single exponential never vanishes.
    r.A_last = r.A_first;
    r.mean = traits::zero();
  } else {
    r.A_last = constant_term_A(f, g, End::Last);
    r.mean = traits::divided_by_tau(r.A_last - r.A_first);
  }
  auto gens = support_semigroup_generators(f);
  r.neg_generators = std::move(gens.neg);
  r.pos_generators = std::move(gens.pos);
  return r;
}

/// alpha_n - alpha_1, the mean number of zeros per unit height.
template <Coefficient C>
double mean_zero_count(const ExponentialSum<C>& f) {
  if (f.is_zero()) throw InputError("f must be a non-zero exponential sum");
  return static_cast<double>(frequency_span(f).value());
}

}  // namespace gkmean

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "gkmean/coefficient.hpp"
#include "gkmean/errors.hpp"
#include "gkmean/frequency.hpp"

namespace gkmean {

/// One term c * exp(2*pi*alpha*z).
template <Coefficient C>
struct ExpTerm {
  C coeff;
  Frequency freq;
};

/// Which extreme frequency term a computation is anchored at.
enum class End { First, Last };

template <Coefficient C>
class ExponentialSum;

template <Coefficient C>
ExponentialSum<C> normalize(std::vector<ExpTerm<C>> raw, BasisPtr basis);

/// Finite sum  sum_i c_i exp(2*pi*alpha_i*z)  with strictly increasing
/// frequencies. The empty term list is the zero function.
///
/// Instances are immutable once built; only `normalize` constructs them.
template <Coefficient C>
class ExponentialSum {
 public:
  using coeff_type = C;
  using traits = coeff_traits<C>;

  /// Zero sum over the default basis.
  ExponentialSum() : basis_(FrequencyBasis::unit()) {}
  explicit ExponentialSum(BasisPtr basis) : basis_(std::move(basis)) {}

  /// c * exp(2*pi*alpha*z).
  static ExponentialSum monomial(C c, Frequency alpha, BasisPtr basis) {
    std::vector<ExpTerm<C>> t;
    t.push_back({std::move(c), std::move(alpha)});
    return normalize(std::move(t), std::move(basis));
  }

  static ExponentialSum constant(C c, BasisPtr basis) {
    Frequency zero = Frequency::zero(*basis);
    return monomial(std::move(c), std::move(zero), std::move(basis));
  }

  const std::vector<ExpTerm<C>>& terms() const { return terms_; }
  const BasisPtr& basis() const { return basis_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  const ExpTerm<C>& first() const {
    if (terms_.empty()) throw InputError("the zero sum has no extreme term");
    return terms_.front();
  }
  const ExpTerm<C>& last() const {
    if (terms_.empty()) throw InputError("the zero sum has no extreme term");
    return terms_.back();
  }
  const ExpTerm<C>& extreme(End end) const { return end == End::First ? first() : last(); }

  /// Coefficient at an exact frequency, zero when absent.
  C coeff_at(const Frequency& alpha) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), alpha,
                               [](const ExpTerm<C>& t, const Frequency& a) { return compare(t.freq, a) < 0; });
    if (it != terms_.end() && it->freq == alpha) return it->coeff;
    return traits::zero();
  }

  C constant_term() const { return coeff_at(Frequency::zero(*basis_)); }

  friend bool operator==(const ExponentialSum& a, const ExponentialSum& b) {
    if (!same_basis(a.basis_, b.basis_) || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].freq == b.terms_[i].freq) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
  }

  friend ExponentialSum operator+(const ExponentialSum& a, const ExponentialSum& b) {
    require_same_basis(a, b);
    std::vector<ExpTerm<C>> raw = a.terms_;
    raw.insert(raw.end(), b.terms_.begin(), b.terms_.end());
    return normalize(std::move(raw), a.basis_);
  }

  ExponentialSum operator-() const {
    ExponentialSum r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend ExponentialSum operator-(const ExponentialSum& a, const ExponentialSum& b) { return a + (-b); }

  /// Every coefficient multiplied by `c`.
  ExponentialSum scaled(const C& c) const {
    std::vector<ExpTerm<C>> raw;
    raw.reserve(terms_.size());
    for (const auto& t : terms_) raw.push_back({t.coeff * c, t.freq});
    return normalize(std::move(raw), basis_);
  }

  /// Multiplication by exp(2*pi*delta*z); ordering is preserved.
  ExponentialSum shifted(const Frequency& delta) const {
    ExponentialSum r = *this;
    for (auto& t : r.terms_) t.freq = t.freq + delta;
    return r;
  }

  static void require_same_basis(const ExponentialSum& a, const ExponentialSum& b) {
    if (!same_basis(a.basis_, b.basis_)) throw InputError("exponential sums use different frequency bases");
  }

 private:
  friend ExponentialSum normalize<C>(std::vector<ExpTerm<C>> raw, BasisPtr basis);

  BasisPtr basis_;
  std::vector<ExpTerm<C>> terms_;
};

using FloatSum = ExponentialSum<FloatCoeff>;
using ExactSum = ExponentialSum<ExactCoeff>;

/// Merges equal frequency vectors, drops zero coefficients and sorts by
/// increasing numeric frequency. Idempotent.
template <Coefficient C>
ExponentialSum<C> normalize(std::vector<ExpTerm<C>> raw, BasisPtr basis) {
  if (!basis) throw InputError("missing frequency basis");
  for (const auto& t : raw)
    if (t.freq.size() != basis->size())
      throw InputError("term frequency has " + std::to_string(t.freq.size()) + " coordinates, basis has " +
                       std::to_string(basis->size()));

  std::stable_sort(raw.begin(), raw.end(),
                   [](const ExpTerm<C>& a, const ExpTerm<C>& b) { return compare(a.freq, b.freq) < 0; });

  ExponentialSum<C> out(std::move(basis));
  for (auto& t : raw) {
    if (!out.terms_.empty() && out.terms_.back().freq == t.freq) {
      out.terms_.back().coeff = out.terms_.back().coeff + t.coeff;
    } else {
      if (!out.terms_.empty() && coeff_traits<C>::is_zero(out.terms_.back().coeff)) out.terms_.pop_back();
      out.terms_.push_back(std::move(t));
    }
  }
  if (!out.terms_.empty() && coeff_traits<C>::is_zero(out.terms_.back().coeff)) out.terms_.pop_back();
  return out;
}

/// Pointwise value at `z`, using double-precision frequency values.
template <Coefficient C>
std::complex<double> evaluate(const ExponentialSum<C>& f, std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& t : f.terms())
    acc += coeff_traits<C>::numeric(t.coeff, *f.basis()) * std::exp(two_pi * t.freq.to_double() * z);
  return acc;
}

/// d/dz, term by term: (c, alpha) -> (2*pi*alpha*c, alpha).
template <Coefficient C>
ExponentialSum<C> derivative(const ExponentialSum<C>& f) {
  std::vector<ExpTerm<C>> raw;
  raw.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.freq.is_zero()) continue;
    raw.push_back({t.coeff * coeff_traits<C>::derivative_factor(t.freq, *f.basis()), t.freq});
  }
  return normalize(std::move(raw), f.basis());
}

/// Product of two sums; frequency vectors add componentwise.
template <Coefficient C>
ExponentialSum<C> multiply(const ExponentialSum<C>& a, const ExponentialSum<C>& b) {
  ExponentialSum<C>::require_same_basis(a, b);
  std::vector<ExpTerm<C>> raw;
  raw.reserve(a.size() * b.size());
  for (const auto& x : a.terms())
    for (const auto& y : b.terms()) raw.push_back({x.coeff * y.coeff, x.freq + y.freq});
  return normalize(std::move(raw), a.basis());
}

/// f divided by its first or last term, so the constant term is exactly one.
/// For End::First all remaining frequencies are positive, for End::Last negative.
template <Coefficient C>
ExponentialSum<C> divide_by_extreme_term(const ExponentialSum<C>& f, End end) {
  if (f.is_zero()) throw InputError("cannot divide the zero sum by its extreme term");
  const auto& ext = f.extreme(end);
  const C inv = coeff_traits<C>::inverse(ext.coeff);
  const Frequency shift = -ext.freq;
  std::vector<ExpTerm<C>> raw;
  raw.reserve(f.size());
  for (const auto& t : f.terms()) {
    if (t.freq == ext.freq)
      raw.push_back({coeff_traits<C>::one(), Frequency::zero(*f.basis())});
    else
      raw.push_back({t.coeff * inv, t.freq + shift});
  }
  return normalize(std::move(raw), f.basis());
}

/// The sum representing z -> f(-z).
template <Coefficient C>
ExponentialSum<C> reflect(const ExponentialSum<C>& f) {
  std::vector<ExpTerm<C>> raw;
  raw.reserve(f.size());
  for (const auto& t : f.terms()) raw.push_back({t.coeff, -t.freq});
  return normalize(std::move(raw), f.basis());
}

/// Exact sum to float sum (same basis, coefficients evaluated numerically).
template <Coefficient C>
FloatSum to_float(const ExponentialSum<C>& f) {
  if constexpr (std::is_same_v<C, FloatCoeff>) {
    return f;
  } else {
    std::vector<ExpTerm<FloatCoeff>> raw;
    raw.reserve(f.size());
    for (const auto& t : f.terms()) raw.push_back({coeff_traits<C>::numeric(t.coeff, *f.basis()), t.freq});
    return normalize(std::move(raw), f.basis());
  }
}

/// alpha_n - alpha_1 as an exact frequency vector.
template <Coefficient C>
Frequency frequency_span(const ExponentialSum<C>& f) {
  return f.last().freq - f.first().freq;
}

}  // namespace gkmean

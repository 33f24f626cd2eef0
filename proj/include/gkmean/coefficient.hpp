#pragma once

#include <complex>
#include <concepts>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/frequency.hpp"
#include "gkmean/rational.hpp"

namespace gkmean {

/// a + b*i with rational parts.
struct GaussianRational {
  Rational re = 0;
  Rational im = 0;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long r) : re(r), im(0) {}

  bool is_zero() const { return re == 0 && im == 0; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational inverse() const {
    Rational n = re * re + im * im;
    if (n == 0) throw InputError("division by the zero coefficient");
    return {re / n, -im / n};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline std::string to_string(const GaussianRational& z) {
  if (z.im == 0) return to_string(z.re);
  if (z.re == 0) return to_string(z.im) + "i";
  return "(" + to_string(z.re) + (sgn(z.im) < 0 ? "" : "+") + to_string(z.im) + "i)";
}

/// Exact coefficient: a polynomial with Gaussian-rational coefficients in the
/// symbols tau = 2*pi and the basis values b_1..b_k.
///
/// User-supplied coefficients are constants. Differentiation multiplies by
/// tau * (sum_j q_j b_j), which keeps every quantity the mean-value formula
/// touches exact, including the final division by tau.
class ExactCoeff {
 public:
  /// Exponents [tau, b_1, ..., b_k] with trailing zeros trimmed.
  using Monomial = std::vector<unsigned>;

  ExactCoeff() = default;
  ExactCoeff(GaussianRational c) {
    if (!c.is_zero()) terms_.emplace(Monomial{}, std::move(c));
  }
  ExactCoeff(long c) : ExactCoeff(GaussianRational(c)) {}
  ExactCoeff(const Rational& re, const Rational& im) : ExactCoeff(GaussianRational(re, im)) {}

  static ExactCoeff monomial(Monomial m, GaussianRational c) {
    ExactCoeff r;
    trim(m);
    if (!c.is_zero()) r.terms_.emplace(std::move(m), std::move(c));
    return r;
  }

  static ExactCoeff tau() { return monomial({1}, 1); }

  /// sum_j q_j b_j for a frequency with coordinates q. Basis elements that
  /// are integer literals are folded into the rational coefficient.
  static ExactCoeff linear_form(const Frequency& a, const FrequencyBasis& basis) {
    ExactCoeff r;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (a.coords()[j] == 0) continue;
      if (basis.is_integer_element(j)) {
        r += ExactCoeff(GaussianRational(a.coords()[j] * parse_rational(basis.decimal(j))));
        continue;
      }
      Monomial m(j + 2, 0);
      m[j + 1] = 1;
      r += monomial(std::move(m), GaussianRational(a.coords()[j]));
    }
    return r;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
  bool is_one() const { return is_constant() && !terms_.empty() && terms_.begin()->second == GaussianRational(1); }

  GaussianRational constant() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? GaussianRational{} : it->second;
  }

  const std::map<Monomial, GaussianRational>& terms() const { return terms_; }

  ExactCoeff& operator+=(const ExactCoeff& b) {
    for (const auto& [m, c] : b.terms_) {
      auto [it, inserted] = terms_.emplace(m, c);
      if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
      }
    }
    return *this;
  }
  friend ExactCoeff operator+(ExactCoeff a, const ExactCoeff& b) { return a += b; }
  ExactCoeff operator-() const {
    ExactCoeff r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  friend ExactCoeff operator-(ExactCoeff a, const ExactCoeff& b) { return a += -b; }

  friend ExactCoeff operator*(const ExactCoeff& a, const ExactCoeff& b) {
    ExactCoeff r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m(std::max(ma.size(), mb.size()), 0);
        for (std::size_t i = 0; i < ma.size(); ++i) m[i] += ma[i];
        for (std::size_t i = 0; i < mb.size(); ++i) m[i] += mb[i];
        r += monomial(std::move(m), ca * cb);
      }
    return r;
  }
  ExactCoeff& operator*=(const ExactCoeff& b) { return *this = *this * b; }

  /// Multiplicative inverse; only constants are invertible in this ring.
  ExactCoeff inverse() const {
    if (!is_constant() || is_zero())
      throw InputError("exact coefficient " + to_string() + " is not an invertible constant");
    return ExactCoeff(constant().inverse());
  }

  /// Exact division by tau; every monomial must carry a factor of tau.
  ExactCoeff divided_by_tau() const {
    ExactCoeff r;
    for (const auto& [m, c] : terms_) {
      if (m.empty() || m[0] == 0) throw InputError("coefficient " + to_string() + " is not divisible by 2pi");
      Monomial q = m;
      --q[0];
      r += monomial(std::move(q), c);
    }
    return r;
  }

  std::complex<double> numeric(const FrequencyBasis& basis) const {
    static const HighPrec two_pi = 2 * boost::math::constants::pi<HighPrec>();
    HighPrec re = 0, im = 0;
    for (const auto& [m, c] : terms_) {
      HighPrec w = 1;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (i > basis.size()) throw InputError("coefficient uses a symbol outside the basis");
        const HighPrec& base = i == 0 ? two_pi : basis.value(i - 1);
        w *= pow(base, static_cast<int>(m[i]));
      }
      re += w * to_highprec(c.re);
      im += w * to_highprec(c.im);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
      std::string factors;
      for (std::size_t i = 0; i < m.size(); ++i)
        for (unsigned k = 0; k < m[i]; ++k) factors += i == 0 ? "*2pi" : "*b" + std::to_string(i);
      if (!s.empty()) s += " + ";
      if (!factors.empty() && c == GaussianRational(1))
        s += factors.substr(1);
      else if (!factors.empty() && c == GaussianRational(-1))
        s += "-" + factors.substr(1);
      else
        s += gkmean::to_string(c) + factors;
    }
    return s;
  }

  friend bool operator==(const ExactCoeff& a, const ExactCoeff& b) { return a.terms_ == b.terms_; }

 private:
  static void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
  }

  std::map<Monomial, GaussianRational> terms_;
};

inline std::string to_string(const ExactCoeff& c) { return c.to_string(); }

using FloatCoeff = std::complex<double>;

/// Per-mode operations the exponential-sum algebra needs from its coefficients.
template <class C>
struct coeff_traits;

template <>
struct coeff_traits<FloatCoeff> {
  static constexpr const char* mode_name = "float";
  static FloatCoeff zero() { return {0.0, 0.0}; }
  static FloatCoeff one() { return {1.0, 0.0}; }
  static bool is_zero(const FloatCoeff& c) { return c == zero(); }
  static bool is_one(const FloatCoeff& c) { return c == one(); }
  static FloatCoeff inverse(const FloatCoeff& c) {
    if (is_zero(c)) throw InputError("division by the zero coefficient");
    return one() / c;
  }
  /// 2*pi*alpha, the factor d/dz brings down from exp(2*pi*alpha*z).
  static FloatCoeff derivative_factor(const Frequency& a, const FrequencyBasis&) {
    return {2.0 * std::numbers::pi * a.to_double(), 0.0};
  }
  static FloatCoeff divided_by_tau(const FloatCoeff& c) { return c / (2.0 * std::numbers::pi); }
  static FloatCoeff numeric(const FloatCoeff& c, const FrequencyBasis&) { return c; }
};

template <>
struct coeff_traits<ExactCoeff> {
  static constexpr const char* mode_name = "exact";
  static ExactCoeff zero() { return {}; }
  static ExactCoeff one() { return ExactCoeff(1); }
  static bool is_zero(const ExactCoeff& c) { return c.is_zero(); }
  static bool is_one(const ExactCoeff& c) { return c.is_one(); }
  static ExactCoeff inverse(const ExactCoeff& c) { return c.inverse(); }
  static ExactCoeff derivative_factor(const Frequency& a, const FrequencyBasis& basis) {
    return ExactCoeff::tau() * ExactCoeff::linear_form(a, basis);
  }
  static ExactCoeff divided_by_tau(const ExactCoeff& c) { return c.divided_by_tau(); }
  static FloatCoeff numeric(const ExactCoeff& c, const FrequencyBasis& basis) { return c.numeric(basis); }
};

template <class C>
concept Coefficient = requires(const C& a, const C& b) {
  { coeff_traits<C>::zero() } -> std::convertible_to<C>;
  { a + b } -> std::convertible_to<C>;
  { a * b } -> std::convertible_to<C>;
  { -a } -> std::convertible_to<C>;
};

}  // namespace gkmean

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"
#include "gkmean/gkformula.hpp"

namespace gkmean {

/// sum_k c_k w^k over integer exponents k (negative allowed).
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  LaurentPolynomial(std::initializer_list<std::pair<const int, std::complex<double>>> terms) {
    for (const auto& [k, c] : terms) add(k, c);
  }

  void add(int k, std::complex<double> c) {
    auto& slot = terms_[k];
    slot += c;
    if (slot == std::complex<double>{}) terms_.erase(k);
  }

  const std::map<int, std::complex<double>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int low() const { return nonzero().terms_.begin()->first; }
  int high() const { return nonzero().terms_.rbegin()->first; }

  std::complex<double> operator()(std::complex<double> w) const {
    std::complex<double> acc{};
    for (const auto& [k, c] : terms_) acc += c * std::pow(w, k);
    return acc;
  }

 private:
  const LaurentPolynomial& nonzero() const {
    if (terms_.empty()) throw InputError("the zero Laurent polynomial has no extreme exponent");
    return *this;
  }

  std::map<int, std::complex<double>> terms_;
};

struct Root {
  std::complex<double> location;
  int multiplicity = 1;
};

struct RootSolverConfig {
  int max_iterations = 500;
  double residual_tol = 1e-12;
  double cluster_tol = 1e-7;
};

/// Roots of p in C \ {0} with multiplicities; total multiplicity high() - low().
///
/// Weierstrass (Durand-Kerner) simultaneous iteration on the ordinary polynomial
/// w^{-low} p(w), then approximations closer than `cluster_tol` (relative) are
/// merged into one root whose location is the cluster centroid.
inline std::vector<Root> roots_nonzero(const LaurentPolynomial& p, const RootSolverConfig& cfg = {}) {
  if (p.is_zero()) throw InputError("roots of the zero polynomial are undefined");
  const int lo = p.low();
  const int degree = p.high() - lo;
  if (degree == 0) return {};

  std::vector<std::complex<double>> a(degree + 1);
  for (const auto& [k, c] : p.terms()) a[k - lo] = c;
  const std::complex<double> lead = a[degree];
  for (auto& c : a) c /= lead;

  auto horner = [&](std::complex<double> w) {
    std::complex<double> v = a[degree];
    for (int k = degree - 1; k >= 0; --k) v = v * w + a[k];
    return v;
  };
  auto magnitude = [&](double r) {
    double v = std::abs(a[degree]);
    for (int k = degree - 1; k >= 0; --k) v = v * r + std::abs(a[k]);
    return v;
  };

  std::vector<std::complex<double>> z(degree);
  const double radius = std::pow(std::abs(a[0]), 1.0 / degree);
  for (int i = 0; i < degree; ++i)
    z[i] = std::polar(radius, 2.0 * std::numbers::pi * i / degree + 0.4);

  const double tol = cfg.residual_tol * (1.0 + std::abs(lead)) / std::abs(lead);
  bool converged = false;
  for (int it = 0; it < cfg.max_iterations && !converged; ++it) {
    double max_step = 0.0;
    for (int i = 0; i < degree; ++i) {
      std::complex<double> denom{1.0, 0.0};
      for (int j = 0; j < degree; ++j)
        if (j != i) denom *= z[i] - z[j];
      if (denom == std::complex<double>{}) denom = {1e-300, 0.0};
      const std::complex<double> step = horner(z[i]) / denom;
      z[i] -= step;
      max_step = std::max(max_step, std::abs(step) / (1.0 + std::abs(z[i])));
    }
    converged = max_step < 1e-15;
    if (!converged && max_step < 1e-9) {
      converged = true;
      for (int i = 0; i < degree && converged; ++i)
        converged = std::abs(horner(z[i])) <= tol * magnitude(std::abs(z[i]));
    }
  }
  if (!converged) {
    for (int i = 0; i < degree; ++i)
      if (!(std::abs(horner(z[i])) <= 1e3 * tol * magnitude(std::abs(z[i]))))
        throw NumericalError("simultaneous root iteration did not converge");
  }

  // Union-find clustering of near-coincident approximations.
  std::vector<int> parent(degree);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < degree; ++i)
    for (int j = i + 1; j < degree; ++j)
      if (std::abs(z[i] - z[j]) <= cfg.cluster_tol * std::max(1.0, std::abs(z[i]))) parent[find(i)] = find(j);

  std::map<int, Root> clusters;
  for (int i = 0; i < degree; ++i) {
    auto [it, fresh] = clusters.try_emplace(find(i), Root{z[i], 1});
    if (!fresh) {
      it->second.location += z[i];
      ++it->second.multiplicity;
    }
  }
  std::vector<Root> out;
  for (auto& [_, r] : clusters) {
    r.location /= static_cast<double>(r.multiplicity);
    out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const Root& x, const Root& y) {
    if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
    return x.location.imag() < y.location.imag();
  });
  return out;
}

/// sum over nonzero roots w of f (with multiplicity) of g(w).
inline std::complex<double> sum_over_roots(const LaurentPolynomial& f, const LaurentPolynomial& g,
                                           const RootSolverConfig& cfg = {}) {
  std::complex<double> acc{};
  for (const auto& r : roots_nonzero(f, cfg)) acc += static_cast<double>(r.multiplicity) * g(r.location);
  return acc;
}

namespace detail {

inline FloatSum laurent_to_sum(const LaurentPolynomial& p) {
  std::vector<ExpTerm<FloatCoeff>> raw;
  for (const auto& [k, c] : p.terms()) raw.push_back({c, Frequency::rational(k)});
  return normalize(std::move(raw), FrequencyBasis::unit());
}

}  // namespace detail

/// A_n - A_1 where A_k is the 1/w coefficient of g f'/f expanded at the
/// lowest (k = 1) or highest (k = n) term of f.
///
/// Multiplying by w turns the 1/w coefficient into a constant term, and
/// w f'(w) has the same exponents as f, so the exponential-sum engine is
/// reused as is with integer frequencies.
inline std::complex<double> residue_formula_sum(const LaurentPolynomial& f, const LaurentPolynomial& g) {
  if (f.is_zero()) throw InputError("f must be a non-zero Laurent polynomial");
  LaurentPolynomial wdf;
  for (const auto& [k, c] : f.terms())
    if (k != 0) wdf.add(k, static_cast<double>(k) * c);
  const FloatSum fs = detail::laurent_to_sum(f);
  const FloatSum numerator = multiply(detail::laurent_to_sum(g), detail::laurent_to_sum(wdf));

  auto coefficient = [&](End end) {
    const auto& ext = fs.extreme(end);
    const FloatSum product = numerator.scaled(FloatCoeff(1.0) / ext.coeff).shifted(-ext.freq);
    return constant_term_of_product(product, divide_by_extreme_term(fs, end), end);
  };
  return coefficient(End::Last) - coefficient(End::First);
}

/// Value of a frequency as an exact rational, when it only uses basis
/// elements that are integers.
inline std::optional<Rational> rational_value(const Frequency& a, const FrequencyBasis& basis) {
  Rational v = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a.coords()[j] == 0) continue;
    if (!basis.is_integer_element(j)) return std::nullopt;
    v += a.coords()[j] * parse_rational(basis.decimal(j));
  }
  return v;
}

/// Laurent pair obtained from rational-frequency sums by w = exp(2 pi z / q),
/// q the least common denominator of all frequencies.
struct SubstitutedPair {
  LaurentPolynomial f;
  LaurentPolynomial g;
  long q = 1;
};

template <Coefficient C>
SubstitutedPair substitute_rational(const ExponentialSum<C>& f, const ExponentialSum<C>& g) {
  if (f.is_zero()) throw InputError("f must be a non-zero exponential sum");
  ExponentialSum<C>::require_same_basis(f, g);
  const FrequencyBasis& basis = *f.basis();

  std::vector<std::pair<Rational, FloatCoeff>> fr, gr;
  Integer q = 1;
  auto collect = [&](const ExponentialSum<C>& s, std::vector<std::pair<Rational, FloatCoeff>>& out) {
    for (const auto& t : s.terms()) {
      auto v = rational_value(t.freq, basis);
      if (!v) throw InputError("frequency " + to_string(t.freq) + " is not rational");
      mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), v->get_den().get_mpz_t());
      out.emplace_back(*v, coeff_traits<C>::numeric(t.coeff, basis));
    }
  };
  collect(f, fr);
  collect(g, gr);
  if (!q.fits_slong_p()) throw InputError("common denominator is too large");

  auto to_laurent = [&](const std::vector<std::pair<Rational, FloatCoeff>>& in) {
    LaurentPolynomial p;
    for (const auto& [v, c] : in) {
      Rational e = v * Rational(q);
      if (!e.get_num().fits_sint_p() || std::abs(e.get_num().get_si()) > 100000)
        throw InputError("substituted exponent is too large");
      p.add(static_cast<int>(e.get_num().get_si()), c);
    }
    return p;
  };
  return {to_laurent(fr), to_laurent(gr), q.get_si()};
}

/// Mean value for rational frequencies: each root of F(w) lifts to a vertical
/// progression of zeros of f with density 1/q per unit height.
template <Coefficient C>
std::complex<double> mean_via_substitution(const ExponentialSum<C>& f, const ExponentialSum<C>& g,
                                           const RootSolverConfig& cfg = {}) {
  const SubstitutedPair p = substitute_rational(f, g);
  return sum_over_roots(p.f, p.g, cfg) / static_cast<double>(p.q);
}

}  // namespace gkmean

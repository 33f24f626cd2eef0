#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/rational.hpp"

namespace gkmean {

/// Working precision for frequency values (about 50 decimal digits).
using HighPrec = boost::multiprecision::cpp_bin_float_50;

inline HighPrec to_highprec(const Rational& q) {
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p())
    return HighPrec(q.get_num().get_si()) / HighPrec(q.get_den().get_si());
  return HighPrec(q.get_num().get_str()) / HighPrec(q.get_den().get_str());
}

/// Ordered list of positive reals that frequencies are expressed over.
///
/// Each value is given as a decimal string; the caller asserts that the values
/// are linearly independent over the rationals. That assertion cannot be checked
/// from finite input, so a violation surfaces only as a numeric tie between two
/// distinct frequency vectors, which `compare` reports as an error.
class FrequencyBasis {
 public:
  explicit FrequencyBasis(std::vector<std::string> decimals) : decimals_(std::move(decimals)) {
    if (decimals_.empty()) throw InputError("frequency basis must be non-empty");
    values_.reserve(decimals_.size());
    for (const auto& d : decimals_) {
      HighPrec v;
      try {
        v = to_highprec(parse_rational(d));
      } catch (const InputError&) {
        throw InputError("basis value '" + d + "' is not a decimal number");
      }
      if (v <= 0) throw InputError("basis value '" + d + "' must be strictly positive");
      values_.push_back(v);
    }
  }

  static std::shared_ptr<const FrequencyBasis> make(std::vector<std::string> decimals) {
    return std::make_shared<const FrequencyBasis>(std::move(decimals));
  }

  /// The default basis {1}: every frequency is a plain rational.
  static std::shared_ptr<const FrequencyBasis> unit() {
    static const auto basis = make({"1"});
    return basis;
  }

  std::size_t size() const { return decimals_.size(); }
  const std::string& decimal(std::size_t i) const { return decimals_.at(i); }
  const HighPrec& value(std::size_t i) const { return values_.at(i); }
  const std::vector<std::string>& decimals() const { return decimals_; }

  /// Basis element is an exact integer (so rational coordinates on it stay rational).
  bool is_integer_element(std::size_t i) const { return is_integer_literal(decimals_.at(i)); }

  friend bool operator==(const FrequencyBasis& a, const FrequencyBasis& b) {
    return a.decimals_ == b.decimals_;
  }

 private:
  std::vector<std::string> decimals_;
  std::vector<HighPrec> values_;
};

using BasisPtr = std::shared_ptr<const FrequencyBasis>;

inline bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  return a == b || (a && b && *a == *b);
}

/// A real frequency sum_j coords[j] * basis[j] with exact rational coordinates.
/// The numeric value is cached at construction for ordering and evaluation.
class Frequency {
 public:
  Frequency() = default;

  Frequency(std::vector<Rational> coords, const FrequencyBasis& basis) : coords_(std::move(coords)) {
    if (coords_.size() != basis.size())
      throw InputError("frequency has " + std::to_string(coords_.size()) +
                       " coordinates but the basis has " + std::to_string(basis.size()));
    value_ = 0;
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      coords_[j].canonicalize();
      if (coords_[j] != 0) value_ += to_highprec(coords_[j]) * basis.value(j);
    }
  }

  static Frequency zero(const FrequencyBasis& basis) {
    return Frequency(std::vector<Rational>(basis.size()), basis);
  }

  /// Single-coordinate convenience for the default basis.
  static Frequency rational(const Rational& q) { return Frequency({q}, *FrequencyBasis::unit()); }

  const std::vector<Rational>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }
  const HighPrec& value() const { return value_; }
  double to_double() const { return static_cast<double>(value_); }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  Frequency operator-() const {
    Frequency r = *this;
    for (auto& c : r.coords_) c = -c;
    r.value_ = -value_;
    return r;
  }

  friend Frequency operator+(const Frequency& a, const Frequency& b) {
    check_lengths(a, b);
    Frequency r = a;
    for (std::size_t j = 0; j < r.coords_.size(); ++j) r.coords_[j] += b.coords_[j];
    r.value_ = a.value_ + b.value_;
    return r;
  }

  friend Frequency operator-(const Frequency& a, const Frequency& b) { return a + (-b); }

  Frequency scaled(long m) const {
    Frequency r = *this;
    for (auto& c : r.coords_) c *= m;
    r.value_ = value_ * m;
    return r;
  }

  friend bool operator==(const Frequency& a, const Frequency& b) { return a.coords_ == b.coords_; }

 private:
  static void check_lengths(const Frequency& a, const Frequency& b) {
    if (a.coords_.size() != b.coords_.size())
      throw InputError("frequency vectors of different lengths");
  }

  std::vector<Rational> coords_;
  HighPrec value_ = 0;
};

/// Three-way comparison of numeric frequency values.
///
/// Equal vectors compare equal exactly. Distinct vectors whose values agree to
/// working precision mean the basis is not independent: that is a hard error,
/// never a silent merge.
inline int compare(const Frequency& a, const Frequency& b) {
  if (a.size() != b.size()) throw InputError("frequency vectors of different lengths");
  if (a == b) return 0;
  if (a.size() == 1) return cmp(a.coords()[0], b.coords()[0]) < 0 ? -1 : 1;
  const HighPrec diff = a.value() - b.value();
  const HighPrec mag = 1 + abs(a.value()) + abs(b.value());
  if (abs(diff) <= mag * HighPrec("1e-40"))
    throw InputError("distinct frequency vectors are numerically equal; the declared basis is not "
                     "linearly independent over the rationals");
  return diff < 0 ? -1 : 1;
}

/// Sign of the numeric value, exact for the zero vector; same tie rule as `compare`.
inline int sign(const Frequency& a) {
  if (a.is_zero()) return 0;
  if (a.size() == 1) return sgn(a.coords()[0]) < 0 ? -1 : 1;
  if (abs(a.value()) <= HighPrec("1e-40"))
    throw InputError("non-zero frequency vector has numeric value zero; the declared basis is not "
                     "linearly independent over the rationals");
  return a.value() < 0 ? -1 : 1;
}

inline std::string to_string(const Frequency& a) {
  if (a.size() == 1) return to_string(a.coords()[0]);
  std::string s = "[";
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j) s += ", ";
    s += to_string(a.coords()[j]);
  }
  return s + "]";
}

}  // namespace gkmean

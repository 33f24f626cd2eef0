#pragma once

#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"
#include "gkmean/rational.hpp"

namespace gkmean {

enum class CoeffMode { Float, Exact };

/// One {coeff, freq} entry of a problem file.
struct ProblemTerm {
  Rational re = 0;  ///< exact coefficient (float-mode inputs are converted exactly from double)
  Rational im = 0;
  std::vector<Rational> freq;
};

/// Self-describing problem: basis, f, optional g (default the constant 1), mode.
///
///   {"basis": ["1", "1.41421356237309504880168872420969807857"],
///    "mode": "exact",
///    "f": [{"coeff": [1, 0], "freq": ["0", "0"]}, {"coeff": ["1/2", 0], "freq": ["0", "1"]}],
///    "g": [{"coeff": [1, 0], "freq": ["1", "0"]}]}
///
/// A frequency may be a single rational string (or integer) when the basis has
/// one element. Coefficients are [re, im] pairs of numbers or rational strings.
struct ProblemFile {
  std::vector<std::string> basis{"1"};
  CoeffMode mode = CoeffMode::Float;
  std::vector<ProblemTerm> f;
  std::optional<std::vector<ProblemTerm>> g;

  static ProblemFile from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("problem file must be a JSON object");
    for (const auto& [key, _] : j.items())
      if (key != "basis" && key != "mode" && key != "f" && key != "g")
        throw InputError("unknown problem field '" + key + "'");

    ProblemFile p;
    if (j.contains("basis")) {
      const auto& b = j.at("basis");
      if (!b.is_array() || b.empty()) throw InputError("'basis' must be a non-empty array of decimal strings");
      p.basis.clear();
      for (const auto& v : b) {
        if (v.is_string())
          p.basis.push_back(v.get<std::string>());
        else if (v.is_number_integer())
          p.basis.push_back(std::to_string(v.get<long long>()));
        else
          throw InputError("basis values must be decimal strings");
      }
    }
    if (j.contains("mode")) {
      const auto& m = j.at("mode");
      if (m == "exact")
        p.mode = CoeffMode::Exact;
      else if (m == "float")
        p.mode = CoeffMode::Float;
      else
        throw InputError("'mode' must be \"exact\" or \"float\"");
    }
    if (!j.contains("f")) throw InputError("problem file has no 'f'");
    p.f = parse_terms(j.at("f"), p.basis.size(), "f");
    if (j.contains("g")) p.g = parse_terms(j.at("g"), p.basis.size(), "g");
    return p;
  }

  static ProblemFile parse(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("problem file is not valid JSON: ") + e.what());
    }
    return from_json(j);
  }

  static ProblemFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["basis"] = basis;
    j["mode"] = mode == CoeffMode::Exact ? "exact" : "float";
    j["f"] = terms_json(f);
    if (g) j["g"] = terms_json(*g);
    return j;
  }

  BasisPtr make_basis() const { return FrequencyBasis::make(basis); }

  template <Coefficient C>
  std::pair<ExponentialSum<C>, ExponentialSum<C>> build() const {
    const BasisPtr b = make_basis();
    ExponentialSum<C> fs = build_sum<C>(f, b);
    if (fs.is_zero()) throw InputError("f is the zero exponential sum");
    ExponentialSum<C> gs = g ? build_sum<C>(*g, b) : ExponentialSum<C>::constant(coeff_traits<C>::one(), b);
    return {std::move(fs), std::move(gs)};
  }

 private:
  static Rational parse_number(const nlohmann::json& v) {
    if (v.is_number_integer()) return Rational(Integer(v.dump()), 1);
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw InputError("non-finite coefficient");
      return Rational(d);
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InputError("coefficient parts must be numbers or rational strings");
  }

  static std::vector<ProblemTerm> parse_terms(const nlohmann::json& arr, std::size_t dim, const std::string& what) {
    if (!arr.is_array()) throw InputError("'" + what + "' must be an array of terms");
    std::vector<ProblemTerm> out;
    for (const auto& t : arr) {
      if (!t.is_object() || !t.contains("coeff") || !t.contains("freq"))
        throw InputError("each term of '" + what + "' needs 'coeff' and 'freq'");
      for (const auto& [key, _] : t.items())
        if (key != "coeff" && key != "freq") throw InputError("unknown term field '" + key + "'");
      ProblemTerm pt;
      const auto& c = t.at("coeff");
      if (c.is_array()) {
        if (c.size() != 2) throw InputError("'coeff' must be [re, im]");
        pt.re = parse_number(c[0]);
        pt.im = parse_number(c[1]);
      } else {
        pt.re = parse_number(c);
      }
      const auto& fr = t.at("freq");
      if (fr.is_array()) {
        for (const auto& x : fr) pt.freq.push_back(parse_freq_coord(x));
      } else {
        if (dim != 1) throw InputError("frequency must be a vector of " + std::to_string(dim) + " rationals");
        pt.freq.push_back(parse_freq_coord(fr));
      }
      if (pt.freq.size() != dim)
        throw InputError("frequency has " + std::to_string(pt.freq.size()) + " coordinates, basis has " +
                         std::to_string(dim));
      out.push_back(std::move(pt));
    }
    return out;
  }

  static Rational parse_freq_coord(const nlohmann::json& x) {
    if (x.is_string()) return parse_rational(x.get<std::string>());
    if (x.is_number_integer()) return Rational(Integer(x.dump()), 1);
    throw InputError("frequency coordinates must be rational strings or integers");
  }

  nlohmann::json terms_json(const std::vector<ProblemTerm>& terms) const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms) {
      nlohmann::json jt;
      if (mode == CoeffMode::Exact)
        jt["coeff"] = nlohmann::json::array({to_string(t.re), to_string(t.im)});
      else
        jt["coeff"] = nlohmann::json::array({t.re.get_d(), t.im.get_d()});
      if (t.freq.size() == 1) {
        jt["freq"] = to_string(t.freq[0]);
      } else {
        jt["freq"] = nlohmann::json::array();
        for (const auto& q : t.freq) jt["freq"].push_back(to_string(q));
      }
      arr.push_back(jt);
    }
    return arr;
  }

  template <Coefficient C>
  static ExponentialSum<C> build_sum(const std::vector<ProblemTerm>& terms, const BasisPtr& b) {
    std::vector<ExpTerm<C>> raw;
    for (const auto& t : terms) {
      C c;
      if constexpr (std::is_same_v<C, ExactCoeff>)
        c = ExactCoeff(t.re, t.im);
      else
        c = FloatCoeff(t.re.get_d(), t.im.get_d());
      raw.push_back({std::move(c), Frequency(t.freq, *b)});
    }
    return normalize(std::move(raw), b);
  }
};

}  // namespace gkmean

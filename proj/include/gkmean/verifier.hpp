#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"
#include "gkmean/gkformula.hpp"
#include "gkmean/zerofinder.hpp"

namespace gkmean {

/// sum over zeros of multiplicity * g(location).
template <Coefficient C>
std::complex<double> weighted_sum(const std::vector<Zero>& zeros, const ExponentialSum<C>& g) {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& z : zeros) acc += static_cast<double>(z.multiplicity) * evaluate(g, z.location);
  return acc;
}

struct EmpiricalMean {
  std::complex<double> value;  ///< S(R') / 2R'
  std::complex<double> weighted_sum;
  ZeroSearch search;

  double R_used() const { return search.ordinate; }
  int count() const { return search.total_multiplicity(); }
};

/// S(R')/2R' over the zeros found below the safe ordinate R' nearest R.
template <Coefficient C>
EmpiricalMean empirical_mean(const ExponentialSum<C>& f, const ExponentialSum<C>& g, double R,
                             const QuadratureConfig& cfg = {}) {
  ExponentialSum<C>::require_same_basis(f, g);
  EmpiricalMean out;
  out.search = find_zeros(f, R, cfg);
  out.weighted_sum = weighted_sum(out.search.zeros, g);
  out.value = out.weighted_sum / (2.0 * out.search.ordinate);
  return out;
}

/// True when every closed window of height 0.999/span over the imaginary parts
/// holds fewer than n zeros, counted with multiplicity.
inline bool fewnomial_check(const std::vector<Zero>& zeros, int n, double span) {
  if (!(span > 0)) throw InputError("fewnomial check needs a positive frequency span");
  std::vector<std::pair<double, int>> pts;
  pts.reserve(zeros.size());
  for (const auto& z : zeros) pts.emplace_back(z.location.imag(), z.multiplicity);
  std::sort(pts.begin(), pts.end());
  const double h = 0.999 / span;
  int window = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < pts.size(); ++lo) {
    while (hi < pts.size() && pts[hi].first <= pts[lo].first + h) window += pts[hi++].second;
    if (window >= n) return false;
    window -= pts[lo].second;
  }
  return true;
}

struct ConvergenceRow {
  double R = 0;
  double R_used = 0;
  int count = 0;
  std::complex<double> weighted_sum;
  std::complex<double> empirical_mean;
  double abs_error = 0;
  bool fewnomial_ok = true;
  bool conserved = true;
};

struct ConvergenceReport {
  std::complex<double> symbolic_mean;
  std::vector<ConvergenceRow> rows;
  double tolerance = 0.05;
  double median_ratio = 0;
  bool pass = false;
};

/// Median of error(R_i)/error(R_{i+1}). Errors equal to 1e-9 relative count
/// as a tie (ratio one); a zero denominator otherwise counts as infinite.
inline double median_error_ratio(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = rows[i].abs_error, b = rows[i + 1].abs_error;
    if (std::abs(a - b) <= 1e-9 * std::max(a, b))
      ratios.push_back(1.0);
    else if (b == 0.0)
      ratios.push_back(std::numeric_limits<double>::infinity());
    else
      ratios.push_back(a / b);
  }
  if (ratios.empty()) return 1.0;
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size() / 2;
  return ratios.size() % 2 ? ratios[m] : 0.5 * (ratios[m - 1] + ratios[m]);
}

template <Coefficient C>
ConvergenceReport convergence_report(const ExponentialSum<C>& f, const ExponentialSum<C>& g,
                                     const std::vector<double>& R_list, const QuadratureConfig& cfg = {},
                                     double tolerance = 0.05) {
  if (R_list.size() < 2) throw InputError("convergence report needs at least two R values");
  for (std::size_t i = 0; i + 1 < R_list.size(); ++i)
    if (!(R_list[i] < R_list[i + 1])) throw InputError("R values must be strictly increasing");
  if (f.size() < 2) throw InputError("f needs at least two terms");

  ConvergenceReport rep;
  rep.tolerance = tolerance;
  rep.symbolic_mean = mean_value(f, g).numeric_mean();
  const double span = mean_zero_count(f);
  for (double R : R_list) {
    const EmpiricalMean em = empirical_mean(f, g, R, cfg);
    ConvergenceRow row;
    row.R = R;
    row.R_used = em.R_used();
    row.count = em.count();
    row.weighted_sum = em.weighted_sum;
    row.empirical_mean = em.value;
    row.abs_error = std::abs(em.value - rep.symbolic_mean);
    row.fewnomial_ok = fewnomial_check(em.search.zeros, static_cast<int>(f.size()), span);
    row.conserved = em.count() == em.search.outer_winding;
    rep.rows.push_back(row);
  }
  rep.median_ratio = median_error_ratio(rep.rows);
  rep.pass = rep.rows.back().abs_error < tolerance && rep.median_ratio >= 1.0;
  return rep;
}

}  // namespace gkmean

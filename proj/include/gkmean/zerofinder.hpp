#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gkmean/errors.hpp"
#include "gkmean/exponential_sum.hpp"

namespace gkmean {

/// Axis-aligned rectangle in the complex plane.
struct Rect {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

  Rect() = default;
  Rect(double r0, double r1, double i0, double i1) : re_min(r0), re_max(r1), im_min(i0), im_max(i1) {
    if (!(re_min < re_max) || !(im_min < im_max)) throw InputError("degenerate rectangle");
  }

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  double diameter() const { return std::hypot(width(), height()); }
  std::complex<double> center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
  bool contains(std::complex<double> z, double slack = 0.0) const {
    return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
           z.imag() <= im_max + slack;
  }

  static Rect around(std::complex<double> c, double r) {
    return {c.real() - r, c.real() + r, c.imag() - r, c.imag() + r};
  }
};

/// A located zero of f.
struct Zero {
  std::complex<double> location;
  int multiplicity = 1;

  friend bool operator==(const Zero&, const Zero&) = default;
};

struct QuadratureConfig {
  int max_subdivision_depth = 64;
  int edge_samples_initial = 8;        ///< Gauss panels per edge on the first pass
  double winding_residual_tol = 0.25;  ///< max distance of the raw winding from an integer
  double newton_tol = 1e-12;           ///< relative residual |f| / sum |c_i e^{2 pi alpha_i x}|
  std::uint64_t jitter_seed = 0;

  int max_panels = 1 << 14;
  double quadrature_tol = 1e-6;  ///< successive-doubling drift, in winding units
  double edge_clearance = 1e-3;  ///< min |f/f'| on the contour, relative to the shorter side
  double box_diameter = 1e-3;    ///< boxes below this size are refined by Newton
  double multiplicity_radius = 1e-4;
  double strip_margin = 0.5;  ///< tail-sum margin for the strip bound
};

/// f and f' evaluated together from precomputed 2*pi*alpha_i.
class NumericSum {
 public:
  struct Value {
    std::complex<double> f;
    std::complex<double> df;
    double scale;  ///< sum |c_i| e^{2 pi alpha_i Re z}
  };

  NumericSum() = default;
  template <Coefficient C>
  explicit NumericSum(const ExponentialSum<C>& s) {
    const double two_pi = 2.0 * std::numbers::pi;
    for (const auto& t : s.terms()) {
      rate_.push_back(two_pi * t.freq.to_double());
      coeff_.push_back(coeff_traits<C>::numeric(t.coeff, *s.basis()));
    }
  }

  Value operator()(std::complex<double> z) const {
    Value v{{0.0, 0.0}, {0.0, 0.0}, 0.0};
    for (std::size_t i = 0; i < rate_.size(); ++i) {
      const std::complex<double> e = coeff_[i] * std::exp(rate_[i] * z);
      v.f += e;
      v.df += rate_[i] * e;
      v.scale += std::abs(coeff_[i]) * std::exp(rate_[i] * z.real());
    }
    return v;
  }

  std::size_t size() const { return rate_.size(); }

 private:
  std::vector<double> rate_;
  std::vector<std::complex<double>> coeff_;
};

namespace detail {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct EdgeSample {
  std::complex<double> integral;
  double min_distance;  ///< min |f/f'| over the nodes
};

inline EdgeSample integrate_edge(const NumericSum& f, std::complex<double> a, std::complex<double> b, int panels) {
  const std::complex<double> h = (b - a) / static_cast<double>(panels);
  EdgeSample out{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
  for (int p = 0; p < panels; ++p) {
    const std::complex<double> left = a + static_cast<double>(p) * h;
    std::complex<double> panel{0.0, 0.0};
    for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
      const std::complex<double> z = left + 0.5 * (1.0 + kGaussNodes[k]) * h;
      const auto v = f(z);
      if (v.f == std::complex<double>{} || !std::isfinite(v.f.real()) || !std::isfinite(v.f.imag()) ||
          !std::isfinite(v.df.real()) || !std::isfinite(v.df.imag()))
        throw ContourOnZero("non-finite logarithmic derivative on the contour");
      const double df = std::abs(v.df);
      if (df > 0) out.min_distance = std::min(out.min_distance, std::abs(v.f) / df);
      panel += kGaussWeights[k] * (v.df / v.f);
    }
    out.integral += 0.5 * h * panel;
  }
  return out;
}

}  // namespace detail

/// Raw argument-principle integral (1/2 pi i) \oint f'/f dz before rounding.
struct WindingEstimate {
  std::complex<double> value;
  int count = 0;
  double residual = 0;
};

inline WindingEstimate winding_estimate(const NumericSum& f, const Rect& rect, const QuadratureConfig& cfg) {
  const std::array<std::complex<double>, 5> corners = {
      std::complex<double>{rect.re_min, rect.im_min}, std::complex<double>{rect.re_max, rect.im_min},
      std::complex<double>{rect.re_max, rect.im_max}, std::complex<double>{rect.re_min, rect.im_max},
      std::complex<double>{rect.re_min, rect.im_min}};
  const double clearance = cfg.edge_clearance * std::min(rect.width(), rect.height());
  const double drift_tol = cfg.quadrature_tol * 2.0 * std::numbers::pi;

  std::complex<double> total{0.0, 0.0};
  for (int e = 0; e < 4; ++e) {
    int panels = std::max(1, cfg.edge_samples_initial);
    auto coarse = detail::integrate_edge(f, corners[e], corners[e + 1], panels);
    if (coarse.min_distance < clearance)
      throw ContourTooClose("a zero lies within the edge clearance of the contour");
    while (true) {
      if (panels * 2 > cfg.max_panels) throw ContourTooClose("edge quadrature did not stabilize");
      panels *= 2;
      auto fine = detail::integrate_edge(f, corners[e], corners[e + 1], panels);
      if (fine.min_distance < clearance)
        throw ContourTooClose("a zero lies within the edge clearance of the contour");
      const bool settled = std::abs(fine.integral - coarse.integral) < drift_tol;
      coarse = fine;
      if (settled) break;
    }
    total += coarse.integral;
  }
  WindingEstimate w;
  w.value = total / std::complex<double>(0.0, 2.0 * std::numbers::pi);
  w.count = static_cast<int>(std::lround(w.value.real()));
  w.residual = std::abs(w.value - std::complex<double>(w.count, 0.0));
  return w;
}

/// Number of zeros inside `rect`, counted with multiplicity.
/// Throws ContourTooClose when the boundary passes too near a zero.
inline int winding_count(const NumericSum& f, const Rect& rect, const QuadratureConfig& cfg = {}) {
  const WindingEstimate w = winding_estimate(f, rect, cfg);
  if (!(w.residual <= cfg.winding_residual_tol))
    throw ContourTooClose("winding integral is not close to an integer (residual " + std::to_string(w.residual) + ")");
  return w.count;
}

template <Coefficient C>
int winding_count(const ExponentialSum<C>& f, const Rect& rect, const QuadratureConfig& cfg = {}) {
  return winding_count(NumericSum(f), rect, cfg);
}

/// Smallest B such that both extreme-term tail sums are at most `margin` on
/// Re z = -B and Re z = B respectively; every zero then has |Re z| < B.
template <Coefficient C>
double strip_bound(const ExponentialSum<C>& f, double margin = 0.5) {
  if (f.size() < 2) throw InputError("strip bound needs at least two terms");
  if (!(margin > 0.0 && margin < 1.0)) throw InputError("margin must lie in (0, 1)");
  const auto& basis = *f.basis();
  const auto& terms = f.terms();
  const std::size_t n = terms.size();
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<double> ratio_first, gap_first, ratio_last, gap_last;
  const double c1 = std::abs(coeff_traits<C>::numeric(terms.front().coeff, basis));
  const double cn = std::abs(coeff_traits<C>::numeric(terms.back().coeff, basis));
  for (std::size_t j = 0; j < n; ++j) {
    const double cj = std::abs(coeff_traits<C>::numeric(terms[j].coeff, basis));
    if (j > 0) {
      ratio_first.push_back(cj / c1);
      gap_first.push_back(static_cast<double>((terms[j].freq - terms.front().freq).value()));
    }
    if (j + 1 < n) {
      ratio_last.push_back(cj / cn);
      gap_last.push_back(static_cast<double>((terms.back().freq - terms[j].freq).value()));
    }
  }
  auto tail = [&](const std::vector<double>& ratio, const std::vector<double>& gap, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) s += ratio[i] * std::exp(-two_pi * b * gap[i]);
    return s;
  };
  auto ok = [&](double b) { return tail(ratio_first, gap_first, b) <= margin && tail(ratio_last, gap_last, b) <= margin; };

  double lo = 0.0, hi = 1.0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("strip bound search diverged");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace detail {

/// min |f| over `samples` equispaced points of the segment Im z = y, |Re z| <= b.
inline double line_min_abs(const NumericSum& f, double y, double b, int samples = 129) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = -b + 2.0 * b * i / (samples - 1);
    m = std::min(m, std::abs(f({x, y}).f));
  }
  return m;
}

/// Grid search for the ordinate in [center - window, center + window] with the
/// largest score, then one local refinement pass. Ties keep the earlier (closer
/// to center) candidate.
template <class Score>
double maximize_ordinate(double center, double window, double lower_limit, const Score& score) {
  constexpr int kCoarse = 20;
  constexpr int kFine = 10;
  double best = center;
  double best_score = score(center);
  const double step = window / kCoarse;
  for (int k = 1; k <= kCoarse; ++k) {
    for (double y : {center - k * step, center + k * step}) {
      if (y <= lower_limit) continue;
      const double s = score(y);
      if (s > best_score) {
        best_score = s;
        best = y;
      }
    }
  }
  const double anchor = best;
  for (int k = 1; k <= kFine; ++k) {
    for (double y : {anchor - k * step / kFine, anchor + k * step / kFine}) {
      if (y <= lower_limit || std::abs(y - center) > window) continue;
      const double s = score(y);
      if (s > best_score) {
        best_score = s;
        best = y;
      }
    }
  }
  return best;
}

template <Coefficient C>
double default_window(const ExponentialSum<C>& f) {
  const double span = static_cast<double>(frequency_span(f).value());
  if (!(span > 0)) throw InputError("ordinate window needs at least two terms");
  return 1.0 / (4.0 * span);
}

}  // namespace detail

/// Ordinate R' within `window` of R (default 1/(4 (alpha_n - alpha_1))) that
/// maximizes the minimum of |f| along Im z = R', |Re z| <= B.
template <Coefficient C>
double safe_ordinate(const ExponentialSum<C>& f, double R, std::optional<double> window = std::nullopt) {
  const double w = window ? *window : detail::default_window(f);
  if (!(w > 0)) throw InputError("ordinate window must be positive");
  const double b = strip_bound(f, 0.5);
  const NumericSum nf(f);
  return detail::maximize_ordinate(R, w, -std::numeric_limits<double>::infinity(),
                                   [&](double y) { return detail::line_min_abs(nf, y, b); });
}

/// Same, scoring the pair of lines Im z = +R' and Im z = -R' together so the
/// counting region is exactly |Im z| < R'.
template <Coefficient C>
double safe_symmetric_ordinate(const ExponentialSum<C>& f, double R, std::optional<double> window = std::nullopt,
                               double margin = 0.5) {
  if (!(R > 0)) throw InputError("R must be positive");
  const double w = window ? *window : detail::default_window(f);
  const double b = strip_bound(f, margin);
  const NumericSum nf(f);
  return detail::maximize_ordinate(R, w, 0.05 * std::min(w, R), [&](double y) {
    return std::min(detail::line_min_abs(nf, y, b), detail::line_min_abs(nf, -y, b));
  });
}

/// All zeros of f in the strip |Re z| < B with |Im z| < R'.
struct ZeroSearch {
  std::vector<Zero> zeros;
  double requested_R = 0;
  double ordinate = 0;  ///< R'
  double strip_bound = 0;
  Rect outer;
  int outer_winding = 0;
  bool partial = false;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& z : zeros) s += z.multiplicity;
    return s;
  }
};

/// Subdivision gave up; `partial` holds what was found before that.
class SubdivisionError : public NumericalError {
 public:
  SubdivisionError(const std::string& what, ZeroSearch partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const ZeroSearch& partial() const { return partial_; }

 private:
  ZeroSearch partial_;
};

namespace detail {

struct Box {
  Rect rect;
  int count;
  int depth;
};

/// Damped Newton from the box center. With `multiplicity` > 1 the step is
/// first tried at full multiplicity, which restores quadratic convergence at
/// a multiple zero.
inline std::optional<std::complex<double>> newton_in_box(const NumericSum& f, const Rect& rect, int multiplicity,
                                                         const QuadratureConfig& cfg) {
  std::complex<double> z = rect.center();
  auto v = f(z);
  // Accepts the first damped step (full multiplicity first, then plain) that
  // decreases |f|.
  auto step_once = [&]() {
    if (v.df == std::complex<double>{}) return false;
    const std::complex<double> step = v.f / v.df;
    for (double factor : {static_cast<double>(multiplicity), 1.0}) {
      double damp = 1.0;
      for (int h = 0; h < 20; ++h, damp *= 0.5) {
        const std::complex<double> trial = z - factor * damp * step;
        const auto tv = f(trial);
        if (std::abs(tv.f) < std::abs(v.f)) {
          z = trial;
          v = tv;
          return true;
        }
      }
      if (multiplicity == 1) break;
    }
    return false;
  };

  for (int it = 0; it < 100; ++it) {
    if (std::abs(v.f) <= cfg.newton_tol * v.scale) {
      for (int polish = 0; polish < 3 && step_once(); ++polish) {
      }
      return z;
    }
    if (!step_once() || !rect.contains(z, rect.diameter())) return std::nullopt;
  }
  return std::nullopt;
}

inline std::optional<Zero> refine_box(const NumericSum& f, const Box& box, const QuadratureConfig& cfg) {
  auto z = newton_in_box(f, box.rect, box.count, cfg);
  if (!z || !box.rect.contains(*z, 1e-12 * (1.0 + std::abs(*z)))) return std::nullopt;
  const double r = std::min(cfg.multiplicity_radius, box.rect.diameter());
  try {
    if (winding_count(f, Rect::around(*z, r), cfg) != box.count) return std::nullopt;
  } catch (const ContourTooClose&) {
    return std::nullopt;
  }
  return Zero{*z, box.count};
}

}  // namespace detail

/// Locates every zero of f with |Re z| < B, |Im z| < R' by recursive bisection
/// with argument-principle counts, then Newton refinement of small boxes.
template <Coefficient C>
ZeroSearch find_zeros(const ExponentialSum<C>& f, double R, const QuadratureConfig& cfg = {}) {
  if (f.size() < 2) throw InputError("find_zeros needs an exponential sum with at least two terms");
  if (!(R > 0)) throw InputError("R must be positive");
  const NumericSum nf(f);

  ZeroSearch out;
  out.requested_R = R;
  out.strip_bound = strip_bound(f, cfg.strip_margin);
  out.ordinate = safe_symmetric_ordinate(f, R, std::nullopt, cfg.strip_margin);

  std::mt19937_64 rng(cfg.jitter_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // The vertical sides are safe by the strip bound; widen slightly if the
  // quadrature still complains.
  double b = out.strip_bound;
  for (int attempt = 0;; ++attempt) {
    try {
      out.outer = Rect(-b, b, -out.ordinate, out.ordinate);
      out.outer_winding = winding_count(nf, out.outer, cfg);
      break;
    } catch (const ContourTooClose&) {
      if (attempt >= 5) throw;
      b *= 1.05;
    }
  }

  std::vector<detail::Box> stack{{out.outer, out.outer_winding, 0}};
  while (!stack.empty()) {
    detail::Box box = stack.back();
    stack.pop_back();
    if (box.count == 0) continue;

    const double diam = box.rect.diameter();
    if (diam < cfg.box_diameter) {
      if (auto z = detail::refine_box(nf, box, cfg)) {
        out.zeros.push_back(*z);
        continue;
      }
      if (diam < 1e-11 * (1.0 + std::abs(box.rect.center()))) {
        out.zeros.push_back({box.rect.center(), box.count});
        continue;
      }
    }
    if (box.depth >= cfg.max_subdivision_depth) {
      out.partial = true;
      std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        return a.location.imag() != b.location.imag() ? a.location.imag() < b.location.imag()
                                                      : a.location.real() < b.location.real();
      });
      throw SubdivisionError("subdivision depth exceeded", out);
    }

    const bool split_re = box.rect.width() > box.rect.height();
    bool split_ok = false;
    for (int attempt = 0; attempt < 16 && !split_ok; ++attempt) {
      const double frac = 0.5 + (0.05 + 0.02 * attempt) * unit(rng);
      Rect lo = box.rect, hi = box.rect;
      if (split_re) {
        const double cut = box.rect.re_min + frac * box.rect.width();
        lo.re_max = cut;
        hi.re_min = cut;
      } else {
        const double cut = box.rect.im_min + frac * box.rect.height();
        lo.im_max = cut;
        hi.im_min = cut;
      }
      try {
        const int c_lo = winding_count(nf, lo, cfg);
        const int c_hi = winding_count(nf, hi, cfg);
        if (c_lo < 0 || c_hi < 0 || c_lo + c_hi != box.count) continue;
        stack.push_back({hi, c_hi, box.depth + 1});
        stack.push_back({lo, c_lo, box.depth + 1});
        split_ok = true;
      } catch (const ContourTooClose&) {
      }
    }
    if (!split_ok) {
      out.partial = true;
      throw SubdivisionError("could not find a clean cut line for a box", out);
    }
  }

  std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
    return a.location.imag() != b.location.imag() ? a.location.imag() < b.location.imag()
                                                  : a.location.real() < b.location.real();
  });
  return out;
}

}  // namespace gkmean

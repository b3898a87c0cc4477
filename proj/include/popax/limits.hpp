#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "popax/axiology.hpp"
#include "popax/population.hpp"
#include "popax/weighting.hpp"

namespace popax {

// A background regime: either "n people at average c" or "n people spread
// as the fixed distribution d".
struct FixedAverage {
  Rational c;
};
struct FixedDistribution {
  Distribution d;
};
using Background = std::variant<FixedAverage, FixedDistribution>;

// The n-sized background itself.  Fractional n is kept exact at a fixed
// average (the average-style families accept fractional counts); under a
// fixed distribution counts are rounded to whole people, since rank-based
// families need them.
inline Population background_population(const Background& bg, double n) {
  if (!(n > 0)) throw ValidationError("background size must be positive");
  if (const auto* fa = std::get_if<FixedAverage>(&bg))
    return Population::single(fa->c, rational_from_double(n));
  return scale_integral(std::get<FixedDistribution>(bg).d, n);
}

// Foreground conditions under which a convergence result applies.
enum class Restriction { none, moderate, covered };

struct LimitCounterpart {
  AxiologySpec target;
  Restriction restriction;
};

namespace detail {
inline const Rational& require_average(const Background& bg, const char* who) {
  const auto* fa = std::get_if<FixedAverage>(&bg);
  if (!fa)
    throw DomainError(std::string(who) +
                      ": counterpart known only for fixed-average backgrounds, not "
                      "fixed-distribution ones");
  return fa->c;
}

inline const Distribution& require_distribution(const Background& bg, const char* who) {
  const auto* fd = std::get_if<FixedDistribution>(&bg);
  if (!fd)
    throw DomainError(std::string(who) +
                      ": counterpart known only for fixed-distribution backgrounds, not "
                      "fixed-average ones");
  return fd->d;
}

inline void require_bounded_size_factor(const FuncPreset& g, const char* who) {
  if (!preset_bounded_above(g))
    throw DomainError(std::string(who) +
                      ": size factor must be bounded above for the large-background limit");
}
}  // namespace detail

// The additive axiology whose verdicts the given family approaches as the
// background grows, together with the foreground restriction (if any)
// under which the approach is guaranteed.
inline LimitCounterpart limit_counterpart(const AxiologySpec& a, const Background& bg) {
  switch (a.family()) {
    case Family::AU:
      return {AxiologySpec::cl(detail::require_average(bg, "AU")), Restriction::none};
    case Family::VV1:
      detail::require_bounded_size_factor(a.g(), "VV1");
      return {AxiologySpec::cl(detail::require_average(bg, "VV1")), Restriction::none};
    case Family::VV2:
      detail::require_bounded_size_factor(a.g(), "VV2");
      return {AxiologySpec::cl(detail::require_average(bg, "VV2")), Restriction::none};
    case Family::MDT: {
      const Distribution& d = detail::require_distribution(bg, "MDT");
      return {AxiologySpec::pr_derived(DerivedWeighting::inequality_form(a.alpha(), d)),
              Restriction::none};
    }
    case Family::QAA: {
      const Distribution& d = detail::require_distribution(bg, "QAA");
      return {AxiologySpec::pr_derived(DerivedWeighting::quasi_arithmetic_form(a.g(), d)),
              Restriction::none};
    }
    case Family::BRD:
      detail::require_distribution(bg, "BRD");
      return {AxiologySpec::tu(), Restriction::moderate};
    case Family::GRD: {
      const Distribution& d = detail::require_distribution(bg, "GRD");
      return {AxiologySpec::cll(d.population().max_welfare()), Restriction::covered};
    }
    default:
      throw DomainError(std::string(family_name(a.family())) +
                        " has no large-background limit counterpart");
  }
}

inline DerivedWeighting derived_weighting(const AxiologySpec& a, const Distribution& d) {
  if (a.family() == Family::MDT) return DerivedWeighting::inequality_form(a.alpha(), d);
  if (a.family() == Family::QAA) return DerivedWeighting::quasi_arithmetic_form(a.g(), d);
  throw DomainError(std::string(family_name(a.family())) +
                    " has no closed-form limit weighting (only MDT and QAA do)");
}

// Background size beyond which average utilitarianism ranks x+Z above y+Z
// (everything exact; the sign of V_CL(x) - V_CL(y) fixes the direction).
//   T = (|x|·V_CL(y) - |y|·V_CL(x)) / (V_CL(x) - V_CL(y))
inline double au_threshold(const Population& x, const Population& y, const Rational& c) {
  Rational vx = x.total_exact() - c * x.size_exact();
  Rational vy = y.total_exact() - c * y.size_exact();
  if (vx == vy)
    throw DomainError("threshold undefined: both sides have equal critical-level value");
  Rational t = (x.size_exact() * vy - y.size_exact() * vx) / (vx - vy);
  return to_double(t);
}

enum class SizeScaling { one, linear };

// (V(x + nD) - V(nD)) · s(n) with s(n) = 1 or n.  Average-style families
// shrink marginal contributions by 1/n, so the linear scaling is what
// converges to a critical-level value; total-style families converge
// unscaled.
inline double marginal_value(const AxiologySpec& a, const Population& x, const Distribution& d,
                             SizeScaling s, double n) {
  Population z = background_population(FixedDistribution{d}, n);
  detail::GapParts g = detail::value_gap_parts(a, add(x, z), z);
  return s == SizeScaling::linear ? g.gap * n : g.gap;
}

// One-sided difference quotient (V(D + t·1_w) - V(D)) / t of the value
// function extended to fractional counts; its t→0 limit is the priority
// weighting the family acquires against backgrounds shaped like D.
inline double numeric_weighting(const AxiologySpec& a, const Distribution& d, const Rational& w,
                                double t) {
  if (a.family() != Family::MDT && a.family() != Family::QAA)
    throw ValidationError(
        std::string(family_name(a.family())) +
        ": numeric weighting needs a value function defined on fractional counts (MDT or QAA)");
  if (!(t > 0)) throw ValidationError("numeric weighting: step must be positive");
  Population bumped = add(d.population(), Population::single(w, rational_from_double(t)));
  detail::GapParts g = detail::value_gap_parts(a, bumped, d.population());
  return g.gap / t;
}

// Default step ladder; the value at the finest step is returned and the
// largest successive difference is reported so callers can flag a
// non-converging (non-differentiable) direction.
inline double numeric_weighting_converged(const AxiologySpec& a, const Distribution& d,
                                          const Rational& w, double* cauchy_gap = nullptr) {
  constexpr double steps[] = {1e-3, 1e-4, 1e-5, 1e-6};
  double prev = 0.0, worst = 0.0, value = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    value = numeric_weighting(a, d, w, steps[i]);
    if (i > 0) worst = std::max(worst, std::abs(value - prev));
    prev = value;
  }
  if (cauchy_gap) *cauchy_gap = worst;
  return value;
}

struct ScanPoint {
  double scale;
  Ordering counterpart;  // counterpart's verdict on x+Z vs y+Z at this scale
  Ordering base;
  bool agree;  // counterpart's strict verdicts are honored by the base family
};

struct ConvergenceScan {
  LimitCounterpart counterpart;
  std::vector<ScanPoint> points;
  std::optional<double> stable_from;  // scale where the final all-agree suffix starts
};

inline std::vector<double> default_scale_grid() {
  std::vector<double> g;
  g.reserve(145);
  for (int k = 0; k <= 144; ++k) g.push_back(std::pow(10.0, k / 16.0));
  return g;
}

inline void require_restriction(const LimitCounterpart& lc, const Population& x,
                                const Population& y, const Background& bg) {
  if (lc.restriction == Restriction::none) return;
  const Distribution& d = std::get<FixedDistribution>(bg).d;
  if (lc.restriction == Restriction::moderate) {
    if (!is_moderate(x, d) || !is_moderate(y, d))
      throw ValidationError(
          "foregrounds violate the moderate restriction: every welfare level must be at least "
          "the background distribution's minimum");
    return;
  }
  std::vector<Rational> levels;
  levels.reserve(x.levels() + y.levels());
  for (const auto& e : x.entries()) levels.push_back(e.w);
  for (const auto& e : y.entries()) levels.push_back(e.w);
  if (!covers(d, std::move(levels)))
    throw ValidationError(
        "background distribution does not cover the foreground welfare set: it needs mass "
        "strictly below, strictly between, and strictly above the foreground levels");
}

// Sweep background sizes and record where the base axiology's verdict on
// x+Z vs y+Z starts honoring its limit counterpart's verdict on the same
// pair.  Agreement asks only that the counterpart's strict preferences be
// preserved, which is exactly what the limit theorems promise.
inline ConvergenceScan convergence_scan(const AxiologySpec& a, const Population& x,
                                        const Population& y, const Background& bg,
                                        std::vector<double> scales = {}) {
  LimitCounterpart lc = limit_counterpart(a, bg);
  require_restriction(lc, x, y, bg);
  if (scales.empty()) scales = default_scale_grid();
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0)) throw ValidationError("scan scales must be positive");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw ValidationError("scan scales must be strictly ascending");
  }
  ConvergenceScan out{std::move(lc), {}, std::nullopt};
  out.points.reserve(scales.size());
  for (double n : scales) {
    Population z = background_population(bg, n);
    Population xz = add(x, z), yz = add(y, z);
    Ordering co = compare(out.counterpart.target, xz, yz).ordering;
    Ordering base = compare(a, xz, yz).ordering;
    bool agree = co == Ordering::Equal || base == co;
    out.points.push_back({n, co, base, agree});
  }
  for (std::size_t i = out.points.size(); i-- > 0;) {
    if (!out.points[i].agree) break;
    out.stable_from = out.points[i].scale;
  }
  return out;
}

struct RepugnantWitness {
  Population x;              // many lives barely worth living
  Population z;              // the zero-welfare background that tips the verdict
  std::uint64_t background;  // |z|
};

// Search for the smallest zero-welfare background under which the axiology
// prefers a large population of lives at epsilon over y.  The blissful
// population y must be strictly positive throughout, epsilon strictly
// between 0 and y's minimum.  x is sized so its total is at least twice
// y's, which guarantees the critical-level counterpart strictly prefers it
// and hence that some finite background works; cap bounds the search.
inline std::optional<RepugnantWitness> repugnant_background(const AxiologySpec& a,
                                                            const Population& y,
                                                            const Rational& epsilon,
                                                            std::uint64_t cap) {
  switch (a.family()) {
    case Family::AU:
    case Family::VV1:
    case Family::VV2:
      break;
    default:
      throw ValidationError(std::string(family_name(a.family())) +
                            " does not acquire repugnant verdicts from larger backgrounds");
  }
  if (y.empty()) throw ValidationError("repugnant witness: y must be non-empty");
  if (y.min_welfare() <= 0)
    throw ValidationError("repugnant witness: y must be strictly positive throughout");
  if (!(epsilon > 0) || !(epsilon < y.min_welfare()))
    throw ValidationError("repugnant witness: epsilon must lie strictly between 0 and min(y)");
  Rational count = rational_ceil(2 * y.total_exact() / epsilon);
  Population x = Population::single(epsilon, count);
  auto better_at = [&](std::uint64_t n) {
    Population z = n == 0 ? Population() : Population::single(Rational(0), Rational(n));
    return compare(a, add(x, z), add(y, z)).ordering == Ordering::Better;
  };
  auto witness = [&](std::uint64_t n) {
    Population z = n == 0 ? Population() : Population::single(Rational(0), Rational(n));
    return RepugnantWitness{x, std::move(z), n};
  };
  if (better_at(0)) return witness(0);
  std::uint64_t lo = 0, hi = 1;
  while (true) {
    if (hi >= cap) {
      hi = cap;
      if (!better_at(hi)) return std::nullopt;
      break;
    }
    if (better_at(hi)) break;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (better_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  return witness(hi);
}

}  // namespace popax

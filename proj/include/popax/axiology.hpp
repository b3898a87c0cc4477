#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "popax/inequality.hpp"
#include "popax/population.hpp"
#include "popax/presets.hpp"
#include "popax/rank.hpp"
#include "popax/summation.hpp"
#include "popax/weighting.hpp"

namespace popax {

enum class Family { TU, CL, PR, AU, VV1, VV2, MDT, QAA, BRD, GRD, CLL };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::TU: return "TU";
    case Family::CL: return "CL";
    case Family::PR: return "PR";
    case Family::AU: return "AU";
    case Family::VV1: return "VV1";
    case Family::VV2: return "VV2";
    case Family::MDT: return "MDT";
    case Family::QAA: return "QAA";
    case Family::BRD: return "BRD";
    case Family::GRD: return "GRD";
    case Family::CLL: return "CLL";
  }
  return "?";
}

enum class Ordering { Worse = -1, Equal = 0, Better = 1 };

inline const char* ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Worse: return "Worse";
    case Ordering::Equal: return "Equal";
    case Ordering::Better: return "Better";
  }
  return "?";
}

struct ComparisonResult {
  Ordering ordering;
  std::optional<double> value_gap;  // V(x) - V(y); absent for CLL
};

// A fully-parameterized axiology.  Construct through the named factories,
// which validate parameter ranges up front (an out-of-range alpha or beta
// is a bug in the caller, not a numeric condition to limp through).
class AxiologySpec {
 public:
  static AxiologySpec tu() { return AxiologySpec(Family::TU); }

  static AxiologySpec cl(Rational c) {
    AxiologySpec a(Family::CL);
    a.c_ = std::move(c);
    return a;
  }

  static AxiologySpec pr(const FuncPreset& f) {
    require_priority_preset(f, "PR weighting f");
    AxiologySpec a(Family::PR);
    a.f_ = f;
    return a;
  }

  // PR whose weighting is a background-derived profile rather than a
  // catalogue preset; produced by the limit machinery, not serializable.
  static AxiologySpec pr_derived(DerivedWeighting f) {
    AxiologySpec a(Family::PR);
    a.derived_f_ = std::make_shared<DerivedWeighting>(std::move(f));
    return a;
  }

  static AxiologySpec au() { return AxiologySpec(Family::AU); }

  static AxiologySpec vv1(const FuncPreset& g) {
    require_size_preset(g);
    AxiologySpec a(Family::VV1);
    a.g_ = g;
    return a;
  }

  static AxiologySpec vv2(const FuncPreset& f, const FuncPreset& g) {
    require_differentiable_increasing(f, "VV2 transform f");
    require_size_preset(g);
    AxiologySpec a(Family::VV2);
    a.f_ = f;
    a.g_ = g;
    return a;
  }

  static AxiologySpec mdt(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5))
      throw ValidationError("MDT: alpha must lie strictly inside (0, 1/2)");
    AxiologySpec a(Family::MDT);
    a.alpha_ = alpha;
    return a;
  }

  static AxiologySpec qaa(const FuncPreset& g) {
    require_priority_preset(g, "QAA mean transform g");
    AxiologySpec a(Family::QAA);
    a.g_ = g;
    return a;
  }

  static AxiologySpec brd(const FuncPreset& f) {
    require_rank_preset(f);
    AxiologySpec a(Family::BRD);
    a.f_ = f;
    return a;
  }

  static AxiologySpec grd(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
      throw ValidationError("GRD: beta must lie strictly inside (0,1)");
    AxiologySpec a(Family::GRD);
    a.beta_ = beta;
    return a;
  }

  static AxiologySpec cll(Rational c) {
    AxiologySpec a(Family::CLL);
    a.c_ = std::move(c);
    return a;
  }

  Family family() const { return family_; }
  const Rational& c() const { return c_; }
  const FuncPreset& f() const { return require_present(f_, "f"); }
  const FuncPreset& g() const { return require_present(g_, "g"); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  bool has_derived_f() const { return derived_f_ != nullptr; }
  const DerivedWeighting& derived_f() const { return *derived_f_; }
  bool has_value_function() const { return family_ != Family::CLL; }

  std::string label() const {
    switch (family_) {
      case Family::CL: return "CL_" + format_rational(c_);
      case Family::CLL: return "CLL_" + format_rational(c_);
      default: return family_name(family_);
    }
  }

 private:
  explicit AxiologySpec(Family f) : family_(f) {}
  static const FuncPreset& require_present(const std::optional<FuncPreset>& p, const char* which) {
    if (!p) throw ValidationError(std::string("axiology has no preset ") + which);
    return *p;
  }

  Family family_;
  Rational c_ = 0;
  std::optional<FuncPreset> f_;
  std::optional<FuncPreset> g_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::shared_ptr<const DerivedWeighting> derived_f_;
};

namespace detail {

// Strict preference demands a gap that clears the noise floor of the path
// that computed it; anything inside the floor reports Equal, so float
// fuzz never manufactures a strict preference.
constexpr double kStrictTol = 1e-9;

// gap   — the reported value difference V(x) - V(y)
// ord   — the quantity whose sign decides the ordering (usually == gap;
//         the quasi-arithmetic family decides on the g-mean difference,
//         the geometric rank family on a rescaled tail series)
// noise — sum of the magnitudes that met in the final cancellation; zero
//         for paths evaluated in exact arithmetic
struct GapParts {
  double gap;
  double ord;
  double noise;
};

inline Ordering order_from(const GapParts& g) {
  if (g.ord == 0.0 || std::abs(g.ord) <= kStrictTol * g.noise) return Ordering::Equal;
  return g.ord > 0.0 ? Ordering::Better : Ordering::Worse;
}

inline double priority_value(const AxiologySpec& a, const Rational& w) {
  if (a.has_derived_f()) return a.derived_f().at(w);
  return preset_value(a.f(), to_double(w));
}

inline void require_nonempty_pair(const AxiologySpec& a, const Population& x,
                                  const Population& y) {
  if (x.empty() || y.empty())
    throw ValidationError(std::string(family_name(a.family())) +
                          " comparison undefined for empty populations");
}

// TU and CL difference: exact rational, single rounding at the end.
inline GapParts gap_total(const AxiologySpec& a, const SharedSplit& sp) {
  Rational c = a.family() == Family::CL ? a.c() : Rational(0);
  Rational diff = (sp.xr.total_exact() - c * sp.xr.size_exact()) -
                  (sp.yr.total_exact() - c * sp.yr.size_exact());
  double gap = to_double(diff);
  if (gap == 0.0 && diff != 0)
    gap = std::copysign(std::numeric_limits<double>::denorm_min(), diff > 0 ? 1.0 : -1.0);
  return {gap, gap, 0.0};
}

inline GapParts gap_priority(const AxiologySpec& a, const SharedSplit& sp) {
  CompensatedSum acc, mag;
  for (const auto& e : sp.xr.entries()) {
    double t = to_double(e.count) * priority_value(a, e.w);
    acc.add(t);
    mag.add(std::abs(t));
  }
  for (const auto& e : sp.yr.entries()) {
    double t = to_double(e.count) * priority_value(a, e.w);
    acc.add(-t);
    mag.add(std::abs(t));
  }
  double gap = acc.value();
  return {gap, gap, mag.value()};
}

// Average difference via the merged numerator
//   N = T'x S'y - T'y S'x + Tm (S'y - S'x) + Sm (T'x - T'y),
// where primes are the disjoint remainders and m the exact shared part;
// V_AU(x) - V_AU(y) = N / (Sx Sy).  The count differences in N are exact
// rationals, so a 10^20-person shared background cancels without loss.
struct AvgDiff {
  double davg;   // V_AU(x) - V_AU(y)
  double noise;  // term magnitudes / (Sx Sy)
};

inline AvgDiff average_diff(const SharedSplit& sp, double sx, double sy) {
  double txr = to_double(sp.xr.total_exact()), tyr = to_double(sp.yr.total_exact());
  double sxr = to_double(sp.xr.size_exact()), syr = to_double(sp.yr.size_exact());
  double tm = to_double(sp.shared.total_exact()), sm = to_double(sp.shared.size_exact());
  double ds = to_double(Rational(sp.yr.size_exact() - sp.xr.size_exact()));
  double dt = to_double(Rational(sp.xr.total_exact() - sp.yr.total_exact()));
  CompensatedSum n, mag;
  n.add(txr * syr);
  mag.add(std::abs(txr * syr));
  n.add(-tyr * sxr);
  mag.add(std::abs(tyr * sxr));
  n.add(tm * ds);
  mag.add(std::abs(tm * ds));
  n.add(sm * dt);
  mag.add(std::abs(sm * dt));
  double denom = sx * sy;
  return {n.value() / denom, mag.value() / denom};
}

inline GapParts gap_average(const AxiologySpec& a, const Population& x, const Population& y,
                            const SharedSplit& sp) {
  require_nonempty_pair(a, x, y);
  double sx = to_double(x.size_exact()), sy = to_double(y.size_exact());
  AvgDiff d = average_diff(sp, sx, sy);
  return {d.davg, d.davg, d.noise};
}

// Variable value: V = f(Avg)·g(Size) split as
//   [f(ax) - f(ay)]·g(Sx) + f(ay)·[g(Sx) - g(Sy)]
// with both bracketed differences computed in their stable forms.
inline GapParts gap_variable(const AxiologySpec& a, const Population& x, const Population& y,
                             const SharedSplit& sp) {
  require_nonempty_pair(a, x, y);
  double sx = to_double(x.size_exact()), sy = to_double(y.size_exact());
  AvgDiff d = average_diff(sp, sx, sy);
  double ax = to_double(Rational(x.total_exact() / x.size_exact()));
  double ay = to_double(Rational(y.total_exact() / y.size_exact()));
  double ds = to_double(Rational(sp.xr.size_exact() - sp.yr.size_exact()));
  const FuncPreset& g = a.g();
  double gx = preset_value(g, sx);
  double gdiff = preset_diff(g, sx, sy, ds);
  double fdiff, fy, slope;
  if (a.family() == Family::VV1) {
    fdiff = d.davg;
    fy = ay;
    slope = 1.0;
  } else {
    const FuncPreset& f = a.f();
    fdiff = preset_diff(f, ax, ay, d.davg);
    fy = preset_value(f, ay);
    slope = d.davg != 0.0 ? std::abs(fdiff / d.davg) : std::abs(preset_deriv(f, ay));
  }
  double t1 = fdiff * gx;
  double t2 = fy * gdiff;
  double gap = t1 + t2;
  double noise = std::abs(t1) + std::abs(t2) + slope * d.noise * std::abs(gx);
  return {gap, gap, noise};
}

// Inequality-penalized total: V = Tot - alpha·Pair(x,x)/Size.  The pair sum
// against a huge shared part is expanded so the shared-vs-shared block and
// the shared-vs-foreground cross terms cancel structurally:
//   Q(x)-Q(y) = [ -Pmm·dS' + (A·S'y - B·S'x) + Sm·(A - B) ] / (Sx Sy)
// with A = 2·Pair(m,x')+Pair(x',x'), B likewise for y', and A - B
// accumulated level-aligned so it stays O(foreground).
inline GapParts gap_inequality(const AxiologySpec& a, const Population& x, const Population& y,
                               const SharedSplit& sp) {
  double sx = to_double(x.size_exact()), sy = to_double(y.size_exact());
  if (x.empty() || y.empty()) {
    // Degenerate: fall back to direct totals (V of empty is 0).
    double vx = x.empty() ? 0.0 : to_double(x.total_exact()) - a.alpha() * pair_sum(x) / sx;
    double vy = y.empty() ? 0.0 : to_double(y.total_exact()) - a.alpha() * pair_sum(y) / sy;
    double gap = vx - vy;
    return {gap, gap, std::abs(vx) + std::abs(vy)};
  }
  double alpha = a.alpha();
  double dt = to_double(Rational(sp.xr.total_exact() - sp.yr.total_exact()));
  double dsp = to_double(Rational(sp.xr.size_exact() - sp.yr.size_exact()));
  double sxr = to_double(sp.xr.size_exact()), syr = to_double(sp.yr.size_exact());
  double sm = to_double(sp.shared.size_exact());
  double pmm = pair_sum(sp.shared);
  double pmx = cross_pair_sum(sp.shared, sp.xr), pmy = cross_pair_sum(sp.shared, sp.yr);
  double pxx = pair_sum(sp.xr), pyy = pair_sum(sp.yr);
  double A = 2.0 * pmx + pxx, B = 2.0 * pmy + pyy;
  // A - B, but with the m-cross terms differenced per shared level first.
  CompensatedSum cross_d;
  for (const auto& em : sp.shared.entries()) {
    double v = to_double(em.w);
    CompensatedSum inner;
    for (const auto& e : sp.xr.entries())
      inner.add(to_double(e.count) * std::abs(to_double(e.w) - v));
    for (const auto& e : sp.yr.entries())
      inner.add(-to_double(e.count) * std::abs(to_double(e.w) - v));
    cross_d.add(to_double(em.count) * inner.value());
  }
  double a_minus_b = 2.0 * cross_d.value() + (pxx - pyy);
  double denom = sx * sy;
  CompensatedSum q, qmag;
  q.add(-pmm * dsp);
  qmag.add(std::abs(pmm * dsp));
  q.add(A * syr);
  qmag.add(std::abs(A * syr));
  q.add(-B * sxr);
  qmag.add(std::abs(B * sxr));
  q.add(sm * a_minus_b);
  qmag.add(sm * (2.0 * (pmx + pmy) + pxx + pyy));
  double qdiff = q.value() / denom;
  double gap = dt - alpha * qdiff;
  double noise = std::abs(dt) + alpha * qmag.value() / denom;
  return {gap, gap, noise};
}

// Quasi-arithmetic: ordering decided by the difference of g-means,
//   dM = [ -Gm·dS' + Sm·(G'x - G'y) + (G'x S'y - G'y S'x) ] / (Sx Sy),
// then mapped through the stable inverse difference for the value gap.
inline GapParts gap_quasi(const AxiologySpec& a, const Population& x, const Population& y,
                          const SharedSplit& sp) {
  require_nonempty_pair(a, x, y);
  const FuncPreset& g = a.g();
  if (preset_needs_nonneg(g) && (x.min_welfare() < 0 || y.min_welfare() < 0))
    throw ValidationError(std::string("QAA: preset ") + preset_kind_name(g.kind) +
                          " requires non-negative welfare");
  auto gsum = [&g](const Population& p) {
    CompensatedSum s;
    for (const auto& e : p.entries()) s.add(to_double(e.count) * preset_value(g, to_double(e.w)));
    return s.value();
  };
  double gm = gsum(sp.shared), gxr = gsum(sp.xr), gyr = gsum(sp.yr);
  double sx = to_double(x.size_exact()), sy = to_double(y.size_exact());
  double sm = to_double(sp.shared.size_exact());
  double sxr = to_double(sp.xr.size_exact()), syr = to_double(sp.yr.size_exact());
  double dsp = to_double(Rational(sp.xr.size_exact() - sp.yr.size_exact()));
  double denom = sx * sy;
  CompensatedSum n, mag;
  n.add(-gm * dsp);
  mag.add(std::abs(gm * dsp));
  n.add(sm * (gxr - gyr));
  mag.add(sm * (std::abs(gxr) + std::abs(gyr)));
  n.add(gxr * syr);
  mag.add(std::abs(gxr * syr));
  n.add(-gyr * sxr);
  mag.add(std::abs(gyr * sxr));
  double dm = n.value() / denom;
  double mx = (gm + gxr) / sx, my = (gm + gyr) / sy;
  double gap = preset_inverse_diff(g, mx, my, dm);
  return {gap, dm, mag.value() / denom};
}

struct RankParams {
  bool geometric;
  double beta;  // geometric
  double L, amp;  // bounded_rational
};

inline RankParams rank_params(const AxiologySpec& a) {
  if (a.family() == Family::GRD) return {true, a.beta(), 0.0, 0.0};
  return {false, 0.0, a.f().p1, a.f().p2};
}

// Bounded rank discounting: walk both ascending sequences rank-aligned and
// sum (wa - wb)·sum of f over the segment.  Segments where both sides hold
// the same level vanish exactly, so a shared background contributes only
// boundary slivers of foreground-bounded length.
inline GapParts gap_rank_bounded(const AxiologySpec& a, const Population& x, const Population& y) {
  RankParams rp = rank_params(a);
  auto rx = sorted_welfare(x), ry = sorted_welfare(y);
  CompensatedSum acc, mag;
  walk_aligned(rx, ry, [&](std::uint64_t k, std::uint64_t len, const Rational* wa,
                           const Rational* wb) {
    if (wa && wb && *wa == *wb) return;
    double fsum = rp.L * static_cast<double>(len) + rp.amp * harmonic_diff(k - 1, k - 1 + len);
    double da = wa ? to_double(*wa) : 0.0;
    double db = wb ? to_double(*wb) : 0.0;
    double t = (da - db) * fsum;
    acc.add(t);
    mag.add(std::abs(t));
  });
  double gap = acc.value();
  return {gap, gap, mag.value()};
}

// Geometric rank discounting: identical walk, but all discounts are
// factored by beta^(k0) at the first differing rank k0.  The rescaled tail
// series T decides the ordering even when beta^(k0) itself underflows;
// the reported gap is then clamped to the smallest signed double so its
// sign still matches.
inline GapParts gap_rank_geometric(const AxiologySpec& a, const Population& x,
                                   const Population& y) {
  double beta = a.beta();
  auto rx = sorted_welfare(x), ry = sorted_welfare(y);
  std::uint64_t k0 = 0;
  CompensatedSum t_acc, mag;
  walk_aligned(rx, ry, [&](std::uint64_t k, std::uint64_t len, const Rational* wa,
                           const Rational* wb) {
    if (wa && wb && *wa == *wb) return;
    if (len == 0) return;
    if (k0 == 0) k0 = k;
    double da = wa ? to_double(*wa) : 0.0;
    double db = wb ? to_double(*wb) : 0.0;
    double fsum = geometric_run(beta, static_cast<double>(k - k0), static_cast<double>(len));
    double t = (da - db) * fsum;
    t_acc.add(t);
    mag.add(std::abs(t));
  });
  if (k0 == 0) return {0.0, 0.0, 0.0};
  double tv = t_acc.value();
  double lead = std::pow(beta, static_cast<double>(k0));
  double gap = lead * tv;
  if (gap == 0.0 && tv != 0.0)
    gap = std::copysign(std::numeric_limits<double>::denorm_min(), tv);
  return {gap, tv, mag.value()};
}

inline Ordering cll_compare(const Population& x, const Population& y, const Rational& c) {
  auto rx = sorted_welfare(x), ry = sorted_welfare(y);
  Rational dsz = x.size_exact() - y.size_exact();
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max() / 2;
  if (dsz > 0) {
    BigInt d = numerator(dsz);
    if (d > cap) throw DomainError("rank statistics unavailable: counts too large to enumerate ranks");
    ry = pad_runs(std::move(ry), c, d.convert_to<std::uint64_t>());
  } else if (dsz < 0) {
    BigInt d = numerator(Rational(-dsz));
    if (d > cap) throw DomainError("rank statistics unavailable: counts too large to enumerate ranks");
    rx = pad_runs(std::move(rx), c, d.convert_to<std::uint64_t>());
  }
  Ordering result = Ordering::Equal;
  bool decided = false;
  walk_aligned(rx, ry, [&](std::uint64_t, std::uint64_t len, const Rational* wa,
                           const Rational* wb) {
    if (decided || len == 0) return;
    // Sizes are padded equal, so both sides are always live.
    if (*wa == *wb) return;
    result = *wa > *wb ? Ordering::Better : Ordering::Worse;
    decided = true;
  });
  return result;
}

inline GapParts value_gap_parts(const AxiologySpec& a, const Population& x, const Population& y) {
  switch (a.family()) {
    case Family::TU:
    case Family::CL:
      return gap_total(a, shared_split(x, y));
    case Family::PR:
      return gap_priority(a, shared_split(x, y));
    case Family::AU:
      return gap_average(a, x, y, shared_split(x, y));
    case Family::VV1:
    case Family::VV2:
      return gap_variable(a, x, y, shared_split(x, y));
    case Family::MDT:
      return gap_inequality(a, x, y, shared_split(x, y));
    case Family::QAA:
      return gap_quasi(a, x, y, shared_split(x, y));
    case Family::BRD:
      return gap_rank_bounded(a, x, y);
    case Family::GRD:
      return gap_rank_geometric(a, x, y);
    case Family::CLL:
      break;
  }
  throw DomainError("CLL has no real-valued value function");
}

}  // namespace detail

inline double evaluate(const AxiologySpec& a, const Population& x) {
  switch (a.family()) {
    case Family::TU:
      return to_double(x.total_exact());
    case Family::CL:
      return to_double(Rational(x.total_exact() - a.c() * x.size_exact()));
    case Family::PR: {
      CompensatedSum s;
      for (const auto& e : x.entries())
        s.add(to_double(e.count) * detail::priority_value(a, e.w));
      return s.value();
    }
    case Family::AU:
      return summarize(x).average;
    case Family::VV1:
      return summarize(x).average * preset_value(a.g(), to_double(x.size_exact()));
    case Family::VV2:
      return preset_value(a.f(), summarize(x).average) *
             preset_value(a.g(), to_double(x.size_exact()));
    case Family::MDT: {
      if (x.empty()) return 0.0;
      double s = to_double(x.size_exact());
      return to_double(x.total_exact()) - a.alpha() * detail::pair_sum(x) / s;
    }
    case Family::QAA:
      return qam(x, a.g());
    case Family::BRD: {
      auto runs = sorted_welfare(x);
      CompensatedSum s;
      std::uint64_t k = 1;
      for (const auto& r : runs) {
        double fsum = a.f().p1 * static_cast<double>(r.n) +
                      a.f().p2 * detail::harmonic_diff(k - 1, k - 1 + r.n);
        s.add(to_double(r.w) * fsum);
        k += r.n;
      }
      return s.value();
    }
    case Family::GRD: {
      auto runs = sorted_welfare(x);
      // Start ranks, then accumulate from the deepest (smallest-magnitude)
      // run upward so the compensated sum sees ascending magnitudes.
      std::vector<double> starts(runs.size());
      std::uint64_t k = 1;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        starts[i] = static_cast<double>(k);
        k += runs[i].n;
      }
      CompensatedSum s;
      for (std::size_t i = runs.size(); i-- > 0;) {
        double fsum = detail::geometric_run(a.beta(), starts[i], static_cast<double>(runs[i].n));
        s.add(to_double(runs[i].w) * fsum);
      }
      return s.value();
    }
    case Family::CLL:
      break;
  }
  throw DomainError("CLL has no real-valued value function; use compare");
}

inline ComparisonResult compare(const AxiologySpec& a, const Population& x, const Population& y) {
  if (a.family() == Family::CLL)
    return {detail::cll_compare(x, y, a.c()), std::nullopt};
  detail::GapParts g = detail::value_gap_parts(a, x, y);
  return {detail::order_from(g), g.gap};
}

// The sufficient dominance conditions for the two-argument variable-value
// form: exact average/size comparisons plus a sign condition on f.  Returns
// nothing when the conditions do not apply; never contradicts compare.
inline std::optional<Ordering> vv2_dominance(const AxiologySpec& a, const Population& x,
                                             const Population& y) {
  if (a.family() != Family::VV2) throw ValidationError("vv2_dominance requires a VV2 axiology");
  detail::require_nonempty_pair(a, x, y);
  Rational ax(x.total_exact() / x.size_exact());
  Rational ay(y.total_exact() / y.size_exact());
  if (!(ax > ay)) return std::nullopt;
  if (x.size_exact() >= y.size_exact() && preset_value(a.f(), to_double(ax)) >= 0.0)
    return Ordering::Better;
  if (y.size_exact() >= x.size_exact() && preset_value(a.f(), to_double(ay)) <= 0.0)
    return Ordering::Better;
  return std::nullopt;
}

}  // namespace popax

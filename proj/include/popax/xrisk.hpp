#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "popax/axiology.hpp"
#include "popax/population.hpp"

namespace popax {

// Cost-of-catastrophe bookkeeping.  Four disjoint groups:
//   z        background lives unaffected by any choice (may be empty)
//   c        present people in the world that keeps its future
//   c_prime  the same people in the world that loses it (|c| == |c_prime|)
//   f        the future people who exist only in the first world
struct Scenario {
  Population z, c, c_prime, f;

  Scenario(Population z_, Population c_, Population c_prime_, Population f_)
      : z(std::move(z_)), c(std::move(c_)), c_prime(std::move(c_prime_)), f(std::move(f_)) {
    if (c.empty() || c_prime.empty() || f.empty())
      throw ValidationError("scenario: C, C' and F must be non-empty");
    if (c.size_exact() != c_prime.size_exact())
      throw ValidationError("scenario: C and C' must contain exactly the same number of people");
  }
};

inline Population shift_welfare(const Population& p, const Rational& delta) {
  std::vector<Entry> es;
  es.reserve(p.levels());
  for (const auto& e : p.entries()) es.push_back({Rational(e.w + delta), e.count});
  return Population(std::move(es));
}

namespace detail {

inline Rational exact_average(const Population& p) {
  return Rational(p.total_exact() / p.size_exact());
}

// Bisect h on [lo, hi]; h must change sign across the bracket.
template <typename H>
inline double bisect(H&& h, double lo, double hi) {
  double flo = h(lo), fhi = h(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw DomainError("cost solver: no sign change across the search bracket");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = h(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Per-capita shifts beyond this magnitude cannot restore indifference: it
// covers the whole welfare span plus every group's total spread over C.
inline double cost_bracket(const Scenario& s) {
  double totals = std::abs(to_double(s.z.total_exact())) + std::abs(to_double(s.c.total_exact())) +
                  std::abs(to_double(s.c_prime.total_exact())) +
                  std::abs(to_double(s.f.total_exact()));
  double span = 0.0;
  Rational wmin = s.c.min_welfare(), wmax = s.c.max_welfare();
  for (const Population* p : {&s.z, &s.c_prime, &s.f}) {
    if (p->empty()) continue;
    if (p->min_welfare() < wmin) wmin = p->min_welfare();
    if (p->max_welfare() > wmax) wmax = p->max_welfare();
  }
  span = to_double(Rational(wmax - wmin));
  return 10.0 * (totals / to_double(s.c.size_exact()) + span + 1.0);
}

// delta* such that V(Z + (C - delta) + F) == V(Z + C); the group is
// indifferent between keeping the future at that per-capita price and
// losing it for free.
inline double incurred_cost_per_capita(const AxiologySpec& a, const Scenario& s) {
  Population zc = add(s.z, s.c);
  double r = cost_bracket(s);
  auto h = [&](double delta) {
    Population moved = shift_welfare(s.c, -rational_from_double(delta));
    return value_gap_parts(a, add(add(s.z, moved), s.f), zc).gap;
  };
  return bisect(h, -r, r);
}

// delta* such that V(Z + (C' + delta)) == V(Z + C' + F); the per-capita
// gain that would exactly compensate for a lost future.
inline double opportunity_cost_per_capita(const AxiologySpec& a, const Scenario& s) {
  Population zcf = add(add(s.z, s.c_prime), s.f);
  double r = cost_bracket(s);
  auto h = [&](double delta) {
    Population moved = shift_welfare(s.c_prime, rational_from_double(delta));
    return value_gap_parts(a, add(s.z, moved), zcf).gap;
  };
  return bisect(h, -r, r);
}

}  // namespace detail

// Largest total welfare cost the present generation should accept to keep
// the future.  Exact closed forms for the average and critical-level
// families; bisection on a uniform per-capita shift otherwise.
inline double mic(const AxiologySpec& a, const Scenario& s) {
  switch (a.family()) {
    case Family::TU:
    case Family::CL: {
      Rational c = a.family() == Family::CL ? a.c() : Rational(0);
      return to_double(Rational(s.f.total_exact() - c * s.f.size_exact()));
    }
    case Family::AU: {
      Rational avg_zc = detail::exact_average(add(s.z, s.c));
      Rational v = s.f.size_exact() * (detail::exact_average(s.f) - avg_zc);
      return to_double(v);
    }
    case Family::CLL:
      throw DomainError("CLL has no real-valued value function, so costs are undefined");
    default:
      return detail::incurred_cost_per_capita(a, s) * to_double(s.c.size_exact());
  }
}

// Largest total welfare gain to the present generation that is worth as
// much as the future itself.
inline double moc(const AxiologySpec& a, const Scenario& s) {
  switch (a.family()) {
    case Family::TU:
    case Family::CL: {
      Rational c = a.family() == Family::CL ? a.c() : Rational(0);
      return to_double(Rational(s.f.total_exact() - c * s.f.size_exact()));
    }
    case Family::AU: {
      Population zcp = add(s.z, s.c_prime);
      Rational v = s.f.size_exact() * (detail::exact_average(s.f) - detail::exact_average(zcp)) *
                   zcp.size_exact() / (zcp.size_exact() + s.f.size_exact());
      return to_double(v);
    }
    case Family::CLL:
      throw DomainError("CLL has no real-valued value function, so costs are undefined");
    default:
      return detail::opportunity_cost_per_capita(a, s) * to_double(s.c_prime.size_exact());
  }
}

// (value of the future) / (value of making the present people better off):
//   [V(Z+C'+F) - V(Z+C')] / [V(Z+C) - V(Z+C')]
// Both differences go through the cancellation-safe gap engine, so a 10^20
// background does not wash out the numerator or denominator.
inline double vdr(const AxiologySpec& a, const Scenario& s) {
  Population zcp = add(s.z, s.c_prime);
  detail::GapParts num = detail::value_gap_parts(a, add(zcp, s.f), zcp);
  detail::GapParts den = detail::value_gap_parts(a, add(s.z, s.c), zcp);
  if (detail::order_from(den) == Ordering::Equal)
    throw DomainError("value difference ratio undefined: present people fare equally in both worlds");
  return num.gap / den.gap;
}

// Which group dominates the total population size under average
// utilitarianism, and the corresponding back-of-envelope cost formulas.
//   regime 1: Z negligible next to C   (costs set by present people)
//   regime 2: C << Z << F              (costs set by the background)
//   regime 3: F << Z                   (costs set by the future's share)
struct RegimeApprox {
  int regime;
  double mic, moc, vdr;
};

inline RegimeApprox regime_approx(const Scenario& s, std::ostream* warnings = nullptr) {
  double sz = s.z.empty() ? 0.0 : to_double(s.z.size_exact());
  double sc = to_double(s.c.size_exact());
  double sf = to_double(s.f.size_exact());
  double avg_f = to_double(detail::exact_average(s.f));
  double avg_c = to_double(detail::exact_average(s.c));
  double avg_cp = to_double(detail::exact_average(s.c_prime));
  double avg_z = s.z.empty() ? 0.0 : to_double(detail::exact_average(s.z));
  auto warn = [&](const char* msg) {
    if (warnings) *warnings << "warning: " << msg << "\n";
  };
  RegimeApprox out{};
  if (sz <= sc) {
    out.regime = 1;
    if (sz > 0.0 && sc < 100.0 * sz)
      warn("background and present sizes within a factor of 100; regime-1 formulas are loose");
    if (sf < 100.0 * sc)
      warn("future and present sizes within a factor of 100; regime-1 formulas are loose");
    out.mic = sf * (avg_f - avg_c);
    out.moc = sc * (avg_f - avg_cp);
    out.vdr = (avg_f - avg_cp) / (avg_c - avg_cp);
  } else if (sz <= sf) {
    out.regime = 2;
    if (sz < 100.0 * sc)
      warn("background and present sizes within a factor of 100; regime-2 formulas are loose");
    if (sf < 100.0 * sz)
      warn("future and background sizes within a factor of 100; regime-2 formulas are loose");
    out.mic = sf * (avg_f - avg_z);
    out.moc = sz * (avg_f - avg_z);
    out.vdr = (sz / sc) * (avg_f - avg_z) / (avg_c - avg_cp);
  } else {
    out.regime = 3;
    if (sf < 100.0 * sc)
      warn("future and present sizes within a factor of 100; regime-3 formulas are loose");
    if (sz < 100.0 * sf)
      warn("background and future sizes within a factor of 100; regime-3 formulas are loose");
    out.mic = sf * (avg_f - avg_z);
    out.moc = sf * (avg_f - avg_z);
    out.vdr = (sf / sc) * (avg_f - avg_z) / (avg_c - avg_cp);
  }
  return out;
}

// The headline cost table: one uniform-welfare scenario per background
// size, evaluated under AU, plus the background-independent CL_0 row.
struct XRiskRow {
  std::string axiology;
  std::optional<Rational> z_size;  // nullopt: identical for every background
  double mic, moc, vdr;
};

struct Table1Params {
  Rational avg_f = 2;
  Rational size_f = Rational(pow(BigInt(10), 17));
  Rational avg_c = Rational(3, 2);
  Rational avg_c_prime = 1;
  Rational size_c = Rational(pow(BigInt(10), 10));
  Rational avg_z = 0;
  std::vector<Rational> z_sizes = {0, Rational(pow(BigInt(10), 13)),
                                   Rational(pow(BigInt(10), 20))};
};

inline std::vector<XRiskRow> cost_table(const Table1Params& p = {}) {
  std::vector<XRiskRow> rows;
  AxiologySpec au = AxiologySpec::au();
  for (const Rational& zs : p.z_sizes) {
    Population z = zs == 0 ? Population() : Population::single(p.avg_z, zs);
    Scenario s(std::move(z), Population::single(p.avg_c, p.size_c),
               Population::single(p.avg_c_prime, p.size_c), Population::single(p.avg_f, p.size_f));
    rows.push_back({au.label(), zs, mic(au, s), moc(au, s), vdr(au, s)});
  }
  AxiologySpec cl0 = AxiologySpec::cl(0);
  Scenario s0(Population(), Population::single(p.avg_c, p.size_c),
              Population::single(p.avg_c_prime, p.size_c), Population::single(p.avg_f, p.size_f));
  rows.push_back({cl0.label(), std::nullopt, mic(cl0, s0), moc(cl0, s0), vdr(cl0, s0)});
  return rows;
}

// Order-of-magnitude counts of past welfare subjects, usable as background
// sizes.  Assumptions baked into each: 10^11 mammals (10^13 vertebrates)
// alive at any time, 0.1 births per individual per year; the weighted
// variants scale non-human mammals by mouse-to-human cortical neuron count
// (1/2875) and additionally by a 100-year reference lifespan.
struct BackgroundSizeEstimate {
  const char* key;
  const char* description;
  double individuals;
};

inline constexpr std::array<BackgroundSizeEstimate, 4> kBackgroundSizeEstimates{{
    {"mammals", "mammals since the end-Cretaceous extinction (66 Myr)", 6.6e17},
    {"vertebrates", "vertebrates since the Cambrian explosion (500 Myr)", 5e20},
    {"mammals-neuron-weighted", "past mammals, weighted by cortical neuron count", 2.3e15},
    {"mammals-neuron-lifespan-weighted",
     "past mammals, weighted by cortical neuron count and lifespan", 2.3e13},
}};

}  // namespace popax

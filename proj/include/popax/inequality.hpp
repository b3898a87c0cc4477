#pragma once

#include <cmath>

#include "popax/population.hpp"
#include "popax/presets.hpp"
#include "popax/summation.hpp"

namespace popax {

namespace detail {

// sum over ordered pairs (i,j) of a(i)·b(j)·|w_i - w_j|, counting runs, in
// O(levels of a × levels of b).  Sizes reach 10^20, so the per-individual
// double loop is never an option; only distinct levels matter.
inline double cross_pair_sum(const Population& a, const Population& b) {
  CompensatedSum s;
  for (const auto& ea : a.entries()) {
    double na = to_double(ea.count), wa = to_double(ea.w);
    for (const auto& eb : b.entries()) {
      double dw = std::abs(wa - to_double(eb.w));
      if (dw != 0.0) s.add(na * to_double(eb.count) * dw);
    }
  }
  return s.value();
}

inline double pair_sum(const Population& x) { return cross_pair_sum(x, x); }

}  // namespace detail

// Mean absolute difference of welfare over ordered pairs; depends only on
// the distribution of x.
inline double mad(const Population& x) {
  if (x.empty()) return 0.0;
  double s = to_double(x.size_exact());
  return detail::pair_sum(x) / (s * s);
}

// Average distance between w and the levels of d.
inline double mad_point(const Rational& w, const Distribution& d) {
  CompensatedSum s;
  double wd = to_double(w);
  for (const auto& e : d.population().entries())
    s.add(to_double(e.count) * std::abs(to_double(e.w) - wd));
  return s.value();
}

// Quasi-arithmetic mean g^-1(mean of g(welfare)).  g must be strictly
// increasing and concave on the welfare range of x, which for the catalogue
// kinds that are only concave (or only defined) on non-negative arguments
// means x must be non-negative.
inline double qam(const Population& x, const FuncPreset& g) {
  if (x.empty()) throw ValidationError("qam undefined for the empty population");
  if (!preset_increasing(g) || !preset_concave_nonneg(g))
    throw ValidationError("qam: preset must be strictly increasing and concave");
  if (preset_needs_nonneg(g) && x.min_welfare() < 0)
    throw ValidationError(std::string("qam: preset ") + preset_kind_name(g.kind) +
                          " requires non-negative welfare");
  CompensatedSum acc;
  for (const auto& e : x.entries()) acc.add(to_double(e.count) * preset_value(g, to_double(e.w)));
  double m = acc.value() / to_double(x.size_exact());
  return preset_inverse(g, m);
}

}  // namespace popax

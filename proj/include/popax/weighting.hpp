#pragma once

#include <memory>
#include <optional>

#include "popax/inequality.hpp"
#include "popax/population.hpp"
#include "popax/presets.hpp"

namespace popax {

// Priority-weighting profile w -> f(w) derived from a background
// distribution: the closed-form limit of the one-sided directional
// derivative of the base value function at D.  Not expressible as a
// catalogue preset (it is tabulated against D), hence a separate type.
class DerivedWeighting {
 public:
  // f(w) = w - 2·alpha·mad_point(w, D) + alpha·mad(D)
  static DerivedWeighting inequality_form(double alpha, Distribution d) {
    DerivedWeighting f;
    f.alpha_ = alpha;
    f.mad_d_ = mad(d.population());
    f.d_.emplace(std::move(d));
    return f;
  }

  // f(w) = (g(w) - g(qam(D))) / g'(qam(D)) — the derivative-normalized
  // quasi-arithmetic form; the positive scalar 1/g'(qam(D)) leaves the
  // induced ordering unchanged and makes f the exact directional
  // derivative.
  static DerivedWeighting quasi_arithmetic_form(const FuncPreset& g, const Distribution& d) {
    DerivedWeighting f;
    f.g_ = g;
    double q = qam(d.population(), g);
    f.g_at_qam_ = preset_value(g, q);
    f.gprime_at_qam_ = preset_deriv(g, q);
    if (!(f.gprime_at_qam_ > 0.0))
      throw DomainError("derived weighting: g has vanishing derivative at the background mean");
    return f;
  }

  double operator()(double w) const {
    if (d_) {
      return w - 2.0 * alpha_ * mad_point(rational_from_double(w), *d_) + alpha_ * mad_d_;
    }
    return (preset_value(*g_, w) - g_at_qam_) / gprime_at_qam_;
  }

  // Same quantity for an exact welfare level (keeps mad_point exact-keyed).
  double at(const Rational& w) const {
    if (d_) return to_double(w) - 2.0 * alpha_ * mad_point(w, *d_) + alpha_ * mad_d_;
    return (preset_value(*g_, to_double(w)) - g_at_qam_) / gprime_at_qam_;
  }

 private:
  DerivedWeighting() = default;
  double alpha_ = 0.0;
  double mad_d_ = 0.0;
  std::optional<Distribution> d_;
  std::optional<FuncPreset> g_;
  double g_at_qam_ = 0.0;
  double gprime_at_qam_ = 0.0;
};

}  // namespace popax

#pragma once

#include <cmath>
#include <string>

#include "popax/errors.hpp"

namespace popax {

// Closed catalogue of serializable function shapes.  The same catalogue
// serves three distinct roles: welfare transforms f (priority weighting,
// variable-value average transform), size/rank transforms g, and rank
// discount factors.  Role-specific requirements (monotone, concave,
// bounded, ...) are checked where a preset is put to use, not here.
enum class PresetKind {
  linear,            // a*x + b
  power,             // x^p on x >= 0
  negexp,            // (1 - e^(-rate*x)) / rate; increasing, concave, < 1/rate
  logistic,          // 1 / (1 + e^(-x/scale)); bounded in (0,1)
  geometric,         // beta^x with beta in (0,1); decreasing
  bounded_rational,  // L + a/x; decreasing to asymptote L > 0
  saturating,        // bound * x / (x + scale) on x >= 0; increasing to bound
};

struct FuncPreset {
  PresetKind kind;
  // Meaning depends on kind:
  //   linear           p1 = slope a,  p2 = intercept b
  //   power            p1 = exponent
  //   negexp           p1 = rate
  //   logistic         p1 = scale
  //   geometric        p1 = beta
  //   bounded_rational p1 = asymptote L, p2 = numerator a
  //   saturating       p1 = bound, p2 = scale
  double p1 = 0.0;
  double p2 = 0.0;
};

inline FuncPreset preset_linear(double a, double b = 0.0) {
  if (a == 0.0) throw ValidationError("linear preset: slope must be non-zero");
  return {PresetKind::linear, a, b};
}

inline FuncPreset preset_power(double p) {
  if (!(p > 0.0)) throw ValidationError("power preset: exponent must be positive");
  return {PresetKind::power, p, 0.0};
}

inline FuncPreset preset_negexp(double rate) {
  if (!(rate > 0.0)) throw ValidationError("negexp preset: rate must be positive");
  return {PresetKind::negexp, rate, 0.0};
}

inline FuncPreset preset_logistic(double scale) {
  if (!(scale > 0.0)) throw ValidationError("logistic preset: scale must be positive");
  return {PresetKind::logistic, scale, 0.0};
}

inline FuncPreset preset_geometric(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw ValidationError("geometric preset: beta must lie strictly inside (0,1)");
  return {PresetKind::geometric, beta, 0.0};
}

inline FuncPreset preset_bounded_rational(double L, double a) {
  if (!(L > 0.0)) throw ValidationError("bounded_rational preset: asymptote L must be positive");
  if (!(a >= 0.0)) throw ValidationError("bounded_rational preset: a must be non-negative");
  return {PresetKind::bounded_rational, L, a};
}

inline FuncPreset preset_saturating(double bound, double scale) {
  if (!(bound > 0.0)) throw ValidationError("saturating preset: bound must be positive");
  if (!(scale > 0.0)) throw ValidationError("saturating preset: scale must be positive");
  return {PresetKind::saturating, bound, scale};
}

inline const char* preset_kind_name(PresetKind k) {
  switch (k) {
    case PresetKind::linear: return "linear";
    case PresetKind::power: return "power";
    case PresetKind::negexp: return "negexp";
    case PresetKind::logistic: return "logistic";
    case PresetKind::geometric: return "geometric";
    case PresetKind::bounded_rational: return "bounded_rational";
    case PresetKind::saturating: return "saturating";
  }
  return "?";
}

inline double preset_value(const FuncPreset& f, double x) {
  switch (f.kind) {
    case PresetKind::linear:
      return f.p1 * x + f.p2;
    case PresetKind::power:
      if (x < 0.0) throw DomainError("power preset undefined for negative argument");
      return std::pow(x, f.p1);
    case PresetKind::negexp:
      return -std::expm1(-f.p1 * x) / f.p1;
    case PresetKind::logistic:
      return 1.0 / (1.0 + std::exp(-x / f.p1));
    case PresetKind::geometric:
      return std::pow(f.p1, x);
    case PresetKind::bounded_rational:
      if (x <= 0.0) throw DomainError("bounded_rational preset needs a positive argument");
      return f.p1 + f.p2 / x;
    case PresetKind::saturating:
      if (x < 0.0) throw DomainError("saturating preset undefined for negative argument");
      return f.p1 * x / (x + f.p2);
  }
  throw DomainError("unknown preset kind");
}

// f(x) - f(y) given d = x - y, computed so the result keeps the sign and
// relative accuracy of d even when x and y agree to many digits.  The
// comparison engine feeds exact-cancellation differences through here; a
// naive f(x) - f(y) would throw those digits away.
inline double preset_diff(const FuncPreset& f, double x, double y, double d) {
  switch (f.kind) {
    case PresetKind::linear:
      return f.p1 * d;
    case PresetKind::power: {
      if (x < 0.0 || y < 0.0) throw DomainError("power preset undefined for negative argument");
      if (y == 0.0 || x == 0.0) return preset_value(f, x) - preset_value(f, y);
      // x^p - y^p = y^p * ((x/y)^p - 1), with x/y = 1 + d/y.
      return std::pow(y, f.p1) * std::expm1(f.p1 * std::log1p(d / y));
    }
    case PresetKind::negexp: {
      double ey = std::exp(-f.p1 * y);
      if (!std::isfinite(ey)) return preset_value(f, x) - preset_value(f, y);
      return ey * -std::expm1(-f.p1 * d) / f.p1;
    }
    case PresetKind::logistic: {
      // sigma(u) - sigma(v) = sinh((u-v)/2) / (2 cosh(u/2) cosh(v/2)).
      double u = x / f.p1, v = y / f.p1;
      double den = 2.0 * std::cosh(u / 2.0) * std::cosh(v / 2.0);
      if (!std::isfinite(den)) return preset_value(f, x) - preset_value(f, y);
      return std::sinh(d / (2.0 * f.p1)) / den;
    }
    case PresetKind::geometric: {
      double by = std::pow(f.p1, y);
      if (!std::isfinite(by)) return preset_value(f, x) - preset_value(f, y);
      return by * std::expm1(d * std::log(f.p1));
    }
    case PresetKind::bounded_rational:
      if (x <= 0.0 || y <= 0.0) throw DomainError("bounded_rational preset needs a positive argument");
      return -f.p2 * d / (x * y);
    case PresetKind::saturating:
      if (x < 0.0 || y < 0.0) throw DomainError("saturating preset undefined for negative argument");
      return f.p1 * f.p2 * d / ((x + f.p2) * (y + f.p2));
  }
  throw DomainError("unknown preset kind");
}

inline double preset_deriv(const FuncPreset& f, double x) {
  switch (f.kind) {
    case PresetKind::linear:
      return f.p1;
    case PresetKind::power:
      if (x < 0.0) throw DomainError("power preset undefined for negative argument");
      return f.p1 * std::pow(x, f.p1 - 1.0);
    case PresetKind::negexp:
      return std::exp(-f.p1 * x);
    case PresetKind::logistic: {
      double s = preset_value(f, x);
      return s * (1.0 - s) / f.p1;
    }
    case PresetKind::geometric:
      return std::pow(f.p1, x) * std::log(f.p1);
    case PresetKind::bounded_rational:
      if (x <= 0.0) throw DomainError("bounded_rational preset needs a positive argument");
      return -f.p2 / (x * x);
    case PresetKind::saturating:
      if (x < 0.0) throw DomainError("saturating preset undefined for negative argument");
      return f.p1 * f.p2 / ((x + f.p2) * (x + f.p2));
  }
  throw DomainError("unknown preset kind");
}

inline double preset_inverse(const FuncPreset& f, double y) {
  switch (f.kind) {
    case PresetKind::linear:
      return (y - f.p2) / f.p1;
    case PresetKind::power:
      if (y < 0.0) throw DomainError("power preset not invertible below 0");
      return std::pow(y, 1.0 / f.p1);
    case PresetKind::negexp:
      if (f.p1 * y >= 1.0) throw DomainError("negexp preset not invertible at or above its bound");
      return -std::log1p(-f.p1 * y) / f.p1;
    case PresetKind::logistic:
      if (y <= 0.0 || y >= 1.0) throw DomainError("logistic preset not invertible outside (0,1)");
      return f.p1 * std::log(y / (1.0 - y));
    case PresetKind::geometric:
      if (y <= 0.0) throw DomainError("geometric preset not invertible at or below 0");
      return std::log(y) / std::log(f.p1);
    case PresetKind::bounded_rational:
      if (y <= f.p1) throw DomainError("bounded_rational preset not invertible at or below its asymptote");
      return f.p2 / (y - f.p1);
    case PresetKind::saturating:
      if (y < 0.0 || y >= f.p1) throw DomainError("saturating preset not invertible outside [0, bound)");
      return y * f.p2 / (f.p1 - y);
  }
  throw DomainError("unknown preset kind");
}

// f^-1(mx) - f^-1(my) given dm = mx - my; the inverse-side companion of
// preset_diff, used by the quasi-arithmetic mean comparison.
inline double preset_inverse_diff(const FuncPreset& f, double mx, double my, double dm) {
  switch (f.kind) {
    case PresetKind::linear:
      return dm / f.p1;
    case PresetKind::power: {
      if (mx < 0.0 || my < 0.0) throw DomainError("power preset not invertible below 0");
      if (my == 0.0 || mx == 0.0) return preset_inverse(f, mx) - preset_inverse(f, my);
      return std::pow(my, 1.0 / f.p1) * std::expm1(std::log1p(dm / my) / f.p1);
    }
    case PresetKind::negexp: {
      double rem = 1.0 - f.p1 * my;
      if (rem <= 0.0 || f.p1 * mx >= 1.0)
        throw DomainError("negexp preset not invertible at or above its bound");
      return -std::log1p(-f.p1 * dm / rem) / f.p1;
    }
    case PresetKind::logistic:
      if (mx <= 0.0 || mx >= 1.0 || my <= 0.0 || my >= 1.0)
        throw DomainError("logistic preset not invertible outside (0,1)");
      return f.p1 * (std::log1p(dm / my) - std::log1p(-dm / (1.0 - mx)));
    case PresetKind::saturating: {
      if (mx < 0.0 || mx >= f.p1 || my < 0.0 || my >= f.p1)
        throw DomainError("saturating preset not invertible outside [0, bound)");
      return f.p2 * f.p1 * dm / ((f.p1 - mx) * (f.p1 - my));
    }
    case PresetKind::geometric:
    case PresetKind::bounded_rational:
      return preset_inverse(f, mx) - preset_inverse(f, my);
  }
  throw DomainError("unknown preset kind");
}

// ---- role checks ----------------------------------------------------------
//
// Each axiology slot imposes its own shape requirements.  These checks are
// static per kind (the catalogue is small enough to reason out by hand):
//   increasing: linear(a>0), power, negexp, logistic, saturating
//   concave on its natural domain: linear, power(p<=1), negexp (all of R),
//     logistic and saturating and power only on x >= 0
//   bounded above: negexp, logistic, saturating

inline bool preset_increasing(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::linear: return f.p1 > 0.0;
    case PresetKind::power:
    case PresetKind::negexp:
    case PresetKind::logistic:
    case PresetKind::saturating: return true;
    case PresetKind::geometric:
    case PresetKind::bounded_rational: return false;
  }
  return false;
}

inline bool preset_bounded_above(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::negexp:
    case PresetKind::logistic:
    case PresetKind::saturating: return true;
    case PresetKind::geometric:
    case PresetKind::bounded_rational: return true;  // decreasing from f(1)
    case PresetKind::linear:
    case PresetKind::power: return false;
  }
  return false;
}

// Concavity on all of R (false means: concave only for non-negative x, or
// not concave at all — callers that stay on x >= 0 use the _nonneg variant).
inline bool preset_concave_everywhere(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::linear:
    case PresetKind::negexp: return true;
    default: return false;
  }
}

inline bool preset_concave_nonneg(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::linear:
    case PresetKind::negexp:
    case PresetKind::logistic:
    case PresetKind::saturating: return true;
    case PresetKind::power: return f.p1 <= 1.0;
    case PresetKind::geometric:
    case PresetKind::bounded_rational: return false;
  }
  return false;
}

// True when the preset is only defined (or only concave) on x >= 0, so the
// caller must keep welfare non-negative.
inline bool preset_needs_nonneg(const FuncPreset& f) {
  switch (f.kind) {
    case PresetKind::power:
    case PresetKind::saturating:
    case PresetKind::logistic: return true;
    default: return false;
  }
}

inline void require_priority_preset(const FuncPreset& f, const char* role) {
  if (!preset_increasing(f) || !preset_concave_nonneg(f))
    throw ValidationError(std::string(role) + ": preset must be strictly increasing and concave");
}

// Size transform for variable-value views: increasing, concave, non-zero.
// Boundedness is required by the convergence theorems, so the limit
// machinery re-checks it; plain evaluation tolerates unbounded g (the
// linear special case collapses VV1 to total utilitarianism).
inline void require_size_preset(const FuncPreset& g) {
  if (!preset_increasing(g) || !preset_concave_nonneg(g))
    throw ValidationError("size preset g: must be strictly increasing and concave on sizes");
}

inline void require_differentiable_increasing(const FuncPreset& f, const char* role) {
  if (!preset_increasing(f))
    throw ValidationError(std::string(role) + ": preset must be strictly increasing");
}

inline void require_rank_preset(const FuncPreset& f) {
  if (f.kind != PresetKind::bounded_rational)
    throw ValidationError("rank preset: expected kind bounded_rational (L + a/k)");
}

}  // namespace popax

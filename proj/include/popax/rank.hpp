#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "popax/population.hpp"
#include "popax/summation.hpp"

namespace popax {
namespace detail {

// H_b - H_a (harmonic numbers), i.e. sum of 1/k for a < k <= b.  Direct
// summation for short spans; Euler–Maclaurin for deep offsets, where the
// direct loop over ~10^9 ranks would be both slow and noisy.
inline double harmonic_diff(std::uint64_t a, std::uint64_t b) {
  if (b <= a) return 0.0;
  if (b - a <= 4096) {
    CompensatedSum s;
    for (std::uint64_t k = b; k > a; --k) s.add(1.0 / static_cast<double>(k));
    return s.value();
  }
  if (a < 2048) return harmonic_diff(a, 2048) + harmonic_diff(2048, b);
  // ln(b/a) + 1/2b - 1/2a - 1/12b^2 + 1/12a^2 + 1/120b^4 - 1/120a^4 + O(a^-6)
  double da = static_cast<double>(a), db = static_cast<double>(b);
  double r = std::log(db / da);
  r += 0.5 / db - 0.5 / da;
  r += -1.0 / (12.0 * db * db) + 1.0 / (12.0 * da * da);
  double a4 = da * da * da * da, b4 = db * db * db * db;
  r += 1.0 / (120.0 * b4) - 1.0 / (120.0 * a4);
  return r;
}

// sum of beta^k over len consecutive ranks starting at s:
// beta^s (1 - beta^len) / (1 - beta).
inline double geometric_run(double beta, double s, double len) {
  return std::pow(beta, s) * -std::expm1(len * std::log(beta)) / (1.0 - beta);
}

// One maximal aligned segment of two ascending rank sequences: ranks
// [k, k+len) hold level *wa on the first side and *wb on the second;
// nullptr marks an exhausted side (size overhang).
template <typename Emit>
inline void walk_aligned(const std::vector<WelfareRun>& a, const std::vector<WelfareRun>& b,
                         Emit&& emit) {
  std::size_t ia = 0, ib = 0;
  std::uint64_t offa = 0, offb = 0, k = 1;
  while (ia < a.size() || ib < b.size()) {
    const Rational* wa = ia < a.size() ? &a[ia].w : nullptr;
    const Rational* wb = ib < b.size() ? &b[ib].w : nullptr;
    std::uint64_t rema = ia < a.size() ? a[ia].n - offa : 0;
    std::uint64_t remb = ib < b.size() ? b[ib].n - offb : 0;
    std::uint64_t len;
    if (wa && wb)
      len = rema < remb ? rema : remb;
    else
      len = wa ? rema : remb;
    emit(k, len, wa, wb);
    k += len;
    if (wa) {
      offa += len;
      if (offa == a[ia].n) ++ia, offa = 0;
    }
    if (wb) {
      offb += len;
      if (offb == b[ib].n) ++ib, offb = 0;
    }
  }
}

// Pad the smaller of two run sequences with extras at level c, keeping the
// ascending-run invariant.
inline std::vector<WelfareRun> pad_runs(std::vector<WelfareRun> runs, const Rational& c,
                                        std::uint64_t extra) {
  if (extra == 0) return runs;
  std::vector<WelfareRun> out;
  out.reserve(runs.size() + 1);
  bool placed = false;
  for (auto& r : runs) {
    if (!placed && c < r.w) {
      out.push_back({c, extra});
      placed = true;
    }
    if (r.w == c) {
      r.n += extra;
      placed = true;
    }
    out.push_back(std::move(r));
  }
  if (!placed) out.push_back({c, extra});
  return out;
}

}  // namespace detail
}  // namespace popax

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "popax/errors.hpp"
#include "popax/rational.hpp"

namespace popax {

// One welfare level and how many people sit at it.  Counts are positive
// rationals: fractional counts are meaningful for the averagist and
// additively separable families (and for axiological weights); rank-based
// operations reject them explicitly instead of rounding.
struct Entry {
  Rational w;
  Rational count;
};

// Finitely-supported map welfare -> count.  Anonymous: no individual
// identities, only levels and multiplicities.  Immutable after
// construction; every operation that "modifies" builds a new value, so
// concurrent evaluation needs no locking.
class Population {
 public:
  Population() = default;

  // Merges duplicate welfare keys by summing counts (forgiving ingestion);
  // rejects non-positive counts.
  explicit Population(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.w < b.w; });
    for (auto& e : entries) {
      if (e.count <= 0) throw ValidationError("population counts must be positive");
      if (!entries_.empty() && entries_.back().w == e.w)
        entries_.back().count += e.count;
      else
        entries_.push_back(std::move(e));
    }
    finish();
  }

  static Population single(Rational w, Rational count) {
    if (count <= 0) throw ValidationError("population counts must be positive");
    Population p;
    p.entries_.push_back({std::move(w), std::move(count)});
    p.finish();
    return p;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t levels() const { return entries_.size(); }

  const Rational& size_exact() const { return size_; }
  const Rational& total_exact() const { return total_; }

  const Rational& min_welfare() const {
    require_nonempty("min welfare");
    return entries_.front().w;
  }
  const Rational& max_welfare() const {
    require_nonempty("max welfare");
    return entries_.back().w;
  }

  Rational count_at(const Rational& w) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), w,
                               [](const Entry& e, const Rational& v) { return e.w < v; });
    if (it != entries_.end() && it->w == w) return it->count;
    return Rational(0);
  }

  bool integral_counts() const {
    for (const auto& e : entries_)
      if (!is_integer(e.count)) return false;
    return true;
  }

  bool operator==(const Population& o) const {
    if (entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (entries_[i].w != o.entries_[i].w || entries_[i].count != o.entries_[i].count)
        return false;
    return true;
  }

  // Internal fast path: entries already sorted, unique, positive.
  static Population from_sorted_unchecked(std::vector<Entry> entries) {
    Population p;
    p.entries_ = std::move(entries);
    p.finish();
    return p;
  }

 private:
  void finish() {
    size_ = 0;
    total_ = 0;
    for (const auto& e : entries_) {
      size_ += e.count;
      total_ += e.count * e.w;
    }
  }
  void require_nonempty(const char* what) const {
    if (entries_.empty())
      throw ValidationError(std::string(what) + " undefined for the empty population");
  }

  std::vector<Entry> entries_;
  Rational size_;
  Rational total_;
};

struct PopulationSummary {
  double size;
  double total;
  double average;
};

// Average is converted from the exact quotient total/size in one rounding,
// which makes it exactly invariant under replication of the population.
inline PopulationSummary summarize(const Population& x) {
  if (x.empty()) throw ValidationError("average undefined for the empty population");
  return {to_double(x.size_exact()), to_double(x.total_exact()),
          to_double(Rational(x.total_exact() / x.size_exact()))};
}

// Disjoint union: counts add level-wise.
inline Population add(const Population& x, const Population& y) {
  std::vector<Entry> merged;
  merged.reserve(x.levels() + y.levels());
  auto ix = x.entries().begin(), ex = x.entries().end();
  auto iy = y.entries().begin(), ey = y.entries().end();
  while (ix != ex || iy != ey) {
    if (iy == ey || (ix != ex && ix->w < iy->w)) {
      merged.push_back(*ix++);
    } else if (ix == ex || iy->w < ix->w) {
      merged.push_back(*iy++);
    } else {
      merged.push_back({ix->w, ix->count + iy->count});
      ++ix, ++iy;
    }
  }
  return Population::from_sorted_unchecked(std::move(merged));
}

inline Population scale(const Population& x, const Rational& n) {
  if (n <= 0) throw ValidationError("scale factor must be positive");
  std::vector<Entry> entries;
  entries.reserve(x.levels());
  for (const auto& e : x.entries()) entries.push_back({e.w, e.count * n});
  return Population::from_sorted_unchecked(std::move(entries));
}

// A population of exact size one.
class Distribution {
 public:
  explicit Distribution(Population p) : p_(std::move(p)) {
    if (p_.empty()) throw ValidationError("distribution undefined for the empty population");
    if (p_.size_exact() != 1)
      throw ValidationError("distribution masses must sum to exactly 1, got " +
                            format_rational(p_.size_exact()));
  }
  const Population& population() const { return p_; }

 private:
  Population p_;
};

inline Distribution distribution(const Population& x) {
  if (x.empty()) throw ValidationError("distribution undefined for the empty population");
  return Distribution(scale(x, Rational(1) / x.size_exact()));
}

// n·D with every count rounded to the nearest integer and the residual
// placed at the modal level, for families that need whole people.  The
// modal level is the largest mass (lowest welfare on ties).
inline Population scale_integral(const Distribution& d, double n) {
  if (!(n > 0.0)) throw ValidationError("scale factor must be positive");
  const auto& entries = d.population().entries();
  Rational nr = rational_from_double(n);
  BigInt target = rational_floor(nr + Rational(1, 2));
  if (target < 1) target = 1;
  std::size_t modal = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].count > entries[modal].count) modal = i;
  std::vector<Entry> out;
  BigInt assigned = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == modal) continue;
    BigInt c = rational_floor(Rational(nr * entries[i].count) + Rational(1, 2));
    if (c > 0) {
      out.push_back({entries[i].w, Rational(c)});
      assigned += c;
    }
  }
  BigInt rest = target - assigned;
  if (rest > 0) out.push_back({entries[modal].w, Rational(rest)});
  if (out.empty()) throw ValidationError("scale too small: rounded background is empty");
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.w < b.w; });
  return Population::from_sorted_unchecked(std::move(out));
}

// Run-length encoding of the ascending welfare sequence ("the k-th worst
// off").  Only defined for whole people.
struct WelfareRun {
  Rational w;
  std::uint64_t n;
};

inline std::vector<WelfareRun> sorted_welfare(const Population& x) {
  std::vector<WelfareRun> runs;
  runs.reserve(x.levels());
  for (const auto& e : x.entries()) {
    if (!is_integer(e.count))
      throw DomainError("rank statistics unavailable: population has fractional counts");
    BigInt c = numerator(e.count);
    if (c > std::numeric_limits<std::uint64_t>::max() / 2)
      throw DomainError("rank statistics unavailable: counts too large to enumerate ranks");
    runs.push_back({e.w, c.convert_to<std::uint64_t>()});
  }
  return runs;
}

// Moves one individual down from `from` by delta and one up from `to` by
// delta: the canonical total-preserving, inequality-reducing transfer.
inline Population pigou_dalton(const Population& x, const Rational& from, const Rational& to,
                               const Rational& delta) {
  if (delta <= 0) throw ValidationError("pigou_dalton: delta must be positive");
  if (!(from > to)) throw ValidationError("pigou_dalton: donor level must exceed recipient level");
  if (x.count_at(from) < 1 || x.count_at(to) < 1)
    throw ValidationError("pigou_dalton: need at least one individual at each of the two levels");
  if (from - delta < to + delta)
    throw ValidationError("pigou_dalton: transfer would push the donor below the recipient");
  std::vector<Entry> entries;
  for (const auto& e : x.entries()) {
    Rational c = e.count;
    if (e.w == from || e.w == to) c -= 1;
    if (c > 0) entries.push_back({e.w, c});
  }
  entries.push_back({from - delta, Rational(1)});
  entries.push_back({to + delta, Rational(1)});
  return Population(std::move(entries));
}

// Nobody in x sits below the worst level that occurs in d.
inline bool is_moderate(const Population& x, const Distribution& d) {
  if (x.empty()) return true;
  return x.min_welfare() >= d.population().min_welfare();
}

// d has a level strictly between every pair of distinct members of w_set,
// one strictly below all of them, and one strictly above all of them.
inline bool covers(const Distribution& d, std::vector<Rational> w_set) {
  if (w_set.empty()) throw ValidationError("covers: the welfare set must be non-empty");
  std::sort(w_set.begin(), w_set.end());
  w_set.erase(std::unique(w_set.begin(), w_set.end()), w_set.end());
  const Population& dp = d.population();
  if (!(dp.min_welfare() < w_set.front())) return false;
  if (!(dp.max_welfare() > w_set.back())) return false;
  const auto& entries = dp.entries();
  for (std::size_t i = 0; i + 1 < w_set.size(); ++i) {
    auto it = std::upper_bound(entries.begin(), entries.end(), w_set[i],
                               [](const Rational& v, const Entry& e) { return v < e.w; });
    if (it == entries.end() || !(it->w < w_set[i + 1])) return false;
  }
  return true;
}

namespace detail {

// x = shared + xr and y = shared + yr with shared = min(x, y) level-wise,
// so xr and yr have disjoint supports.  Comparisons cancel the shared part
// exactly (in rational arithmetic) before any floating-point subtraction.
struct SharedSplit {
  Population shared, xr, yr;
};

inline SharedSplit shared_split(const Population& x, const Population& y) {
  std::vector<Entry> shared, xr, yr;
  auto ix = x.entries().begin(), ex = x.entries().end();
  auto iy = y.entries().begin(), ey = y.entries().end();
  while (ix != ex || iy != ey) {
    if (iy == ey || (ix != ex && ix->w < iy->w)) {
      xr.push_back(*ix++);
    } else if (ix == ex || iy->w < ix->w) {
      yr.push_back(*iy++);
    } else {
      const Rational& m = std::min(ix->count, iy->count);
      if (m > 0) shared.push_back({ix->w, m});
      if (ix->count > m) xr.push_back({ix->w, ix->count - m});
      if (iy->count > m) yr.push_back({iy->w, iy->count - m});
      ++ix, ++iy;
    }
  }
  return {Population::from_sorted_unchecked(std::move(shared)),
          Population::from_sorted_unchecked(std::move(xr)),
          Population::from_sorted_unchecked(std::move(yr))};
}

}  // namespace detail

}  // namespace popax

#pragma once

#include <cmath>

namespace popax {

// Kahan–Babuska–Neumaier compensated accumulator.  Carries the rounding
// error of every addition in a side channel, so high-dynamic-range series
// (geometric rank discounts, pairwise |w-v| sums over 10^20-sized runs)
// keep their low-order bits.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace popax

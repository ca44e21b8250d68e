#pragma once

#include <utility>
#include <vector>

#include "gqam/pwl.hpp"

namespace gqam {

using PointVector = std::vector<Rational>;

// Element of Lambda_n: nonnegative weights with positive sum.
class WeightVector {
 public:
  explicit WeightVector(std::vector<Rational> entries);
  static WeightVector uniform(std::size_t n);

  const std::vector<Rational>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const Rational& total() const { return total_; }

 private:
  std::vector<Rational> entries_;
  Rational total_;
};

// f^(-1)((f(x_1)+...+f(x_n))/n). Exact; the result lies in [min x, max x].
Rational quasi_mean(const MonotonePwl& f, const PointVector& x);

// f^(-1)(sum lambda_i f(x_i) / sum lambda_i). Every coordinate must lie in I,
// including zero-weight ones.
Rational weighted_quasi_mean(const MonotonePwl& f, const PointVector& x,
                             const WeightVector& weights);

// (A_{f_-}(x), A_{f_+}(x)) computed through the one-sided limits; brackets
// quasi_mean(f, x) and equals its coordinatewise directional limits.
std::pair<Rational, Rational> envelope_means(const MonotonePwl& f,
                                             const PointVector& x);

// Recovers the m-variable mean from the n-variable one (m = |x| < n) by
// exact piecewise solving of
//   inf { z : A[n](x_1..x_m, z..z) < z }   and
//   sup { z : A[n](x_1..x_m, z..z) > z };
// both returned components equal quasi_mean(f, x).
std::pair<Rational, Rational> reduce_from_n(const MonotonePwl& f,
                                            const PointVector& x, int n);

}  // namespace gqam

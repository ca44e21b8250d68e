#include "gqam/means.hpp"

#include <algorithm>

#include "gqam/errors.hpp"

namespace gqam {

namespace {

void check_points_in_domain(const MonotonePwl& f, const PointVector& x) {
  for (const Rational& xi : x) {
    if (!f.interval().contains(xi)) {
      throw OutOfDomain("point " + xi.str() + " outside interval " +
                        f.interval().str());
    }
  }
}

}  // namespace

WeightVector::WeightVector(std::vector<Rational> entries)
    : entries_(std::move(entries)), total_(0) {
  if (entries_.empty()) throw EmptyVector("weight vector must be nonempty");
  for (const Rational& w : entries_) {
    if (w.is_negative()) {
      throw WeightViolation("negative weight " + w.str());
    }
    total_ += w;
  }
  if (!total_.is_positive()) {
    throw WeightViolation("weights must have positive sum");
  }
}

WeightVector WeightVector::uniform(std::size_t n) {
  return WeightVector(std::vector<Rational>(n, Rational(1)));
}

Rational quasi_mean(const MonotonePwl& f, const PointVector& x) {
  if (x.empty()) throw EmptyVector("quasi mean of an empty vector");
  check_points_in_domain(f, x);
  Rational sum(0);
  for (const Rational& xi : x) sum += f.eval(xi);
  return f.inverse_value(sum / Rational(static_cast<long>(x.size())));
}

Rational weighted_quasi_mean(const MonotonePwl& f, const PointVector& x,
                             const WeightVector& weights) {
  if (x.empty()) throw EmptyVector("quasi mean of an empty vector");
  if (x.size() != weights.size()) {
    throw LengthMismatch("got " + std::to_string(x.size()) + " points and " +
                         std::to_string(weights.size()) + " weights");
  }
  check_points_in_domain(f, x);
  Rational sum(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!weights[i].is_zero()) sum += weights[i] * f.eval(x[i]);
  }
  return f.inverse_value(sum / weights.total());
}

std::pair<Rational, Rational> envelope_means(const MonotonePwl& f,
                                             const PointVector& x) {
  if (x.empty()) throw EmptyVector("quasi mean of an empty vector");
  check_points_in_domain(f, x);
  Rational lower_sum(0);
  Rational upper_sum(0);
  for (const Rational& xi : x) {
    lower_sum += f.left_limit(xi);
    upper_sum += f.right_limit(xi);
  }
  const Rational count(static_cast<long>(x.size()));
  // (f_-)^(-1) = (f_+)^(-1) = f^(-1), so the inverse of f serves both.
  return {f.inverse_value(lower_sum / count),
          f.inverse_value(upper_sum / count)};
}

std::pair<Rational, Rational> reduce_from_n(const MonotonePwl& f,
                                            const PointVector& x, int n) {
  if (x.empty()) throw EmptyVector("reduce_from_n with an empty vector");
  const int m = static_cast<int>(x.size());
  if (m >= n) {
    throw BadArity("need n > m, got n=" + std::to_string(n) +
                   ", m=" + std::to_string(m));
  }
  check_points_in_domain(f, x);

  Rational sum(0);
  for (const Rational& xi : x) sum += f.eval(xi);
  const Rational target = sum / Rational(m);  // threshold for f(z) on pieces
  const Rational extra(n - m);
  const Rational total(n);

  const auto& segments = f.segments();
  const std::size_t count = segments.size();

  // z* per segment: where the piece's affine extension crosses target.
  auto crossing = [&](const Segment& s) { return s.abscissa_for(target); };

  // Boundary predicate for the strict-less set {z : sum + (n-m) f(z) < n f_-(z)}.
  auto less_at_boundary = [&](const Rational& b) {
    return sum + extra * f.eval(b) < total * f.left_limit(b);
  };
  // Mirror for the strict-greater set against f_+.
  auto greater_at_boundary = [&](const Rational& b) {
    return sum + extra * f.eval(b) > total * f.right_limit(b);
  };

  std::optional<Rational> inf_less;
  for (std::size_t i = 0; i < count && !inf_less; ++i) {
    const Segment& s = segments[i];
    const Rational z = crossing(s);
    if (ExtendedRational(z) < s.to) {
      inf_less = s.from.is_finite() ? max(s.from.finite(), z) : z;
      break;
    }
    if (i + 1 < count) {
      const Rational b = s.to.finite();
      if (less_at_boundary(b)) inf_less = b;
    }
  }

  std::optional<Rational> sup_greater;
  for (std::size_t i = count; i-- > 0 && !sup_greater;) {
    const Segment& s = segments[i];
    const Rational z = crossing(s);
    if (s.from < ExtendedRational(z)) {
      sup_greater = s.to.is_finite() ? min(s.to.finite(), z) : z;
      break;
    }
    if (i > 0) {
      const Rational b = s.from.finite();
      if (greater_at_boundary(b)) sup_greater = b;
    }
  }

  if (!inf_less || !sup_greater) {
    throw Error("internal: reduce_from_n found an empty solution set");
  }
  return {*inf_less, *sup_greater};
}

}  // namespace gqam

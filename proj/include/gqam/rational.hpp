#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace gqam {

// Exact arbitrary-precision rational, always in canonical form
// (positive denominator, gcd(|num|, den) = 1).
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}          // NOLINT: implicit by design
  Rational(long n) : v_(static_cast<long int>(n)) {}  // NOLINT
  Rational(long num, long den);

  // Accepts "p/q" or "n" with optional leading '-'. Throws MalformedSpec.
  static Rational parse(std::string_view text);
  static std::optional<Rational> try_parse(std::string_view text);

  // Canonical "p/q", or "n" when the denominator is 1.
  std::string str() const;
  // Lossy, for diagnostics only.
  double approx() const { return v_.get_d(); }

  std::string numerator_str() const { return v_.get_num().get_str(); }
  std::string denominator_str() const { return v_.get_den().get_str(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_positive() const { return sign() > 0; }
  bool is_negative() const { return sign() < 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_ == b.v_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  // Largest integer <= *this, as an exact Rational.
  Rational floor() const;
  Rational reciprocal() const;

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) {}
  mpq_class v_;
};

inline const Rational& min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}
inline Rational midpoint(const Rational& a, const Rational& b) {
  return (a + b) / Rational(2);
}

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace gqam

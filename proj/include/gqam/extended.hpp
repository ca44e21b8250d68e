#pragma once

#include <compare>
#include <string>

#include "gqam/rational.hpp"

namespace gqam {

// Rational extended with -inf and +inf; totally ordered with
// -inf < every rational < +inf. Carrier for interval endpoints and
// one-sided range limits.
class ExtendedRational {
 public:
  ExtendedRational() : tag_(Tag::kFinite) {}
  ExtendedRational(Rational v) : tag_(Tag::kFinite), value_(std::move(v)) {}  // NOLINT
  ExtendedRational(int v) : ExtendedRational(Rational(v)) {}  // NOLINT

  static ExtendedRational neg_infinity() { return ExtendedRational(Tag::kNegInf); }
  static ExtendedRational pos_infinity() { return ExtendedRational(Tag::kPosInf); }

  bool is_finite() const { return tag_ == Tag::kFinite; }
  bool is_neg_infinity() const { return tag_ == Tag::kNegInf; }
  bool is_pos_infinity() const { return tag_ == Tag::kPosInf; }

  // Throws OutOfDomain when infinite.
  const Rational& finite() const;

  // "-inf", "inf", or the canonical rational form.
  std::string str() const;
  static ExtendedRational parse(std::string_view text);

  friend bool operator==(const ExtendedRational& a, const ExtendedRational& b) {
    if (a.tag_ != b.tag_) return false;
    return a.tag_ != Tag::kFinite || a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtendedRational& a,
                                          const ExtendedRational& b);

 private:
  enum class Tag { kNegInf, kFinite, kPosInf };
  explicit ExtendedRational(Tag t) : tag_(t) {}
  Tag tag_;
  Rational value_;
};

bool operator==(const ExtendedRational& a, const Rational& b);
std::strong_ordering operator<=>(const ExtendedRational& a, const Rational& b);

// Nonempty open interval with extended endpoints; x belongs iff
// left < x < right.
class OpenInterval {
 public:
  OpenInterval(ExtendedRational left, ExtendedRational right);

  const ExtendedRational& left() const { return left_; }
  const ExtendedRational& right() const { return right_; }

  bool contains(const Rational& x) const {
    return left_ < ExtendedRational(x) && ExtendedRational(x) < right_;
  }
  bool bounded() const { return left_.is_finite() && right_.is_finite(); }

  std::string str() const { return "(" + left_.str() + ", " + right_.str() + ")"; }

  friend bool operator==(const OpenInterval&, const OpenInterval&) = default;

 private:
  ExtendedRational left_;
  ExtendedRational right_;
};

}  // namespace gqam

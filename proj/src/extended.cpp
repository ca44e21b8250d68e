#include "gqam/extended.hpp"

#include "gqam/errors.hpp"

namespace gqam {

const Rational& ExtendedRational::finite() const {
  if (tag_ != Tag::kFinite) {
    throw OutOfDomain("expected a finite value, got " + str());
  }
  return value_;
}

std::string ExtendedRational::str() const {
  switch (tag_) {
    case Tag::kNegInf:
      return "-inf";
    case Tag::kPosInf:
      return "inf";
    case Tag::kFinite:
      return value_.str();
  }
  return {};
}

ExtendedRational ExtendedRational::parse(std::string_view text) {
  if (text == "-inf") return neg_infinity();
  if (text == "inf" || text == "+inf") return pos_infinity();
  return ExtendedRational(Rational::parse(text));
}

std::strong_ordering operator<=>(const ExtendedRational& a,
                                 const ExtendedRational& b) {
  auto rank = [](const ExtendedRational& e) {
    return e.is_neg_infinity() ? -1 : e.is_pos_infinity() ? 1 : 0;
  };
  if (rank(a) != rank(b)) return rank(a) <=> rank(b);
  if (!a.is_finite()) return std::strong_ordering::equal;
  return a.value_ <=> b.value_;
}

bool operator==(const ExtendedRational& a, const Rational& b) {
  return a == ExtendedRational(b);
}

std::strong_ordering operator<=>(const ExtendedRational& a, const Rational& b) {
  return a <=> ExtendedRational(b);
}

OpenInterval::OpenInterval(ExtendedRational left, ExtendedRational right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!(left_ < right_)) {
    throw InvariantViolation("interval " + str() + " is empty: left < right required");
  }
}

}  // namespace gqam

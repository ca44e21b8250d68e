#include "gqam/rational.hpp"

#include <cctype>
#include <ostream>

#include "gqam/errors.hpp"

namespace gqam {

namespace {

bool valid_integer_token(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) : v_(0) {
  if (den == 0) throw BadParameters("rational with zero denominator");
  v_ = mpq_class(static_cast<long int>(num), static_cast<long int>(den));
  v_.canonicalize();
}

std::optional<Rational> Rational::try_parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!valid_integer_token(text)) return std::nullopt;
    Rational r;
    r.v_ = mpq_class(mpz_class(std::string(text), 10));
    return r;
  }
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = text.substr(slash + 1);
  if (!valid_integer_token(num) || !valid_integer_token(den)) {
    return std::nullopt;
  }
  mpz_class d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  Rational r;
  r.v_ = mpq_class(mpz_class(std::string(num), 10), d);
  r.v_.canonicalize();
  return r;
}

Rational Rational::parse(std::string_view text) {
  auto r = try_parse(text);
  if (!r) {
    throw MalformedSpec("invalid rational literal: \"" + std::string(text) +
                        "\"");
  }
  return *r;
}

std::string Rational::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw BadParameters("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(),
             v_.get_den().get_mpz_t());
  Rational r;
  r.v_ = mpq_class(q);
  return r;
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw BadParameters("reciprocal of zero");
  Rational r;
  r.v_ = mpq_class(1) / v_;
  return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace gqam

#include "efcake/fraction.hpp"

#include <cctype>

#include "efcake/errors.hpp"

namespace efcake {

Fraction::Fraction(std::int64_t value) : value_(static_cast<long>(value)) {}

Fraction::Fraction(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw RangeError("fraction with zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
  value_.canonicalize();
}

Fraction::Fraction(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

namespace {

mpz_class parse_integer(std::string_view text, std::size_t offset, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && i < text.size() && text[i] == '-') ++i;
  if (i == text.size()) throw ParseError("expected digits", offset + i + 1);
  for (std::size_t k = i; k < text.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
      throw ParseError("unexpected character '" + std::string(1, text[k]) + "'", offset + k + 1);
    }
  }
  return mpz_class(std::string(text));
}

}  // namespace

Fraction Fraction::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Fraction(mpq_class(parse_integer(text, 0, true)));
  mpz_class num = parse_integer(text.substr(0, slash), 0, true);
  mpz_class den = parse_integer(text.substr(slash + 1), slash + 1, false);
  if (den == 0) throw ParseError("zero denominator", slash + 2);
  return Fraction(mpq_class(num, den));
}

std::string Fraction::to_string() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Fraction& Fraction::operator+=(const Fraction& o) {
  value_ += o.value_;
  return *this;
}
Fraction& Fraction::operator-=(const Fraction& o) {
  value_ -= o.value_;
  return *this;
}
Fraction& Fraction::operator*=(const Fraction& o) {
  value_ *= o.value_;
  return *this;
}
Fraction& Fraction::operator/=(const Fraction& o) {
  if (o.is_zero()) throw RangeError("division by zero");
  value_ /= o.value_;
  return *this;
}

Fraction abs(const Fraction& f) { return f.sign() < 0 ? -f : f; }
Fraction min(const Fraction& a, const Fraction& b) { return b < a ? b : a; }
Fraction max(const Fraction& a, const Fraction& b) { return a < b ? b : a; }

}  // namespace efcake

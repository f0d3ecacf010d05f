#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace efcake {

/// Exact rational number, always held in lowest terms with a positive
/// denominator. Backed by GMP so no operation ever rounds.
class Fraction {
 public:
  Fraction() = default;
  Fraction(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Fraction(std::int64_t numerator, std::int64_t denominator);
  explicit Fraction(mpq_class value);

  /// Parses "p/q" or "p" (optional leading '-'). Throws ParseError.
  static Fraction parse(std::string_view text);

  std::string to_string() const;

  mpz_class numerator() const { return value_.get_num(); }
  mpz_class denominator() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }
  double to_double() const { return value_.get_d(); }

  Fraction& operator+=(const Fraction& o);
  Fraction& operator-=(const Fraction& o);
  Fraction& operator*=(const Fraction& o);
  Fraction& operator/=(const Fraction& o);

  friend Fraction operator+(Fraction a, const Fraction& b) { return a += b; }
  friend Fraction operator-(Fraction a, const Fraction& b) { return a -= b; }
  friend Fraction operator*(Fraction a, const Fraction& b) { return a *= b; }
  friend Fraction operator/(Fraction a, const Fraction& b) { return a /= b; }
  friend Fraction operator-(const Fraction& a) { return Fraction(mpq_class(-a.value_)); }

  friend bool operator==(const Fraction& a, const Fraction& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Fraction& a, const Fraction& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.to_string(); }

 private:
  mpq_class value_{0};
};

Fraction abs(const Fraction& f);
Fraction min(const Fraction& a, const Fraction& b);
Fraction max(const Fraction& a, const Fraction& b);

}  // namespace efcake

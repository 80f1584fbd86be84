#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace vspec {

/// Arbitrary-precision rational, always kept in canonical form
/// (gcd-reduced, positive denominator). Every numeric value in the
/// pipeline is one of these; there is no floating point anywhere.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long num) : v_(num) {}
  Rational(long num, unsigned long den);

  /// Parses "p", "-p/q" or an exact decimal like "3.25" / "-0.125".
  static std::optional<Rational> parse(std::string_view text);

  /// Exact decimal parse only: "13.25" -> 53/4. Rejects "1/2".
  static std::optional<Rational> parse_decimal(std::string_view text);

  Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
  Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
  Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
  /// Division by zero is a programming error; callers must guard.
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-v_); }

  bool operator==(const Rational& o) const { return v_ == o.v_; }
  bool operator!=(const Rational& o) const { return v_ != o.v_; }
  bool operator<(const Rational& o) const { return v_ < o.v_; }
  bool operator<=(const Rational& o) const { return v_ <= o.v_; }
  bool operator>(const Rational& o) const { return v_ > o.v_; }
  bool operator>=(const Rational& o) const { return v_ >= o.v_; }

  bool is_zero() const { return v_ == 0; }
  bool is_negative() const { return v_ < 0; }
  bool is_integer() const { return v_.get_den() == 1; }

  std::string numerator_str() const { return v_.get_num().get_str(); }
  std::string denominator_str() const { return v_.get_den().get_str(); }

  /// "p/q" in lowest terms, or just "p" when q == 1.
  std::string to_fraction_string() const;

  /// Finite decimal ("3.25") when the denominator is of the form 2^a·5^b,
  /// otherwise nullopt.
  std::optional<std::string> to_decimal_string() const;

  /// Decimal when finite, fraction otherwise. Used by pretty-printers.
  std::string to_display_string() const;

  std::size_t hash() const;

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace vspec

#include "vspec/rational.hpp"

#include <cctype>
#include <ostream>

namespace vspec {

Rational::Rational(long num, unsigned long den) : v_(num, den) {
  v_.canonicalize();
}

Rational Rational::operator/(const Rational& o) const {
  return Rational(v_ / o.v_);
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

std::optional<Rational> Rational::parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view int_part = dot == std::string_view::npos ? s : s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (!all_digits(int_part)) return std::nullopt;
  if (dot != std::string_view::npos && !all_digits(frac_part)) return std::nullopt;

  mpz_class num(std::string(int_part), 10);
  mpz_class den(1);
  for (char c : frac_part) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  mpq_class q(num, den);
  q.canonicalize();
  if (neg) q = -q;
  return Rational(std::move(q));
}

std::optional<Rational> Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);

  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  bool neg = false;
  if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
    neg = num[0] == '-';
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den)) return std::nullopt;
  mpz_class d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  mpq_class q(mpz_class(std::string(num), 10), d);
  q.canonicalize();
  if (neg) q = -q;
  return Rational(std::move(q));
}

std::string Rational::to_fraction_string() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::optional<std::string> Rational::to_decimal_string() const {
  mpz_class den = v_.get_den();
  // Strip factors of 2 and 5; a finite decimal expansion exists iff
  // nothing else remains.
  int twos = 0, fives = 0;
  mpz_class d = den;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return std::nullopt;

  int digits = std::max(twos, fives);
  mpz_class scale(1);
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class scaled = v_.get_num() * scale / den;

  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  std::string raw = scaled.get_str();
  std::string out;
  if (digits == 0) {
    out = raw;
  } else {
    while (static_cast<int>(raw.size()) <= digits) raw.insert(raw.begin(), '0');
    out = raw.substr(0, raw.size() - digits) + "." + raw.substr(raw.size() - digits);
  }
  return (neg ? "-" : "") + out;
}

std::string Rational::to_display_string() const {
  if (auto d = to_decimal_string()) return *d;
  return to_fraction_string();
}

std::size_t Rational::hash() const {
  std::hash<std::string> h;
  return h(to_fraction_string());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_display_string();
}

}  // namespace vspec

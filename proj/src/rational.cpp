#include "ucfg/rational.hpp"

#include <cctype>

#include "ucfg/error.hpp"

namespace ucfg {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::Parse: return "parse";
    case Errc::Validation: return "validation";
    case Errc::Budget: return "budget";
    case Errc::Ambiguity: return "ambiguity";
    case Errc::Precondition: return "precondition";
    case Errc::Domain: return "domain";
    case Errc::Io: return "io";
    case Errc::Usage: return "usage";
  }
  return "unknown";
}

Error::Error(Errc kind, std::string module, const std::string& message)
    : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw Error(Errc::Parse, "rational", "not a rational literal: '" + std::string(text) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  Integer d{std::string(den)};
  if (d == 0) throw Error(Errc::Parse, "rational", "zero denominator in '" + std::string(text) + "'");
  Rational r(Integer(n), d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int digits) {
  Integer num = value.get_num();
  const Integer& den = value.get_den();
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  Integer whole = num / den;
  Integer rem = num % den;
  out += whole.get_str();
  if (digits <= 0) return out;
  out += '.';
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    Integer digit = rem / den;
    rem %= den;
    out += static_cast<char>('0' + digit.get_ui());
  }
  return out;
}

Integer ipow(const Integer& base, unsigned long exponent) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

Rational rpow(const Rational& base, unsigned long exponent) {
  Rational r(ipow(base.get_num(), exponent), ipow(base.get_den(), exponent));
  r.canonicalize();
  return r;
}

Rational pow2_neg(unsigned long k) {
  return Rational(Integer(1), ipow(Integer(2), k));
}

}  // namespace ucfg

#include "jtsankov/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>

#include "jtsankov/errors.hpp"

namespace jts {

Rational::Rational(long num, long den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

mpz_class to_mpz(std::string_view s) {
  if (!valid_integer(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  if (s[0] == '+') s.remove_prefix(1);
  return mpz_class(std::string(s), 10);
}

}  // namespace

// Accepts "p", "p/q" and plain decimals such as "-0.125".
Rational::Rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    *this = from_parts(text.substr(0, slash), text.substr(slash + 1));
    return;
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    q_ = mpq_class(to_mpz(text));
    return;
  }
  std::string digits(text.substr(0, dot));
  std::string_view frac = text.substr(dot + 1);
  for (char c : frac)
    if (c < '0' || c > '9') throw ParseError("bad decimal: '" + std::string(text) + "'");
  if (digits.empty() || digits == "-" || digits == "+") digits += "0";
  digits += frac;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  q_ = mpq_class(to_mpz(digits), den);
  q_.canonicalize();
}

double Rational::to_double() const {
  const mpz_class& n = q_.get_num();
  const mpz_class& d = q_.get_den();
  // Both parts exact in a double: one correctly rounded division.
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53)
    return n.get_d() / d.get_d();
  mpf_class f(q_, 256);
  mp_exp_t e = 0;
  std::string digits = f.get_str(e, 10, 40);
  if (digits.empty()) return 0.0;
  bool neg = digits[0] == '-';
  if (neg) digits.erase(0, 1);
  std::string text = (neg ? "-0." : "0.") + digits + "e" + std::to_string(e);
  return std::strtod(text.c_str(), nullptr);
}

Rational Rational::from_parts(std::string_view num, std::string_view den) {
  mpz_class d = to_mpz(den);
  if (d == 0) throw DomainError("rational with zero denominator");
  return Rational(mpq_class(to_mpz(num), d));
}

Rational Rational::from_double(double d) {
  if (!std::isfinite(d)) throw DomainError("non-finite value has no rational form");
  return Rational(mpq_class(d));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  q_ /= o.q_;
  return *this;
}

std::string Rational::str() const { return q_.get_str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

Rational pow(const Rational& r, int n) {
  if (n < 0) return pow(Rational(1) / r, -n);
  Rational out(1), base = r;
  while (n) {
    if (n & 1) out *= base;
    base *= base;
    n >>= 1;
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace jts

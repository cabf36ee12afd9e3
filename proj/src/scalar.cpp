#include "jtsankov/scalar.hpp"

#include <charconv>
#include <cstdio>

namespace jts {

std::string Field<double>::str(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Mode parse_mode(std::string_view s) {
  if (s == "rational") return Mode::rational;
  if (s == "float") return Mode::float64;
  throw ParseError("unknown mode '" + std::string(s) + "' (expected rational|float)");
}

const char* mode_name(Mode m) { return m == Mode::rational ? "rational" : "float"; }

Scalar Scalar::parse(std::string_view text, Mode mode) {
  if (mode == Mode::rational) return Scalar(Rational(text));
  std::string s(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) return Scalar(Rational(text).to_double());
  char* end = nullptr;
  double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError("bad number '" + s + "'");
  return Scalar(d);
}

const Rational& Scalar::rational() const {
  if (auto* r = std::get_if<Rational>(&v_)) return *r;
  throw ModeError("float scalar used where a rational is required");
}

double Scalar::to_double() const {
  if (auto* r = std::get_if<Rational>(&v_)) return r->to_double();
  return std::get<double>(v_);
}

std::string Scalar::str() const {
  if (auto* r = std::get_if<Rational>(&v_)) return r->str();
  return Field<double>::str(std::get<double>(v_));
}

bool Scalar::is_zero(double tol) const {
  if (auto* r = std::get_if<Rational>(&v_)) return r->is_zero();
  return Field<double>::is_zero(std::get<double>(v_), tol);
}

namespace {

template <class Op>
Scalar combine(const Scalar& a, const Scalar& b, Op op) {
  if (a.mode() != b.mode()) throw ModeError("mixed rational/float arithmetic");
  if (a.is_rational()) return Scalar(op(a.rational(), b.rational()));
  return Scalar(op(a.to_double(), b.to_double()));
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x + y; });
}
Scalar operator-(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x - y; });
}
Scalar operator*(const Scalar& a, const Scalar& b) {
  return combine(a, b, [](const auto& x, const auto& y) { return x * y; });
}
Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_rational() ? b.rational().is_zero() : b.to_double() == 0.0)
    throw DomainError("division by zero");
  return combine(a, b, [](const auto& x, const auto& y) { return x / y; });
}
Scalar Scalar::operator-() const {
  if (is_rational()) return Scalar(-rational());
  return Scalar(-to_double());
}

}  // namespace jts

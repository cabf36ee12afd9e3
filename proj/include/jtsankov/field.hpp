#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "jtsankov/errors.hpp"
#include "jtsankov/rational.hpp"

namespace jts {

inline constexpr double kDefaultTol = 1e-9;

// Uniform access to the two scalar modes. Rational comparisons are exact and
// ignore the tolerance; double comparisons are relative with unit floor.
template <class T>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static Rational from(const Rational& r) { return r; }
  static bool is_zero(const Rational& v, double = kDefaultTol) { return v.is_zero(); }
  static bool near(const Rational& a, const Rational& b, double = kDefaultTol) { return a == b; }
  static double to_double(const Rational& v) { return v.to_double(); }
  static std::string str(const Rational& v) { return v.str(); }
  static Rational abs(const Rational& v) { return jts::abs(v); }
  static Rational exp(const Rational&) { throw NotExactError("exp in rational mode"); }
  static Rational sin(const Rational&) { throw NotExactError("sin in rational mode"); }
  static Rational cos(const Rational&) { throw NotExactError("cos in rational mode"); }
  static Rational log(const Rational&) { throw NotExactError("log in rational mode"); }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double from(const Rational& r) { return r.to_double(); }
  static bool is_zero(double v, double tol = kDefaultTol) { return std::abs(v) <= tol; }
  static bool near(double a, double b, double tol = kDefaultTol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  }
  static double to_double(double v) { return v; }
  static std::string str(double v);
  static double abs(double v) { return std::abs(v); }
  static double exp(double v) { return std::exp(v); }
  static double sin(double v) { return std::sin(v); }
  static double cos(double v) { return std::cos(v); }
  static double log(double v) {
    if (!(v > 0)) throw DomainError("log of a non-positive value");
    return std::log(v);
  }
};

// Exact zero test, used to skip structurally empty work.
template <class T>
inline bool exactly_zero(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return v.is_zero();
  else
    return v == 0.0;
}

}  // namespace jts

#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "jtsankov/field.hpp"
#include "jtsankov/rational.hpp"

namespace jts {

enum class Mode { rational, float64 };

Mode parse_mode(std::string_view s);
const char* mode_name(Mode m);

// A value in one of the two modes. Arithmetic across modes throws.
class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(Rational r) : v_(std::move(r)) {}
  Scalar(double d) : v_(d) {}
  Scalar(int i) : v_(Rational(i)) {}

  // "p/q", integers and decimals parse as rationals in rational mode.
  static Scalar parse(std::string_view text, Mode mode);

  Mode mode() const { return v_.index() == 0 ? Mode::rational : Mode::float64; }
  bool is_rational() const { return v_.index() == 0; }
  const Rational& rational() const;
  double to_double() const;
  template <class T>
  T as() const;
  std::string str() const;
  bool is_zero(double tol = kDefaultTol) const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }

 private:
  std::variant<Rational, double> v_;
};

template <>
inline Rational Scalar::as<Rational>() const { return rational(); }
template <>
inline double Scalar::as<double>() const { return to_double(); }

}  // namespace jts

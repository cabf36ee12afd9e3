#pragma once

#include <vector>

#include "jtsankov/field.hpp"

namespace jts {

// Dense univariate polynomial, c[k] is the coefficient of t^k.
template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(const T& c) : c_{c} { trim(); }
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
  static Poly affine(const T& c0, const T& c1) { return Poly(std::vector<T>{c0, c1}); }

  const std::vector<T>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_constant() const { return c_.size() <= 1; }
  T constant() const { return c_.empty() ? T(0) : c_[0]; }

  T operator()(const T& t) const {
    T v(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
    return v;
  }
  Poly derivative() const {
    std::vector<T> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * T(static_cast<int>(k)));
    return Poly(std::move(d));
  }
  // Antiderivative vanishing at 0.
  Poly integral() const {
    std::vector<T> d(c_.size() + 1, T(0));
    for (std::size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / T(static_cast<int>(k + 1));
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    Poly p = *this;
    for (auto& x : p.c_) x = -x;
    return p;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (exactly_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const T& s) {
    Poly p = a;
    for (auto& x : p.c_) x *= s;
    p.trim();
    return p;
  }

 private:
  void trim() {
    while (!c_.empty() && exactly_zero(c_.back())) c_.pop_back();
  }
  std::vector<T> c_;
};

}  // namespace jts

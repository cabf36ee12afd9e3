#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "jtsankov/field.hpp"

namespace jts {

// Monomials x^e in `nvars` variables of total degree <= order, graded so that
// every lower-order table is a prefix of a higher one.
class MonomialTable {
 public:
  using Exponent = std::vector<std::uint8_t>;
  struct Term {
    std::uint32_t b, c;
  };
  struct DerivTerm {
    std::uint32_t src, dst, factor;
  };

  static std::shared_ptr<const MonomialTable> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }
  int degree(std::size_t i) const { return degree_[i]; }
  const Exponent& exponent(std::size_t i) const { return exps_[i]; }
  // Number of monomials of degree <= d.
  std::size_t prefix(int d) const { return prefix_[d]; }
  // Throws ArityError if absent.
  std::size_t index(const Exponent& e) const;
  // Pairs (b, c) with x^a * x^b = x^c inside the table.
  const std::vector<Term>& products(std::size_t a) const { return products_[a]; }
  // Terms of d/dx_v mapping into the table of order-1.
  const std::vector<DerivTerm>& derivative_terms(int v) const { return deriv_[v]; }

  MonomialTable(int nvars, int order);

 private:
  std::uint64_t key(const Exponent& e) const;

  int nvars_, order_;
  std::vector<Exponent> exps_;
  std::vector<int> degree_;
  std::vector<std::size_t> prefix_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
  std::vector<std::vector<Term>> products_;
  std::vector<std::vector<DerivTerm>> deriv_;
};

using TablePtr = std::shared_ptr<const MonomialTable>;

// Truncated multivariate Taylor series: c[i] is the Taylor coefficient of
// monomial i, so a mixed partial is c[i] times the exponent factorials.
template <class T>
class Jet {
 public:
  Jet() = default;
  Jet(TablePtr tab, const T& value);
  static Jet variable(TablePtr tab, int var, const T& value);

  const TablePtr& table() const { return tab_; }
  int order() const { return tab_->order(); }
  int nvars() const { return tab_->nvars(); }
  const T& value() const { return c_[0]; }
  const T& coeff(std::size_t i) const { return c_[i]; }
  T& coeff(std::size_t i) { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }
  // Mixed partial derivative with the given exponent.
  T partial(const MonomialTable::Exponent& e) const;
  // Univariate convenience: (f, f', ..., f^(k)) along variable v.
  std::vector<T> derivatives(int v = 0) const;
  bool is_zero(double tol = kDefaultTol) const;
  bool structurally_zero() const;

  Jet d(int v) const;
  Jet truncate(int order) const;
  // Reinterpret in a table with more variables; var i maps to where[i].
  Jet embed(TablePtr target, const std::vector<int>& where) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const T& s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }
  friend Jet operator/(const Jet& a, const Jet& b) { return mul(a, reciprocal(b)); }
  Jet operator-() const;

  static Jet mul(const Jet& a, const Jet& b);
  static Jet reciprocal(const Jet& a);
  // f(u) given f(u0), f'(u0), ... divided by factorials (Taylor coefficients of f at u0).
  static Jet compose_series(const Jet& u, const std::vector<T>& taylor);

 private:
  TablePtr tab_;
  std::vector<T> c_;
};

template <class T>
Jet<T> exp(const Jet<T>& u);
template <class T>
Jet<T> sin(const Jet<T>& u);
template <class T>
Jet<T> cos(const Jet<T>& u);
template <class T>
Jet<T> log(const Jet<T>& u);
template <class T>
Jet<T> powi(const Jet<T>& u, int n);

}  // namespace jts

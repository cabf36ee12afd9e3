#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jtsankov/jet.hpp"
#include "jtsankov/poly.hpp"
#include "jtsankov/rational.hpp"

namespace jts {

// Immutable expression tree over variables x_0.. with exact constants.
// compose(f, g) evaluates f with its variable 0 bound to g.
class FnExpr {
 public:
  enum class Op { constant, var, add, sub, mul, div, pow, neg, exp, sin, cos, log, compose };

  FnExpr();  // the constant 0
  FnExpr(const Rational& c);
  FnExpr(int c) : FnExpr(Rational(c)) {}

  static FnExpr constant(const Rational& c) { return FnExpr(c); }
  static FnExpr var(int i);
  static FnExpr pow(const FnExpr& base, int n);
  static FnExpr exp(const FnExpr& u);
  static FnExpr sin(const FnExpr& u);
  static FnExpr cos(const FnExpr& u);
  static FnExpr log(const FnExpr& u);
  static FnExpr compose(const FnExpr& outer, const FnExpr& inner);

  friend FnExpr operator+(const FnExpr& a, const FnExpr& b);
  friend FnExpr operator-(const FnExpr& a, const FnExpr& b);
  friend FnExpr operator*(const FnExpr& a, const FnExpr& b);
  friend FnExpr operator/(const FnExpr& a, const FnExpr& b);
  FnExpr operator-() const;

  Op op() const { return n_->op; }
  const Rational& value() const { return n_->value; }
  int index() const { return n_->index; }  // variable index or exponent
  const std::vector<FnExpr>& args() const { return n_->args; }
  bool is_constant() const { return n_->op == Op::constant; }
  bool is_zero() const { return is_constant() && value().is_zero(); }

  // No exp/sin/cos/log anywhere.
  bool rational_closed() const;
  // Largest variable index read, -1 if none.
  int max_var() const;
  std::string str() const;
  FnExpr derivative(int var) const;

  // Generic evaluation; Ops supplies constant/exp/sin/cos/log/powi/div.
  template <class D, class Ops>
  D evaluate(const std::vector<D>& vars, const Ops& ops) const;

  template <class T>
  T eval(const std::vector<T>& x) const;

 private:
  struct Node {
    Op op;
    Rational value;
    int index = 0;
    std::vector<FnExpr> args;
  };
  explicit FnExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static FnExpr make(Op op, std::vector<FnExpr> args, int index = 0);

  std::shared_ptr<const Node> n_;
};

template <class D, class Ops>
D FnExpr::evaluate(const std::vector<D>& vars, const Ops& ops) const {
  switch (op()) {
    case Op::constant:
      return ops.constant(value());
    case Op::var:
      if (index() >= static_cast<int>(vars.size())) throw ArityError("expression variable out of range");
      return vars[index()];
    case Op::add:
      return args()[0].evaluate(vars, ops) + args()[1].evaluate(vars, ops);
    case Op::sub:
      return args()[0].evaluate(vars, ops) - args()[1].evaluate(vars, ops);
    case Op::mul:
      return args()[0].evaluate(vars, ops) * args()[1].evaluate(vars, ops);
    case Op::div:
      return ops.div(args()[0].evaluate(vars, ops), args()[1].evaluate(vars, ops));
    case Op::neg:
      return -args()[0].evaluate(vars, ops);
    case Op::pow:
      return ops.powi(args()[0].evaluate(vars, ops), index());
    case Op::exp:
      return ops.exp(args()[0].evaluate(vars, ops));
    case Op::sin:
      return ops.sin(args()[0].evaluate(vars, ops));
    case Op::cos:
      return ops.cos(args()[0].evaluate(vars, ops));
    case Op::log:
      return ops.log(args()[0].evaluate(vars, ops));
    case Op::compose: {
      std::vector<D> inner{args()[1].evaluate(vars, ops)};
      return args()[0].evaluate(inner, ops);
    }
  }
  throw Error("unreachable expression node");
}

// Plain scalar evaluation.
template <class T>
struct ValueOps {
  T constant(const Rational& r) const { return Field<T>::from(r); }
  T div(const T& a, const T& b) const {
    if (exactly_zero(b)) throw DomainError("division by zero");
    return a / b;
  }
  T powi(const T& a, int n) const {
    if (n < 0) return powi(div(T(1), a), -n);
    T out(1), base = a;
    while (n) {
      if (n & 1) out = out * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return out;
  }
  T exp(const T& a) const { return Field<T>::exp(a); }
  T sin(const T& a) const { return Field<T>::sin(a); }
  T cos(const T& a) const { return Field<T>::cos(a); }
  T log(const T& a) const { return Field<T>::log(a); }
};

template <class T>
struct JetOps {
  TablePtr tab;
  Jet<T> constant(const Rational& r) const { return Jet<T>(tab, Field<T>::from(r)); }
  Jet<T> div(const Jet<T>& a, const Jet<T>& b) const { return a / b; }
  Jet<T> powi(const Jet<T>& a, int n) const { return jts::powi(a, n); }
  Jet<T> exp(const Jet<T>& a) const { return jts::exp(a); }
  Jet<T> sin(const Jet<T>& a) const { return jts::sin(a); }
  Jet<T> cos(const Jet<T>& a) const { return jts::cos(a); }
  Jet<T> log(const Jet<T>& a) const { return jts::log(a); }
};

// Polynomial pullback along a polynomial path; fails on non-polynomial nodes.
template <class T>
struct PolyOps {
  Poly<T> constant(const Rational& r) const { return Poly<T>(Field<T>::from(r)); }
  Poly<T> div(const Poly<T>& a, const Poly<T>& b) const {
    if (!b.is_constant() || exactly_zero(b.constant()))
      throw NotExactError("division by a non-constant polynomial");
    return a * (T(1) / b.constant());
  }
  Poly<T> powi(const Poly<T>& a, int n) const {
    if (n < 0) return powi(div(Poly<T>(T(1)), a), -n);
    Poly<T> out(T(1));
    for (int k = 0; k < n; ++k) out = out * a;
    return out;
  }
  Poly<T> exp(const Poly<T>& a) const { return transcendental(a); }
  Poly<T> sin(const Poly<T>& a) const { return transcendental(a); }
  Poly<T> cos(const Poly<T>& a) const { return transcendental(a); }
  Poly<T> log(const Poly<T>& a) const { return transcendental(a); }

 private:
  static Poly<T> transcendental(const Poly<T>&) {
    throw NotExactError("transcendental node in a polynomial pullback");
  }
};

template <class T>
T FnExpr::eval(const std::vector<T>& x) const {
  return evaluate(x, ValueOps<T>{});
}

// Value and mixed partials of f at p along the variables in dirs, up to total
// order k. Variables not in dirs stay fixed at p.
template <class T>
Jet<T> jet_eval(const FnExpr& f, const std::vector<T>& p, const std::vector<int>& dirs, int k);

}  // namespace jts

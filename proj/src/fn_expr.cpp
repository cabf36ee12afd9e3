#include "jtsankov/fn_expr.hpp"

#include <algorithm>
#include <sstream>

namespace jts {

FnExpr::FnExpr() : FnExpr(Rational(0)) {}

FnExpr::FnExpr(const Rational& c) : n_(std::make_shared<const Node>(Node{Op::constant, c, 0, {}})) {}

FnExpr FnExpr::make(Op op, std::vector<FnExpr> args, int index) {
  return FnExpr(std::make_shared<const Node>(Node{op, Rational(0), index, std::move(args)}));
}

FnExpr FnExpr::var(int i) {
  if (i < 0) throw ArityError("negative variable index");
  return make(Op::var, {}, i);
}

// Constant folding and the 0/1 identities only.
FnExpr operator+(const FnExpr& a, const FnExpr& b) {
  if (a.is_constant() && b.is_constant()) return FnExpr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return FnExpr::make(FnExpr::Op::add, {a, b});
}

FnExpr operator-(const FnExpr& a, const FnExpr& b) {
  if (a.is_constant() && b.is_constant()) return FnExpr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return FnExpr::make(FnExpr::Op::sub, {a, b});
}

FnExpr operator*(const FnExpr& a, const FnExpr& b) {
  if (a.is_constant() && b.is_constant()) return FnExpr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return FnExpr();
  if (a.is_constant() && a.value() == Rational(1)) return b;
  if (b.is_constant() && b.value() == Rational(1)) return a;
  return FnExpr::make(FnExpr::Op::mul, {a, b});
}

FnExpr operator/(const FnExpr& a, const FnExpr& b) {
  if (b.is_zero()) throw DomainError("division by the constant 0");
  if (a.is_constant() && b.is_constant()) return FnExpr(a.value() / b.value());
  if (a.is_zero()) return FnExpr();
  if (b.is_constant() && b.value() == Rational(1)) return a;
  return FnExpr::make(FnExpr::Op::div, {a, b});
}

FnExpr FnExpr::operator-() const {
  if (is_constant()) return FnExpr(-value());
  if (op() == Op::neg) return args()[0];
  return make(Op::neg, {*this});
}

FnExpr FnExpr::pow(const FnExpr& base, int n) {
  if (n == 0) return FnExpr(1);
  if (n == 1) return base;
  if (base.is_constant()) return FnExpr(jts::pow(base.value(), n));
  return make(Op::pow, {base}, n);
}

FnExpr FnExpr::exp(const FnExpr& u) {
  if (u.is_zero()) return FnExpr(1);
  return make(Op::exp, {u});
}
FnExpr FnExpr::sin(const FnExpr& u) {
  if (u.is_zero()) return FnExpr();
  return make(Op::sin, {u});
}
FnExpr FnExpr::cos(const FnExpr& u) {
  if (u.is_zero()) return FnExpr(1);
  return make(Op::cos, {u});
}
FnExpr FnExpr::log(const FnExpr& u) {
  if (u.is_constant() && u.value() == Rational(1)) return FnExpr();
  return make(Op::log, {u});
}

FnExpr FnExpr::compose(const FnExpr& outer, const FnExpr& inner) {
  if (outer.max_var() > 0) throw ArityError("composition needs a univariate outer expression");
  if (outer.is_constant()) return outer;
  if (outer.op() == Op::var) return inner;
  return make(Op::compose, {outer, inner});
}

bool FnExpr::rational_closed() const {
  switch (op()) {
    case Op::exp:
    case Op::sin:
    case Op::cos:
    case Op::log:
      return false;
    default:
      return std::all_of(args().begin(), args().end(), [](const FnExpr& a) { return a.rational_closed(); });
  }
}

int FnExpr::max_var() const {
  if (op() == Op::var) return index();
  if (op() == Op::compose) return args()[1].max_var();
  int m = -1;
  for (const auto& a : args()) m = std::max(m, a.max_var());
  return m;
}

std::string FnExpr::str() const {
  std::ostringstream os;
  switch (op()) {
    case Op::constant:
      os << value();
      break;
    case Op::var:
      os << "x" << index();
      break;
    case Op::add:
      os << "(" << args()[0].str() << " + " << args()[1].str() << ")";
      break;
    case Op::sub:
      os << "(" << args()[0].str() << " - " << args()[1].str() << ")";
      break;
    case Op::mul:
      os << "(" << args()[0].str() << " * " << args()[1].str() << ")";
      break;
    case Op::div:
      os << "(" << args()[0].str() << " / " << args()[1].str() << ")";
      break;
    case Op::neg:
      os << "-" << args()[0].str();
      break;
    case Op::pow:
      os << args()[0].str() << "^" << index();
      break;
    case Op::exp:
      os << "exp(" << args()[0].str() << ")";
      break;
    case Op::sin:
      os << "sin(" << args()[0].str() << ")";
      break;
    case Op::cos:
      os << "cos(" << args()[0].str() << ")";
      break;
    case Op::log:
      os << "log(" << args()[0].str() << ")";
      break;
    case Op::compose:
      os << "[" << args()[0].str() << "](" << args()[1].str() << ")";
      break;
  }
  return os.str();
}

FnExpr FnExpr::derivative(int v) const {
  const auto& a = args();
  switch (op()) {
    case Op::constant:
      return FnExpr();
    case Op::var:
      return FnExpr(index() == v ? 1 : 0);
    case Op::add:
      return a[0].derivative(v) + a[1].derivative(v);
    case Op::sub:
      return a[0].derivative(v) - a[1].derivative(v);
    case Op::mul:
      return a[0].derivative(v) * a[1] + a[0] * a[1].derivative(v);
    case Op::div: {
      FnExpr du = a[0].derivative(v), dw = a[1].derivative(v);
      if (dw.is_zero()) return du / a[1];
      return (du * a[1] - a[0] * dw) / pow(a[1], 2);
    }
    case Op::neg:
      return -a[0].derivative(v);
    case Op::pow:
      return FnExpr(index()) * pow(a[0], index() - 1) * a[0].derivative(v);
    case Op::exp:
      return *this * a[0].derivative(v);
    case Op::sin:
      return cos(a[0]) * a[0].derivative(v);
    case Op::cos:
      return -(sin(a[0]) * a[0].derivative(v));
    case Op::log:
      return a[0].derivative(v) / a[0];
    case Op::compose: {
      FnExpr inner_d = a[1].derivative(v);
      if (inner_d.is_zero()) return FnExpr();
      return compose(a[0].derivative(0), a[1]) * inner_d;
    }
  }
  throw Error("unreachable expression node");
}

template <class T>
Jet<T> jet_eval(const FnExpr& f, const std::vector<T>& p, const std::vector<int>& dirs, int k) {
  if (k < 0) throw ArityError("negative jet order");
  if (dirs.empty()) throw ArityError("jet_eval needs at least one direction");
  auto tab = MonomialTable::get(static_cast<int>(dirs.size()), k);
  std::vector<Jet<T>> vars;
  vars.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) vars.emplace_back(tab, p[i]);
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    if (dirs[d] < 0 || dirs[d] >= static_cast<int>(p.size())) throw ArityError("jet direction out of range");
    vars[dirs[d]] = Jet<T>::variable(tab, static_cast<int>(d), p[dirs[d]]);
  }
  return f.evaluate(vars, JetOps<T>{tab});
}

template Jet<Rational> jet_eval(const FnExpr&, const std::vector<Rational>&, const std::vector<int>&, int);
template Jet<double> jet_eval(const FnExpr&, const std::vector<double>&, const std::vector<int>&, int);

}  // namespace jts

#include "jtsankov/jet.hpp"

#include <map>
#include <mutex>

namespace jts {

namespace {

void enumerate(int nvars, int degree, int var, MonomialTable::Exponent& cur,
               std::vector<MonomialTable::Exponent>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[var] = static_cast<std::uint8_t>(e);
    enumerate(nvars, degree - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

MonomialTable::MonomialTable(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1 || order < 0) throw ArityError("jet table needs nvars >= 1 and order >= 0");
  prefix_.assign(order + 1, 0);
  Exponent cur(nvars, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate(nvars, d, 0, cur, exps_);
    prefix_[d] = exps_.size();
  }
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    int deg = 0;
    for (auto e : exps_[i]) deg += e;
    degree_.push_back(deg);
    lookup_.emplace(key(exps_[i]), static_cast<std::uint32_t>(i));
  }
  products_.resize(exps_.size());
  Exponent sum(nvars);
  for (std::size_t a = 0; a < exps_.size(); ++a) {
    std::size_t nb = prefix_[order - degree_[a]];
    products_[a].reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      for (int v = 0; v < nvars; ++v) sum[v] = exps_[a][v] + exps_[b][v];
      products_[a].push_back({static_cast<std::uint32_t>(b), lookup_.at(key(sum))});
    }
  }
  deriv_.resize(nvars);
  if (order > 0)
    for (int v = 0; v < nvars; ++v)
      for (std::size_t s = 0; s < exps_.size(); ++s) {
        if (exps_[s][v] == 0) continue;
        Exponent e = exps_[s];
        std::uint32_t factor = e[v];
        e[v]--;
        deriv_[v].push_back({static_cast<std::uint32_t>(s), lookup_.at(key(e)), factor});
      }
}

std::uint64_t MonomialTable::key(const Exponent& e) const {
  std::uint64_t k = 0;
  for (auto x : e) k = k * static_cast<std::uint64_t>(order_ + 1) + x;
  return k;
}

std::size_t MonomialTable::index(const Exponent& e) const {
  if (static_cast<int>(e.size()) != nvars_) throw ArityError("exponent length mismatch");
  int deg = 0;
  for (auto x : e) deg += x;
  if (deg > order_) throw ArityError("exponent beyond jet order");
  return lookup_.at(key(e));
}

std::shared_ptr<const MonomialTable> MonomialTable::get(int nvars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const MonomialTable>(nvars, order);
  return slot;
}

template <class T>
Jet<T>::Jet(TablePtr tab, const T& value) : tab_(std::move(tab)), c_(tab_->size(), T(0)) {
  c_[0] = value;
}

template <class T>
Jet<T> Jet<T>::variable(TablePtr tab, int var, const T& value) {
  Jet j(tab, value);
  if (var < 0 || var >= tab->nvars()) throw ArityError("jet variable out of range");
  if (tab->order() >= 1) j.c_[1 + var] = T(1);
  return j;
}

template <class T>
T Jet<T>::partial(const MonomialTable::Exponent& e) const {
  T v = c_[tab_->index(e)];
  for (auto x : e)
    for (int k = 2; k <= x; ++k) v *= T(k);
  return v;
}

template <class T>
std::vector<T> Jet<T>::derivatives(int v) const {
  std::vector<T> out;
  MonomialTable::Exponent e(nvars(), 0);
  for (int k = 0; k <= order(); ++k) {
    e[v] = static_cast<std::uint8_t>(k);
    out.push_back(partial(e));
  }
  return out;
}

template <class T>
bool Jet<T>::is_zero(double tol) const {
  for (const auto& x : c_)
    if (!Field<T>::is_zero(x, tol)) return false;
  return true;
}

template <class T>
bool Jet<T>::structurally_zero() const {
  for (const auto& x : c_)
    if (!exactly_zero(x)) return false;
  return true;
}

template <class T>
Jet<T> Jet<T>::d(int v) const {
  if (order() == 0) throw ArityError("derivative of an order-0 jet");
  Jet out(MonomialTable::get(nvars(), order() - 1), T(0));
  for (const auto& t : tab_->derivative_terms(v))
    if (!exactly_zero(c_[t.src])) out.c_[t.dst] += c_[t.src] * T(static_cast<int>(t.factor));
  return out;
}

template <class T>
Jet<T> Jet<T>::truncate(int order) const {
  if (order >= this->order()) return *this;
  Jet out;
  out.tab_ = MonomialTable::get(nvars(), order);
  out.c_.assign(c_.begin(), c_.begin() + out.tab_->size());
  return out;
}

template <class T>
Jet<T> Jet<T>::embed(TablePtr target, const std::vector<int>& where) const {
  if (static_cast<int>(where.size()) != nvars()) throw ArityError("embedding map length mismatch");
  Jet out(target, T(0));
  MonomialTable::Exponent e(target->nvars(), 0);
  std::size_t limit = tab_->prefix(std::min(order(), target->order()));
  for (std::size_t i = 0; i < limit; ++i) {
    if (exactly_zero(c_[i])) continue;
    std::fill(e.begin(), e.end(), 0);
    const auto& src = tab_->exponent(i);
    for (int v = 0; v < nvars(); ++v) e[where[v]] += src[v];
    out.c_[target->index(e)] += c_[i];
  }
  return out;
}

template <class T>
Jet<T>& Jet<T>::operator+=(const Jet& o) {
  if (tab_ != o.tab_) throw ArityError("jet tables differ");
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!exactly_zero(o.c_[i])) c_[i] += o.c_[i];
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator-=(const Jet& o) {
  if (tab_ != o.tab_) throw ArityError("jet tables differ");
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!exactly_zero(o.c_[i])) c_[i] -= o.c_[i];
  return *this;
}

template <class T>
Jet<T>& Jet<T>::operator*=(const T& s) {
  for (auto& x : c_)
    if (!exactly_zero(x)) x *= s;
  return *this;
}

template <class T>
Jet<T> Jet<T>::operator-() const {
  Jet out = *this;
  for (auto& x : out.c_)
    if (!exactly_zero(x)) x = -x;
  return out;
}

template <class T>
Jet<T> Jet<T>::mul(const Jet& a, const Jet& b) {
  if (a.tab_ != b.tab_) throw ArityError("jet tables differ");
  Jet out(a.tab_, T(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (exactly_zero(a.c_[i])) continue;
    for (const auto& t : a.tab_->products(i))
      if (!exactly_zero(b.c_[t.b])) out.c_[t.c] += a.c_[i] * b.c_[t.b];
  }
  return out;
}

template <class T>
Jet<T> Jet<T>::compose_series(const Jet& u, const std::vector<T>& taylor) {
  Jet h = u;
  h.c_[0] = T(0);
  Jet out(u.tab_, taylor[0]);
  Jet hk(u.tab_, T(1));
  for (int k = 1; k <= u.order() && k < static_cast<int>(taylor.size()); ++k) {
    hk = mul(hk, h);
    if (!exactly_zero(taylor[k])) out += hk * taylor[k];
  }
  return out;
}

template <class T>
Jet<T> Jet<T>::reciprocal(const Jet& a) {
  const T& u0 = a.value();
  if (exactly_zero(u0)) throw DomainError("division by zero");
  std::vector<T> t(a.order() + 1);
  T inv = T(1) / u0, p = inv;
  for (int k = 0; k <= a.order(); ++k) {
    t[k] = (k % 2 == 0) ? p : -p;
    p *= inv;
  }
  return compose_series(a, t);
}

template <class T>
Jet<T> exp(const Jet<T>& u) {
  std::vector<T> t(u.order() + 1);
  T e = Field<T>::exp(u.value());
  T fact(1);
  for (int k = 0; k <= u.order(); ++k) {
    if (k > 0) fact *= T(k);
    t[k] = e / fact;
  }
  return Jet<T>::compose_series(u, t);
}

namespace {

template <class T>
std::vector<T> trig_taylor(const T& s, const T& c, int order, bool is_sin) {
  // derivative cycle of sin: s, c, -s, -c; of cos: c, -s, -c, s
  std::vector<T> cyc = is_sin ? std::vector<T>{s, c, -s, -c} : std::vector<T>{c, -s, -c, s};
  std::vector<T> t(order + 1);
  T fact(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= T(k);
    t[k] = cyc[k % 4] / fact;
  }
  return t;
}

}  // namespace

template <class T>
Jet<T> sin(const Jet<T>& u) {
  T s = Field<T>::sin(u.value()), c = Field<T>::cos(u.value());
  return Jet<T>::compose_series(u, trig_taylor(s, c, u.order(), true));
}

template <class T>
Jet<T> cos(const Jet<T>& u) {
  T s = Field<T>::sin(u.value()), c = Field<T>::cos(u.value());
  return Jet<T>::compose_series(u, trig_taylor(s, c, u.order(), false));
}

template <class T>
Jet<T> log(const Jet<T>& u) {
  std::vector<T> t(u.order() + 1);
  t[0] = Field<T>::log(u.value());
  T inv = T(1) / u.value(), p = inv;
  for (int k = 1; k <= u.order(); ++k) {
    t[k] = p / T(k);
    if (k % 2 == 0) t[k] = -t[k];
    p *= inv;
  }
  return Jet<T>::compose_series(u, t);
}

template <class T>
Jet<T> powi(const Jet<T>& u, int n) {
  if (n < 0) return powi(Jet<T>::reciprocal(u), -n);
  Jet<T> out(u.table(), T(1)), base = u;
  while (n) {
    if (n & 1) out = out * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return out;
}

#define JTS_INSTANTIATE(T)                \
  template class Jet<T>;                  \
  template Jet<T> exp(const Jet<T>&);     \
  template Jet<T> sin(const Jet<T>&);     \
  template Jet<T> cos(const Jet<T>&);     \
  template Jet<T> log(const Jet<T>&);     \
  template Jet<T> powi(const Jet<T>&, int);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

#include "jtsankov/plane_wave.hpp"

#include <array>
#include <numeric>

namespace jts {

PlaneWaveMetric::PlaneWaveMetric(int a, int b, Matrix<Rational> c)
    : a_(a), b_(b), c_(std::move(c)), psi_(static_cast<std::size_t>(a * a * b)) {
  if (a < 1 || b < 0) throw ArityError("plane wave metric needs a >= 1 and b >= 0");
  if (static_cast<int>(c_.rows()) != b || static_cast<int>(c_.cols()) != b)
    throw ArityError("C must be b x b");
  if (!c_.is_symmetric()) throw DomainError("C must be symmetric");
  c_inv_ = b > 0 ? invert_form(c_) : Matrix<Rational>(0, 0);
}

void PlaneWaveMetric::set_psi(int i, int j, int mu, const FnExpr& f) {
  if (i < 0 || j < 0 || i >= a_ || j >= a_ || mu < 0 || mu >= b_) throw ArityError("psi index out of range");
  if (f.max_var() >= a_) throw ArityError("psi may only depend on x_1..x_a");
  psi_[(i * a_ + j) * b_ + mu] = f;
  psi_[(j * a_ + i) * b_ + mu] = f;
}

bool PlaneWaveMetric::rational_closed() const {
  for (const auto& f : psi_)
    if (!f.rational_closed()) return false;
  return true;
}

void PlaneWaveMetric::set_y_labels(std::vector<std::string> names) {
  if (static_cast<int>(names.size()) != b_) throw ArityError("need one label per y coordinate");
  y_labels_ = std::move(names);
}

std::vector<std::string> PlaneWaveMetric::coordinate_labels() const {
  std::vector<std::string> out;
  for (int i = 0; i < a_; ++i) out.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < a_; ++i) out.push_back("xs" + std::to_string(i + 1));
  for (int mu = 0; mu < b_; ++mu)
    out.push_back(y_labels_.empty() ? "y" + std::to_string(mu + 1) : y_labels_[mu]);
  return out;
}

template <class T>
int Frame<T>::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw ArityError("frame has no vector labelled " + label);
}

template <class T>
Frame<T> coordinate_frame(const PlaneWaveMetric& m, const Vec<T>& p) {
  Frame<T> f;
  f.point = p;
  f.labels = m.coordinate_labels();
  for (int c = 0; c < m.dim(); ++c) f.vectors.push_back(unit<T>(m.dim(), c));
  return f;
}

namespace {

template <class T>
void check_point(const PlaneWaveMetric& m, const Vec<T>& p) {
  if (static_cast<int>(p.size()) != m.dim()) throw ArityError("point has the wrong number of coordinates");
}

template <class T>
Vec<T> x_part(const PlaneWaveMetric& m, const Vec<T>& p) {
  return Vec<T>(p.begin(), p.begin() + m.a());
}

// Taylor data of psi and y at a point, in the active variables (x_0.., y_0..).
// The metric never depends on x*, so those directions carry no jet variable.
template <class T>
struct Local {
  const PlaneWaveMetric& m;
  int a, b, n, order;
  TablePtr tab;
  std::vector<Jet<T>> psi;
  std::vector<char> psi_nz;
  std::vector<Jet<T>> y;
  Matrix<T> cinv;

  Local(const PlaneWaveMetric& metric, const Vec<T>& p, int k)
      : m(metric), a(metric.a()), b(metric.b()), n(metric.dim()), order(k) {
    check_point(m, p);
    tab = MonomialTable::get(a + b, k);
    cinv = convert_matrix<T>(m.C_inverse());
    Vec<T> xs = x_part(m, p);
    std::vector<int> dirs(a), where(a);
    std::iota(dirs.begin(), dirs.end(), 0);
    std::iota(where.begin(), where.end(), 0);
    psi.assign(static_cast<std::size_t>(a * a * b), Jet<T>(tab, T(0)));
    psi_nz.assign(psi.size(), 0);
    for (int i = 0; i < a; ++i)
      for (int j = i; j < a; ++j)
        for (int mu = 0; mu < b; ++mu) {
          const FnExpr& f = m.psi(i, j, mu);
          if (f.is_zero()) continue;
          Jet<T> jt = f.is_constant() ? Jet<T>(tab, Field<T>::from(f.value()))
                                      : jet_eval(f, xs, dirs, k).embed(tab, where);
          psi[idx(i, j, mu)] = jt;
          psi[idx(j, i, mu)] = jt;
          psi_nz[idx(i, j, mu)] = psi_nz[idx(j, i, mu)] = 1;
        }
    for (int mu = 0; mu < b; ++mu) y.push_back(Jet<T>::variable(tab, a + mu, p[m.y(mu)]));
  }

  std::size_t idx(int i, int j, int mu) const { return static_cast<std::size_t>((i * a + j) * b + mu); }
  const Jet<T>& ps(int i, int j, int mu) const { return psi[idx(i, j, mu)]; }
  bool nz(int i, int j, int mu) const { return psi_nz[idx(i, j, mu)]; }
  // Active jet variable of a coordinate, -1 for x*.
  int active(int c) const { return c < a ? c : (c < 2 * a ? -1 : c - a); }
  Jet<T> zero(int k) const { return Jet<T>(MonomialTable::get(a + b, k), T(0)); }
  // d psi_{ij mu} / d x_v truncated to order k.
  Jet<T> dpsi(int i, int j, int mu, int v, int k) const { return ps(i, j, mu).d(v).truncate(k); }
};

using Key3 = std::array<int, 3>;

template <class T>
void accumulate(std::map<Key3, Jet<T>>& out, const Key3& key, const Jet<T>& v) {
  if (v.structurally_zero()) return;
  auto it = out.find(key);
  if (it == out.end())
    out.emplace(key, v);
  else
    it->second += v;
}

// Second-kind symbols in closed form, as jets of order k. Needs L.order >= k+1.
template <class T>
std::map<Key3, Jet<T>> gamma_closed(const Local<T>& L, int k) {
  std::map<Key3, Jet<T>> g;
  const PlaneWaveMetric& m = L.m;
  std::vector<Jet<T>> y;
  for (const auto& yj : L.y) y.push_back(yj.truncate(k));
  for (int i = 0; i < L.a; ++i)
    for (int j = 0; j < L.a; ++j) {
      for (int kk = 0; kk < L.a; ++kk) {
        Jet<T> s = L.zero(k);
        for (int mu = 0; mu < L.b; ++mu) {
          Jet<T> t = L.zero(k);
          bool any = false;
          if (L.nz(j, kk, mu)) t += L.dpsi(j, kk, mu, i, k), any = true;
          if (L.nz(i, kk, mu)) t += L.dpsi(i, kk, mu, j, k), any = true;
          if (L.nz(i, j, mu)) t -= L.dpsi(i, j, mu, kk, k), any = true;
          if (any) s += y[mu] * t;
        }
        accumulate(g, {m.x(i), m.x(j), m.xs(kk)}, s);
      }
      for (int mu = 0; mu < L.b; ++mu) {
        Jet<T> s = L.zero(k);
        for (int nu = 0; nu < L.b; ++nu)
          if (L.nz(i, j, nu) && !exactly_zero(L.cinv(mu, nu))) s -= L.ps(i, j, nu).truncate(k) * L.cinv(mu, nu);
        accumulate(g, {m.x(i), m.x(j), m.y(mu)}, s);
      }
    }
  for (int i = 0; i < L.a; ++i)
    for (int nu = 0; nu < L.b; ++nu)
      for (int kk = 0; kk < L.a; ++kk) {
        if (!L.nz(i, kk, nu)) continue;
        Jet<T> s = L.ps(i, kk, nu).truncate(k);
        accumulate(g, {m.x(i), m.y(nu), m.xs(kk)}, s);
        accumulate(g, {m.y(nu), m.x(i), m.xs(kk)}, s);
      }
  return g;
}

template <class T>
using SparseJets = std::map<std::vector<int>, Jet<T>>;

template <class T>
void put(SparseJets<T>& out, std::vector<int> key, const Jet<T>& v) {
  if (v.structurally_zero()) return;
  auto it = out.find(key);
  if (it == out.end())
    out.emplace(std::move(key), v);
  else
    it->second += v;
}

// Closed-form curvature as jets of order k. Needs L.order >= k+2.
template <class T>
SparseJets<T> curvature_closed(const Local<T>& L, int k) {
  const PlaneWaveMetric& m = L.m;
  const int a = L.a, b = L.b;
  SparseJets<T> r;
  // R(x_i, x_j, x_k, y_nu) = -d_i psi_{jk nu} + d_j psi_{ik nu}
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      if (i == j) continue;
      for (int kk = 0; kk < a; ++kk)
        for (int nu = 0; nu < b; ++nu) {
          Jet<T> v = L.zero(k);
          if (L.nz(j, kk, nu)) v -= L.dpsi(j, kk, nu, i, k);
          if (L.nz(i, kk, nu)) v += L.dpsi(i, kk, nu, j, k);
          if (v.structurally_zero()) continue;
          int X = m.x(i), Y = m.x(j), Z = m.x(kk), W = m.y(nu);
          put(r, {X, Y, Z, W}, v);
          put(r, {X, Y, W, Z}, -v);
          put(r, {Z, W, X, Y}, v);
          put(r, {W, Z, X, Y}, -v);
        }
    }
  // C-raised psi: (C psi)_{jl mu} = sum_nu C^{mu nu} psi_{jl nu}
  std::vector<Jet<T>> cpsi(static_cast<std::size_t>(a * a * b), L.zero(k));
  std::vector<char> cnz(cpsi.size(), 0);
  for (int j = 0; j < a; ++j)
    for (int l = 0; l < a; ++l)
      for (int mu = 0; mu < b; ++mu)
        for (int nu = 0; nu < b; ++nu)
          if (L.nz(j, l, nu) && !exactly_zero(L.cinv(mu, nu))) {
            cpsi[L.idx(j, l, mu)] += L.ps(j, l, nu).truncate(k) * L.cinv(mu, nu);
            cnz[L.idx(j, l, mu)] = 1;
          }
  std::vector<Jet<T>> y;
  for (const auto& yj : L.y) y.push_back(yj.truncate(k));
  auto ddpsi = [&](int i, int j, int mu, int p, int q) { return L.ps(i, j, mu).d(p).d(q).truncate(k); };
  for (int i = 0; i < a; ++i)
    for (int j = i + 1; j < a; ++j)
      for (int kk = 0; kk < a; ++kk)
        for (int l = kk + 1; l < a; ++l) {
          Jet<T> v = L.zero(k);
          for (int mu = 0; mu < b; ++mu) {
            if (L.nz(i, kk, mu) && cnz[L.idx(j, l, mu)])
              v += L.ps(i, kk, mu).truncate(k) * cpsi[L.idx(j, l, mu)];
            if (L.nz(i, l, mu) && cnz[L.idx(j, kk, mu)])
              v -= L.ps(i, l, mu).truncate(k) * cpsi[L.idx(j, kk, mu)];
          }
          for (int nu = 0; nu < b; ++nu) {
            Jet<T> s = L.zero(k);
            bool any = false;
            if (L.nz(j, l, nu)) s += ddpsi(j, l, nu, i, kk), any = true;
            if (L.nz(i, kk, nu)) s += ddpsi(i, kk, nu, j, l), any = true;
            if (L.nz(j, kk, nu)) s -= ddpsi(j, kk, nu, i, l), any = true;
            if (L.nz(i, l, nu)) s -= ddpsi(i, l, nu, j, kk), any = true;
            if (any) v += y[nu] * s;
          }
          if (v.structurally_zero()) continue;
          put(r, {i, j, kk, l}, v);
          put(r, {j, i, kk, l}, -v);
          put(r, {i, j, l, kk}, -v);
          put(r, {j, i, l, kk}, v);
        }
  return r;
}

// One covariant derivative: (nabla_c T)(I) = d_c T(I) - sum_s Gamma[c, i', I_s] T(I with I_s -> i').
template <class T>
SparseJets<T> nabla_step(const Local<T>& L, const SparseJets<T>& t, const std::map<Key3, Jet<T>>& gamma, int k) {
  SparseJets<T> out;
  // Gamma entries grouped by output index.
  std::vector<std::vector<std::pair<std::pair<int, int>, const Jet<T>*>>> by_out(L.n);
  for (const auto& [key, v] : gamma) by_out[key[2]].push_back({{key[0], key[1]}, &v});
  for (const auto& [idx, v] : t) {
    for (int c = 0; c < L.n; ++c) {
      int av = L.active(c);
      if (av < 0) continue;
      std::vector<int> key = idx;
      key.push_back(c);
      Jet<T> d = v.d(av).truncate(k);
      put(out, key, d);
    }
    Jet<T> vt = v.truncate(k);
    for (std::size_t s = 0; s < idx.size(); ++s)
      for (const auto& [ci, g] : by_out[idx[s]]) {
        std::vector<int> key = idx;
        key[s] = ci.second;
        key.push_back(ci.first);
        put(out, key, -(g->truncate(k) * vt));
      }
  }
  return out;
}

template <class T>
CoordTensor<T> values(const SparseJets<T>& s, int dim, int covariant, int derivative) {
  CoordTensor<T> out{dim, covariant, derivative, {}};
  for (const auto& [k, v] : s)
    if (!exactly_zero(v.value())) out.comp.emplace(k, v.value());
  return out;
}

template <class T>
CoordTensor<T> values3(const std::map<Key3, Jet<T>>& s, int dim) {
  CoordTensor<T> out{dim, 3, 0, {}};
  for (const auto& [k, v] : s)
    if (!exactly_zero(v.value())) out.comp.emplace(std::vector<int>(k.begin(), k.end()), v.value());
  return out;
}

}  // namespace

template <class T>
BilinearForm<T> metric_at(const PlaneWaveMetric& m, const Vec<T>& p) {
  check_point(m, p);
  const int a = m.a(), b = m.b(), n = m.dim();
  BilinearForm<T> g(n, n);
  Vec<T> xs = x_part(m, p);
  for (int i = 0; i < a; ++i) {
    for (int j = i; j < a; ++j) {
      T s(0);
      for (int mu = 0; mu < b; ++mu) {
        const FnExpr& f = m.psi(i, j, mu);
        if (f.is_zero() || exactly_zero(p[m.y(mu)])) continue;
        s += p[m.y(mu)] * f.eval(xs);
      }
      g(i, j) = g(j, i) = s * T(2);
    }
    g(m.x(i), m.xs(i)) = g(m.xs(i), m.x(i)) = T(1);
  }
  for (int mu = 0; mu < b; ++mu)
    for (int nu = 0; nu < b; ++nu) g(m.y(mu), m.y(nu)) = Field<T>::from(m.C()(mu, nu));
  return g;
}

template <class T>
CoordTensor<T> christoffel(const PlaneWaveMetric& m, const Vec<T>& p, ChristoffelKind kind) {
  Local<T> L(m, p, 1);
  if (kind == ChristoffelKind::second) return values3(gamma_closed(L, 0), m.dim());
  // First kind: g(nabla_i d_j, d_k).
  std::map<Key3, Jet<T>> g;
  for (int i = 0; i < L.a; ++i)
    for (int j = 0; j < L.a; ++j)
      for (int mu = 0; mu < L.b; ++mu) {
        if (L.nz(i, j, mu)) {
          Jet<T> v = -L.ps(i, j, mu).truncate(0);
          accumulate(g, {m.x(i), m.x(j), m.y(mu)}, v);
          accumulate(g, {m.x(i), m.y(mu), m.x(j)}, -v);
          accumulate(g, {m.y(mu), m.x(i), m.x(j)}, -v);
        }
        for (int kk = 0; kk < L.a; ++kk) {
          Jet<T> t = L.zero(0);
          if (L.nz(j, kk, mu)) t += L.dpsi(j, kk, mu, i, 0);
          if (L.nz(i, kk, mu)) t += L.dpsi(i, kk, mu, j, 0);
          if (L.nz(i, j, mu)) t -= L.dpsi(i, j, mu, kk, 0);
          accumulate(g, {m.x(i), m.x(j), m.x(kk)}, L.y[mu].truncate(0) * t);
        }
      }
  return values3(g, m.dim());
}

template <class T>
CoordTensor<T> curvature_at(const PlaneWaveMetric& m, const Vec<T>& p) {
  Local<T> L(m, p, 2);
  return values(curvature_closed(L, 0), m.dim(), 4, 0);
}

template <class T>
CoordTensor<T> covariant_derivative_R(const PlaneWaveMetric& m, const Vec<T>& p, int k) {
  if (k < 0) throw ArityError("negative covariant derivative order");
  Local<T> L(m, p, k + 2);
  SparseJets<T> t = curvature_closed(L, k);
  if (k > 0) {
    auto gamma = gamma_closed(L, k - 1);
    for (int step = 1; step <= k; ++step) t = nabla_step(L, t, gamma, k - step);
  }
  return values(t, m.dim(), 4, k);
}

namespace {

// Metric jets and the Koszul second-kind symbols as jets of order k.
template <class T>
struct GenericGamma {
  std::vector<std::vector<Jet<T>>> g;
  std::map<Key3, Jet<T>> gamma;
};

template <class T>
GenericGamma<T> generic_gamma(const Local<T>& L, int k) {
  const PlaneWaveMetric& m = L.m;
  const int n = L.n, top = k + 1;
  GenericGamma<T> out;
  out.g.assign(n, std::vector<Jet<T>>(n, L.zero(top)));
  for (int i = 0; i < L.a; ++i) {
    for (int j = 0; j < L.a; ++j) {
      Jet<T> s = L.zero(top);
      for (int mu = 0; mu < L.b; ++mu)
        if (L.nz(i, j, mu)) s += L.y[mu].truncate(top) * L.ps(i, j, mu).truncate(top);
      out.g[m.x(i)][m.x(j)] = s * T(2);
    }
    out.g[m.x(i)][m.xs(i)] = out.g[m.xs(i)][m.x(i)] = Jet<T>(MonomialTable::get(L.a + L.b, top), T(1));
  }
  for (int mu = 0; mu < L.b; ++mu)
    for (int nu = 0; nu < L.b; ++nu)
      out.g[m.y(mu)][m.y(nu)] = Jet<T>(MonomialTable::get(L.a + L.b, top), Field<T>::from(m.C()(mu, nu)));

  // dg[c][i][j] = d_c g_ij, order k.
  auto dg = [&](int c, int i, int j) {
    int av = L.active(c);
    if (av < 0) return L.zero(k);
    return out.g[i][j].d(av).truncate(k);
  };
  // Inverse metric as a series around its value.
  Matrix<T> g0(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g0(i, j) = out.g[i][j].value();
  Matrix<T> h = inverse(g0);
  auto tabk = MonomialTable::get(L.a + L.b, k);
  std::vector<std::vector<Jet<T>>> e(n, std::vector<Jet<T>>(n, L.zero(k)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      e[i][j] = out.g[i][j].truncate(k);
      e[i][j].coeff(0) = T(0);
    }
  std::vector<std::vector<Jet<T>>> ginv(n, std::vector<Jet<T>>(n, L.zero(k))), term = ginv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ginv[i][j] = term[i][j] = Jet<T>(tabk, h(i, j));
  for (int power = 1; power <= k; ++power) {
    // term <- -H E term
    std::vector<std::vector<Jet<T>>> et(n, std::vector<Jet<T>>(n, L.zero(k)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (e[i][l].structurally_zero()) continue;
        for (int j = 0; j < n; ++j)
          if (!term[l][j].structurally_zero()) et[i][j] += e[i][l] * term[l][j];
      }
    std::vector<std::vector<Jet<T>>> next(n, std::vector<Jet<T>>(n, L.zero(k)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (exactly_zero(h(i, l))) continue;
        for (int j = 0; j < n; ++j)
          if (!et[l][j].structurally_zero()) next[i][j] -= et[l][j] * h(i, l);
      }
    term = next;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ginv[i][j] += term[i][j];
  }
  // Koszul: Gamma_{ij,l} = (d_i g_jl + d_j g_il - d_l g_ij) / 2.
  T half = T(1) / T(2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Jet<T>> low(n, L.zero(k));
      bool any = false;
      for (int l = 0; l < n; ++l) {
        low[l] = (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)) * half;
        any = any || !low[l].structurally_zero();
      }
      if (!any) continue;
      for (int mm = 0; mm < n; ++mm) {
        Jet<T> s = L.zero(k);
        for (int l = 0; l < n; ++l)
          if (!low[l].structurally_zero() && !ginv[mm][l].structurally_zero()) s += ginv[mm][l] * low[l];
        accumulate(out.gamma, {i, j, mm}, s);
      }
    }
  return out;
}

}  // namespace

template <class T>
CoordTensor<T> christoffel_generic(const PlaneWaveMetric& m, const Vec<T>& p) {
  Local<T> L(m, p, 1);
  return values3(generic_gamma(L, 0).gamma, m.dim());
}

template <class T>
CoordTensor<T> curvature_generic(const PlaneWaveMetric& m, const Vec<T>& p) {
  Local<T> L(m, p, 2);
  GenericGamma<T> gg = generic_gamma(L, 1);
  const int n = m.dim();
  auto at = [n](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  };
  // w[i,j,k,m]: d_m coefficient of R(d_i,d_j)d_k.
  std::vector<T> w(static_cast<std::size_t>(n) * n * n * n, T(0));
  std::map<Key3, T> g0;
  std::vector<std::vector<std::pair<Key3, T>>> by_mid(n);  // Gamma(i,p,m) indexed by p
  for (const auto& [key, v] : gg.gamma) {
    T val = v.value();
    if (!exactly_zero(val)) {
      g0[key] = val;
      by_mid[key[1]].push_back({key, val});
    }
    for (int c = 0; c < n; ++c) {
      int av = L.active(c);
      if (av < 0) continue;
      T d = v.d(av).value();
      if (exactly_zero(d)) continue;
      // d_c Gamma^m_{jk} with key (j,k,m): +at(c,j,k,m), -at(j,c,k,m)
      w[at(c, key[0], key[1], key[2])] += d;
      w[at(key[0], c, key[1], key[2])] -= d;
    }
  }
  for (const auto& [jk, a1] : g0) {
    // Gamma^p_jk Gamma^m_ip with jk = (j,k,p)
    int j = jk[0], k = jk[1], pp = jk[2];
    for (const auto& [ip, a2] : by_mid[pp]) {
      int i = ip[0], mm = ip[2];
      T prod = a1 * a2;
      w[at(i, j, k, mm)] += prod;  // + Gamma^p_jk Gamma^m_ip
      w[at(j, i, k, mm)] -= prod;  // - Gamma^p_ik Gamma^m_jp with roles swapped
    }
  }
  CoordTensor<T> out{n, 4, 0, {}};
  std::vector<std::vector<T>> g(n, std::vector<T>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = gg.g[i][j].value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int mm = 0; mm < n; ++mm) {
          const T& v = w[at(i, j, k, mm)];
          if (exactly_zero(v)) continue;
          for (int l = 0; l < n; ++l)
            if (!exactly_zero(g[mm][l])) out.comp[{i, j, k, l}] += v * g[mm][l];
        }
  for (auto it = out.comp.begin(); it != out.comp.end();)
    it = exactly_zero(it->second) ? out.comp.erase(it) : std::next(it);
  return out;
}

template <class T>
T contract(const CoordTensor<T>& t, const std::vector<Vec<T>>& vectors) {
  if (static_cast<int>(vectors.size()) != t.arity()) throw ArityError("contraction needs one vector per slot");
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != t.dim) throw ArityError("contraction vector has the wrong dimension");
  T sum(0);
  for (const auto& [idx, v] : t.comp) {
    T term = v;
    for (std::size_t s = 0; s < idx.size() && !exactly_zero(term); ++s) term *= vectors[s][idx[s]];
    sum += term;
  }
  return sum;
}

template <class T>
T contract(const CoordTensor<T>& t, const Frame<T>& f, const std::vector<int>& slots) {
  std::vector<Vec<T>> vs;
  for (int s : slots) {
    if (s < 0 || s >= static_cast<int>(f.vectors.size())) throw ArityError("frame slot out of range");
    vs.push_back(f.vectors[s]);
  }
  return contract(t, vs);
}

template <class T>
CoordTensor<T> to_frame(const CoordTensor<T>& t, const Frame<T>& f) {
  const int nf = static_cast<int>(f.vectors.size());
  std::vector<std::vector<std::pair<int, T>>> uses(t.dim);  // coordinate -> (frame index, component)
  for (int p = 0; p < nf; ++p) {
    if (static_cast<int>(f.vectors[p].size()) != t.dim) throw ArityError("frame vector has the wrong dimension");
    for (int c = 0; c < t.dim; ++c)
      if (!exactly_zero(f.vectors[p][c])) uses[c].push_back({p, f.vectors[p][c]});
  }
  std::map<std::vector<int>, T> cur = t.comp;
  for (int s = 0; s < t.arity(); ++s) {
    std::map<std::vector<int>, T> next;
    for (const auto& [idx, v] : cur)
      for (const auto& [p, coef] : uses[idx[s]]) {
        std::vector<int> key = idx;
        key[s] = p;
        next[key] += v * coef;
      }
    cur.clear();
    for (auto& [k, v] : next)
      if (!exactly_zero(v)) cur.emplace(k, v);
  }
  return CoordTensor<T>{nf, t.covariant, t.derivative, std::move(cur)};
}

#define JTS_INSTANTIATE(T)                                                                          \
  template struct Frame<T>;                                                                         \
  template Frame<T> coordinate_frame(const PlaneWaveMetric&, const Vec<T>&);                        \
  template BilinearForm<T> metric_at(const PlaneWaveMetric&, const Vec<T>&);                        \
  template CoordTensor<T> christoffel(const PlaneWaveMetric&, const Vec<T>&, ChristoffelKind);      \
  template CoordTensor<T> curvature_at(const PlaneWaveMetric&, const Vec<T>&);                      \
  template CoordTensor<T> christoffel_generic(const PlaneWaveMetric&, const Vec<T>&);               \
  template CoordTensor<T> curvature_generic(const PlaneWaveMetric&, const Vec<T>&);                 \
  template CoordTensor<T> covariant_derivative_R(const PlaneWaveMetric&, const Vec<T>&, int);       \
  template T contract(const CoordTensor<T>&, const std::vector<Vec<T>>&);                           \
  template T contract(const CoordTensor<T>&, const Frame<T>&, const std::vector<int>&);             \
  template CoordTensor<T> to_frame(const CoordTensor<T>&, const Frame<T>&);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

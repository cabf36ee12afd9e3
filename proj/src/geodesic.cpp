#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "jtsankov/plane_wave.hpp"

namespace jts {

Quadrature parse_quadrature(const std::string& s) {
  if (s == "exact-poly") return Quadrature::exact_poly;
  if (s == "adaptive") return Quadrature::adaptive;
  throw ParseError("unknown quadrature '" + s + "' (expected exact-poly or adaptive)");
}

std::string quadrature_name(Quadrature q) { return q == Quadrature::exact_poly ? "exact-poly" : "adaptive"; }

namespace {

// Nested Gauss-Kronrod 7/15 on a vector-valued integrand.
constexpr std::array<double, 8> kXk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                       0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                       0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using VecFn = std::function<Vec<double>(double)>;

constexpr double kAbsTol = 1e-12;
constexpr int kMaxDepth = 30;

Vec<double> gk15(const VecFn& f, double lo, double hi, double& err) {
  double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  Vec<double> fc = f(c);
  std::size_t m = fc.size();
  Vec<double> k(m), g(m);
  for (std::size_t i = 0; i < m; ++i) {
    k[i] = kWk[7] * fc[i];
    g[i] = kWg[3] * fc[i];
  }
  for (int j = 0; j < 7; ++j) {
    Vec<double> f1 = f(c - h * kXk[j]), f2 = f(c + h * kXk[j]);
    for (std::size_t i = 0; i < m; ++i) {
      k[i] += kWk[j] * (f1[i] + f2[i]);
      if (j % 2 == 1) g[i] += kWg[j / 2] * (f1[i] + f2[i]);
    }
  }
  err = 0;
  for (std::size_t i = 0; i < m; ++i) {
    k[i] *= h;
    g[i] *= h;
    err = std::max(err, std::abs(k[i] - g[i]));
  }
  return k;
}

Vec<double> integrate(const VecFn& f, double lo, double hi, double tol, int depth = 0) {
  double err;
  Vec<double> v = gk15(f, lo, hi, err);
  double scale = 0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (!std::isfinite(err) || !std::isfinite(scale)) throw QuadratureError("non-finite integrand");
  if (err <= std::max(tol, 1e-15 * scale)) return v;
  if (depth >= kMaxDepth) throw QuadratureError("adaptive quadrature did not converge");
  double mid = 0.5 * (lo + hi);
  Vec<double> a = integrate(f, lo, mid, tol / 2, depth + 1), b = integrate(f, mid, hi, tol / 2, depth + 1);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

// Symbolic pieces of the geodesic sources, fixed for one metric.
struct Sources {
  const PlaneWaveMetric& m;
  int a, b;
  // dpsi[(v*a + ... )]: d psi_{ij mu} / d x_v, indexed ((v*a + i)*a + j)*b + mu
  std::vector<FnExpr> dpsi;

  explicit Sources(const PlaneWaveMetric& metric) : m(metric), a(metric.a()), b(metric.b()) {
    dpsi.resize(static_cast<std::size_t>(a * a * a * b));
    for (int v = 0; v < a; ++v)
      for (int i = 0; i < a; ++i)
        for (int j = i; j < a; ++j)
          for (int mu = 0; mu < b; ++mu) {
            FnExpr d = m.psi(i, j, mu).derivative(v);
            dpsi[((v * a + i) * a + j) * b + mu] = d;
            dpsi[((v * a + j) * a + i) * b + mu] = d;
          }
  }
  const FnExpr& d(int v, int i, int j, int mu) const { return dpsi[((v * a + i) * a + j) * b + mu]; }

  // Evaluate with a generic scalar-like D (value or polynomial in t).
  // ydd_mu = sum C^{mu nu} psi_{ij nu} v_i v_j
  template <class D, class T, class Ops>
  std::vector<D> y_source(const std::vector<D>& x, const Vec<T>& vx, const Ops& ops, const D& zero) const {
    std::vector<D> contracted(b, zero);  // sum_ij psi_{ij nu} v_i v_j
    for (int nu = 0; nu < b; ++nu)
      for (int i = 0; i < a; ++i)
        for (int j = 0; j < a; ++j) {
          const FnExpr& f = m.psi(i, j, nu);
          if (f.is_zero() || exactly_zero(vx[i]) || exactly_zero(vx[j])) continue;
          contracted[nu] = contracted[nu] + f.evaluate(x, ops) * (vx[i] * vx[j]);
        }
    std::vector<D> out(b, zero);
    for (int mu = 0; mu < b; ++mu)
      for (int nu = 0; nu < b; ++nu) {
        T c = Field<T>::from(m.C_inverse()(mu, nu));
        if (!exactly_zero(c)) out[mu] = out[mu] + contracted[nu] * c;
      }
    return out;
  }

  // xsdd_k = -[sum_mu y_mu sum_ij v_i v_j (2 d_i psi_{jk mu} - d_k psi_{ij mu}) + 2 sum_{i nu} psi_{ik nu} v_i yd_nu]
  template <class D, class T, class Ops>
  std::vector<D> xs_source(const std::vector<D>& x, const std::vector<D>& y, const std::vector<D>& yd,
                           const Vec<T>& vx, const Ops& ops, const D& zero) const {
    std::vector<D> out(a, zero);
    for (int k = 0; k < a; ++k) {
      D s = zero;
      for (int mu = 0; mu < b; ++mu) {
        D q = zero;
        for (int i = 0; i < a; ++i)
          for (int j = 0; j < a; ++j) {
            if (exactly_zero(vx[i]) || exactly_zero(vx[j])) continue;
            T w = vx[i] * vx[j];
            const FnExpr& d1 = d(i, j, k, mu);
            if (!d1.is_zero()) q = q + d1.evaluate(x, ops) * (w * T(2));
            const FnExpr& d2 = d(k, i, j, mu);
            if (!d2.is_zero()) q = q - d2.evaluate(x, ops) * w;
          }
        s = s + y[mu] * q;
        for (int i = 0; i < a; ++i) {
          const FnExpr& f = m.psi(i, k, mu);
          if (f.is_zero() || exactly_zero(vx[i])) continue;
          s = s + f.evaluate(x, ops) * yd[mu] * (vx[i] * T(2));
        }
      }
      out[k] = -s;
    }
    return out;
  }
};

template <class T>
void check_inputs(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v) {
  if (static_cast<int>(p.size()) != m.dim() || static_cast<int>(v.size()) != m.dim())
    throw ArityError("geodesic needs a point and a tangent vector of the metric's dimension");
}

template <class T>
GeodesicState<T> exact_state(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t) {
  const int a = m.a(), b = m.b(), n = m.dim();
  Sources src(m);
  PolyOps<T> ops;
  Poly<T> zero;
  std::vector<Poly<T>> x;
  Vec<T> vx(v.begin(), v.begin() + a);
  for (int i = 0; i < a; ++i) x.push_back(Poly<T>::affine(p[m.x(i)], v[m.x(i)]));
  std::vector<Poly<T>> s = src.y_source(x, vx, ops, zero);
  std::vector<Poly<T>> y(b), yd(b);
  for (int mu = 0; mu < b; ++mu) {
    y[mu] = Poly<T>::affine(p[m.y(mu)], v[m.y(mu)]) + s[mu].integral().integral();
    yd[mu] = y[mu].derivative();
  }
  std::vector<Poly<T>> f = src.xs_source(x, y, yd, vx, ops, zero);
  GeodesicState<T> st{Vec<T>(n), Vec<T>(n), Vec<T>(n, T(0))};
  for (int i = 0; i < a; ++i) {
    st.position[m.x(i)] = x[i](t);
    st.velocity[m.x(i)] = v[m.x(i)];
    Poly<T> xs = Poly<T>::affine(p[m.xs(i)], v[m.xs(i)]) + f[i].integral().integral();
    st.position[m.xs(i)] = xs(t);
    st.velocity[m.xs(i)] = xs.derivative()(t);
    st.acceleration[m.xs(i)] = f[i](t);
  }
  for (int mu = 0; mu < b; ++mu) {
    st.position[m.y(mu)] = y[mu](t);
    st.velocity[m.y(mu)] = yd[mu](t);
    st.acceleration[m.y(mu)] = s[mu](t);
  }
  return st;
}

GeodesicState<double> adaptive_state(const PlaneWaveMetric& m, const Vec<double>& p, const Vec<double>& v,
                                     double t) {
  const int a = m.a(), b = m.b(), n = m.dim();
  Sources src(m);
  ValueOps<double> ops;
  Vec<double> vx(v.begin(), v.begin() + a);
  auto xat = [&](double r) {
    std::vector<double> x(a);
    for (int i = 0; i < a; ++i) x[i] = p[m.x(i)] + r * v[m.x(i)];
    return x;
  };
  auto s_at = [&](double r) { return src.y_source(xat(r), vx, ops, 0.0); };
  // y(r) and y'(r) from one vector quadrature of [(r-u) s(u), s(u)].
  auto y_state = [&](double r, Vec<double>& y, Vec<double>& yd) {
    y.assign(b, 0.0);
    yd.assign(b, 0.0);
    for (int mu = 0; mu < b; ++mu) {
      y[mu] = p[m.y(mu)] + r * v[m.y(mu)];
      yd[mu] = v[m.y(mu)];
    }
    if (r == 0.0 || b == 0) return;
    Vec<double> q = integrate(
        [&](double u) {
          Vec<double> s = s_at(u), out(2 * b);
          for (int mu = 0; mu < b; ++mu) {
            out[mu] = (r - u) * s[mu];
            out[b + mu] = s[mu];
          }
          return out;
        },
        0.0, r, kAbsTol);
    for (int mu = 0; mu < b; ++mu) {
      y[mu] += q[mu];
      yd[mu] += q[b + mu];
    }
  };
  auto f_at = [&](double r) {
    Vec<double> y, yd;
    y_state(r, y, yd);
    return src.xs_source(xat(r), y, yd, vx, ops, 0.0);
  };
  GeodesicState<double> st{Vec<double>(n), Vec<double>(n), Vec<double>(n, 0.0)};
  Vec<double> y, yd;
  y_state(t, y, yd);
  Vec<double> s = s_at(t), f = f_at(t);
  Vec<double> q(2 * a, 0.0);
  if (t != 0.0)
    q = integrate(
        [&](double u) {
          Vec<double> fu = f_at(u), out(2 * a);
          for (int k = 0; k < a; ++k) {
            out[k] = (t - u) * fu[k];
            out[a + k] = fu[k];
          }
          return out;
        },
        0.0, t, kAbsTol);
  std::vector<double> x = xat(t);
  for (int i = 0; i < a; ++i) {
    st.position[m.x(i)] = x[i];
    st.velocity[m.x(i)] = v[m.x(i)];
    st.position[m.xs(i)] = p[m.xs(i)] + t * v[m.xs(i)] + q[i];
    st.velocity[m.xs(i)] = v[m.xs(i)] + q[a + i];
    st.acceleration[m.xs(i)] = f[i];
  }
  for (int mu = 0; mu < b; ++mu) {
    st.position[m.y(mu)] = y[mu];
    st.velocity[m.y(mu)] = yd[mu];
    st.acceleration[m.y(mu)] = s[mu];
  }
  return st;
}

}  // namespace

template <class T>
GeodesicState<T> geodesic_state(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t,
                                Quadrature q) {
  check_inputs(m, p, v);
  if (q == Quadrature::exact_poly) return exact_state(m, p, v, t);
  if constexpr (std::is_same_v<T, double>)
    return adaptive_state(m, p, v, t);
  else
    throw ModeError("adaptive quadrature needs float mode");
}

template <class T>
Vec<T> geodesic(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t, Quadrature q) {
  return geodesic_state(m, p, v, t, q).position;
}

template <class T>
Vec<T> geodesic_acceleration(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v) {
  check_inputs(m, p, v);
  CoordTensor<T> g = christoffel(m, p, ChristoffelKind::second);
  Vec<T> out(m.dim(), T(0));
  for (const auto& [idx, val] : g.comp) out[idx[2]] -= val * v[idx[0]] * v[idx[1]];
  return out;
}

template <class T>
T geodesic_residual(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t, Quadrature q) {
  GeodesicState<T> st = geodesic_state(m, p, v, t, q);
  Vec<T> expect = geodesic_acceleration(m, st.position, st.velocity);
  T worst(0);
  for (int c = 0; c < m.dim(); ++c) {
    T d = Field<T>::abs(st.acceleration[c] - expect[c]);
    if (worst < d) worst = d;
  }
  return worst;
}

template <class T>
Vec<T> exp_inverse(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& target, Quadrature q) {
  check_inputs(m, p, target);
  const int a = m.a(), b = m.b();
  Vec<T> v(m.dim(), T(0));
  for (int i = 0; i < a; ++i) v[m.x(i)] = target[m.x(i)] - p[m.x(i)];
  // y(1) = p_y + v_y + (terms in v_x only)
  Vec<T> reach = geodesic(m, p, v, T(1), q);
  for (int mu = 0; mu < b; ++mu) v[m.y(mu)] = target[m.y(mu)] - reach[m.y(mu)];
  // x*(1) = p* + v* + (terms in v_x, v_y only)
  reach = geodesic(m, p, v, T(1), q);
  for (int i = 0; i < a; ++i) v[m.xs(i)] = target[m.xs(i)] - reach[m.xs(i)];
  return v;
}

std::string geodesic_csv(const PlaneWaveMetric& m, const Vec<double>& p, const Vec<double>& v, double t_end,
                         int steps, Quadrature q) {
  if (steps < 1) throw ArityError("a geodesic trace needs at least one step");
  std::ostringstream out;
  out << "t";
  for (const auto& l : m.coordinate_labels()) out << ',' << l;
  out << '\n';
  for (int k = 0; k <= steps; ++k) {
    double t = t_end * k / steps;
    Vec<double> x = geodesic(m, p, v, t, q);
    out << Field<double>::str(t);
    for (double c : x) out << ',' << Field<double>::str(c);
    out << '\n';
  }
  return out.str();
}

#define JTS_INSTANTIATE(T)                                                                                    \
  template GeodesicState<T> geodesic_state(const PlaneWaveMetric&, const Vec<T>&, const Vec<T>&, const T&,   \
                                           Quadrature);                                                       \
  template Vec<T> geodesic(const PlaneWaveMetric&, const Vec<T>&, const Vec<T>&, const T&, Quadrature);       \
  template T geodesic_residual(const PlaneWaveMetric&, const Vec<T>&, const Vec<T>&, const T&, Quadrature);   \
  template Vec<T> exp_inverse(const PlaneWaveMetric&, const Vec<T>&, const Vec<T>&, Quadrature);              \
  template Vec<T> geodesic_acceleration(const PlaneWaveMetric&, const Vec<T>&, const Vec<T>&);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

#include "jtsankov/realizations.hpp"

#include <sstream>

namespace jts {

PhiFamily PhiFamily::identity() {
  PhiFamily f;
  for (auto& p : f.phi) p = FnExpr::var(0);
  return f;
}

const std::vector<std::string>& m14_y_labels() {
  static const std::vector<std::string> names{"y11", "y12", "y21", "y22", "y31", "y32", "y41", "y42"};
  return names;
}

const std::vector<Rational>& default_reciprocal_samples() {
  static const std::vector<Rational> s{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
                                       Rational(1, 3), Rational(1), Rational(2)};
  return s;
}

void check_reciprocal(const PhiFamily& f, const std::vector<Rational>& samples, double tol) {
  for (int i = 1; i <= 3; ++i) {
    const FnExpr& p1 = f.at(i, 1);
    const FnExpr& p2 = f.at(i, 2);
    if (p1.max_var() > 0 || p2.max_var() > 0) throw ArityError("phi functions must be univariate");
    FnExpr prod = p1.derivative(0) * p2.derivative(0);
    for (const auto& t : samples) {
      bool ok;
      std::string got;
      if (prod.rational_closed()) {
        Rational v = prod.eval(std::vector<Rational>{t});
        ok = v == Rational(1);
        got = v.str();
      } else {
        double v = prod.eval(std::vector<double>{t.to_double()});
        ok = Field<double>::near(v, 1.0, tol);
        got = Field<double>::str(v);
      }
      if (!ok)
        throw ConstraintError("phi_" + std::to_string(i) + ",1' phi_" + std::to_string(i) + ",2' = " + got +
                              " at x = " + t.str() + ", expected 1");
    }
  }
}

namespace {

Matrix<Rational> m14_y_form() {
  Matrix<Rational> c(8, 8);
  for (int k = 0; k < 3; ++k) c(2 * k, 2 * k + 1) = c(2 * k + 1, 2 * k) = Rational(1);
  c(6, 6) = c(7, 7) = Rational(-1, 2);
  c(6, 7) = c(7, 6) = Rational(1, 4);
  return c;
}

// y index of beta_{i,j}, 1-based.
constexpr int ybeta(int i, int j) { return 2 * (i - 1) + (j - 1); }

FnExpr on(const FnExpr& phi, int var) { return FnExpr::compose(phi, FnExpr::var(var)); }

PlaneWaveMetric m14_base() {
  PlaneWaveMetric m(3, 8, m14_y_form());
  m.set_y_labels(m14_y_labels());
  FnExpr half(Rational(1, 2));
  m.set_psi(1, 2, ybeta(4, 1), FnExpr::var(0) * half);
  m.set_psi(0, 2, ybeta(4, 2), FnExpr::var(1) * half);
  return m;
}

}  // namespace

PlaneWaveMetric build_M_Phi(const PhiFamily& f, bool check) {
  if (check) check_reciprocal(f, default_reciprocal_samples());
  PlaneWaveMetric m = m14_base();
  // g(dx_1,dx_1) = -2 phi21(x2) y21 - 2 phi31(x3) y31, etc.
  m.set_psi(0, 0, ybeta(2, 1), -on(f.at(2, 1), 1));
  m.set_psi(0, 0, ybeta(3, 1), -on(f.at(3, 1), 2));
  m.set_psi(1, 1, ybeta(3, 2), -on(f.at(3, 2), 2));
  m.set_psi(1, 1, ybeta(1, 2), -on(f.at(1, 2), 0));
  m.set_psi(2, 2, ybeta(1, 1), -on(f.at(1, 1), 0));
  m.set_psi(2, 2, ybeta(2, 2), -on(f.at(2, 2), 1));
  return m;
}

PlaneWaveMetric build_M_A(const AFamily& a) {
  PlaneWaveMetric m = m14_base();
  FnExpr x1 = FnExpr::var(0), x2 = FnExpr::var(1), x3 = FnExpr::var(2);
  auto c = [&](int i, int j) { return FnExpr(a.at(i, j)); };
  auto one_minus = [&](int i, int j) { return FnExpr(Rational(1) - a.at(i, j)); };
  m.set_psi(0, 0, ybeta(2, 1), -(c(2, 1) * x2));
  m.set_psi(0, 0, ybeta(3, 1), -(c(3, 1) * x3));
  m.set_psi(1, 1, ybeta(3, 2), -(c(3, 2) * x3));
  m.set_psi(1, 1, ybeta(1, 2), -(c(1, 2) * x1));
  m.set_psi(2, 2, ybeta(1, 1), -(c(1, 1) * x1));
  m.set_psi(2, 2, ybeta(2, 2), -(c(2, 2) * x2));
  m.set_psi(0, 1, ybeta(2, 1), one_minus(2, 1) * x1);
  m.set_psi(0, 1, ybeta(1, 2), one_minus(1, 2) * x2);
  m.set_psi(1, 2, ybeta(3, 2), one_minus(3, 2) * x2);
  m.set_psi(1, 2, ybeta(2, 2), one_minus(2, 2) * x3);
  m.set_psi(0, 2, ybeta(3, 1), one_minus(3, 1) * x1);
  m.set_psi(0, 2, ybeta(1, 1), one_minus(1, 1) * x3);
  return m;
}

PhiFamily x1_phi_family(const FnExpr& phi11, const FnExpr& phi12) {
  PhiFamily f = PhiFamily::identity();
  f.at(1, 1) = phi11;
  f.at(1, 2) = phi12;
  return f;
}

template <class T>
Frame<T> normalize_basis_0(const PlaneWaveMetric& m, const Vec<T>& p) {
  if (m.a() != 3 || m.b() != 8) throw ArityError("normalized frames need a = 3, b = 8");
  const int n = m.dim();
  CoordTensor<T> r = curvature_at(m, p);
  BilinearForm<T> g = metric_at(m, p);
  auto R = [&](int i, int j, int k, int l) { return r.get({i - 1, j - 1, k - 1, l - 1}); };
  auto e = [&](int c) { return unit<T>(n, c); };
  auto ab = [&](int i) { return e(m.x(i - 1)); };
  auto as = [&](int i) { return e(m.xs(i - 1)); };
  const T half = T(1) / T(2), quarter = T(1) / T(4);

  // (a) rescale beta_{i,j} by the curvature it carries.
  static const int pq[3][2][2] = {{{1, 3}, {1, 2}}, {{2, 1}, {2, 3}}, {{3, 1}, {3, 2}}};
  std::array<Vec<T>, 8> bb;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j) {
      int pp = pq[i - 1][j - 1][0], qq = pq[i - 1][j - 1][1];
      int yc = m.y(ybeta(i, j));
      T s = r.get({pp - 1, qq - 1, qq - 1, yc});
      if (exactly_zero(s))
        throw DomainError("vanishing rescaling coefficient for beta_" + std::to_string(i) + "," +
                          std::to_string(j));
      bb[ybeta(i, j)] = scale(e(yc), T(1) / s);
    }
  bb[ybeta(4, 1)] = e(m.y(ybeta(4, 1)));
  bb[ybeta(4, 2)] = e(m.y(ybeta(4, 2)));
  auto B = [&](int i, int j) { return bb[ybeta(i, j)]; };
  auto axpy = [](Vec<T> v, const T& c, const Vec<T>& w) {
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += c * w[k];
    return v;
  };

  // (b) absorb the x-curvature terms.
  T r1221 = R(1, 2, 2, 1), r2332 = R(2, 3, 3, 2), r1331 = R(1, 3, 3, 1);
  T r1231 = R(1, 2, 3, 1), r2132 = R(2, 1, 3, 2), r3123 = R(3, 1, 2, 3);
  std::array<Vec<T>, 3> at;
  at[0] = axpy(axpy(ab(1), r1231, B(4, 1)), -half * r1221, B(1, 2));
  at[1] = axpy(axpy(ab(2), r2132, B(4, 2)), -half * r2332, B(2, 2));
  at[2] = axpy(axpy(ab(3), T(-2) * r3123, B(4, 1)), -half * r1331, B(3, 1));
  std::array<Vec<T>, 8> beta;
  beta[ybeta(1, 1)] = axpy(B(1, 1), half * r1221, as(1));
  beta[ybeta(1, 2)] = B(1, 2);
  beta[ybeta(2, 1)] = axpy(B(2, 1), half * r2332, as(2));
  beta[ybeta(2, 2)] = B(2, 2);
  beta[ybeta(3, 1)] = B(3, 1);
  beta[ybeta(3, 2)] = axpy(B(3, 2), half * r1331, as(3));
  beta[ybeta(4, 1)] = axpy(axpy(axpy(B(4, 1), half * r1231, as(1)), -quarter * r2132, as(2)), -r3123, as(3));
  beta[ybeta(4, 2)] = axpy(axpy(axpy(B(4, 2), -quarter * r1231, as(1)), half * r2132, as(2)), half * r3123, as(3));

  // (c) kill g(alpha_i, alpha_j).
  Frame<T> f;
  f.point = p;
  f.labels = m14_labels();
  for (int i = 0; i < 3; ++i) {
    Vec<T> v = at[i];
    for (int j = 0; j < 3; ++j) v = axpy(v, -half * form_apply(g, at[i], at[j]), as(j + 1));
    f.vectors.push_back(v);
  }
  for (int i = 1; i <= 3; ++i) f.vectors.push_back(as(i));
  for (const auto& b : beta) f.vectors.push_back(b);
  return f;
}

template <class T>
CheckReport<T> frame_conformance(const PlaneWaveMetric& m, const Frame<T>& f, double tol) {
  CheckReport<T> rep;
  rep.property = "0-model";
  static const Model0<Rational> model = build_M14();
  const int n = model.dim();
  if (static_cast<int>(f.vectors.size()) != n) throw ArityError("frame must have 14 vectors");
  BilinearForm<T> g = metric_at(m, f.point);
  auto mismatch = [&](const std::string& what, std::vector<int> idx, const T& got, const T& want) {
    std::ostringstream s;
    s << what << " = " << Field<T>::str(got) << ", expected " << Field<T>::str(want);
    if (!rep.witness) {
      Witness<T> w;
      w.description = s.str();
      w.indices = std::move(idx);
      w.residual = {got - want};
      rep.witness = std::move(w);
    }
    if (rep.notes.size() < 20) rep.notes.push_back({what, false, s.str()});
    rep.holds = false;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      T got = form_apply(g, f.vectors[i], f.vectors[j]);
      T want = Field<T>::from(model.form()(i, j));
      ++rep.checked;
      if (!Field<T>::near(got, want, tol))
        mismatch("g(" + model.label(i) + "," + model.label(j) + ")", {i, j}, got, want);
    }
  CoordTensor<T> rf = to_frame(curvature_at(m, f.point), f);
  std::map<std::vector<int>, T> want;
  for (const auto& [idx, v] : model.expanded()) want[{idx[0], idx[1], idx[2], idx[3]}] = Field<T>::from(v);
  auto label4 = [&](const std::vector<int>& k) {
    return "R(" + model.label(k[0]) + "," + model.label(k[1]) + "," + model.label(k[2]) + "," +
           model.label(k[3]) + ")";
  };
  for (const auto& [idx, v] : rf.comp) {
    auto it = want.find(idx);
    T w = it == want.end() ? T(0) : it->second;
    ++rep.checked;
    if (!Field<T>::near(v, w, tol)) mismatch(label4(idx), idx, v, w);
  }
  for (const auto& [idx, w] : want)
    if (!rf.comp.count(idx)) {
      ++rep.checked;
      if (!Field<T>::is_zero(w, tol)) mismatch(label4(idx), idx, T(0), w);
    }
  return rep;
}

template <class T>
CheckReport<T> verify_0_model(const PlaneWaveMetric& m, const Vec<T>& p, double tol) {
  Frame<T> f;
  try {
    f = normalize_basis_0(m, p);
  } catch (const DomainError& e) {
    CheckReport<T> rep;
    rep.property = "0-model";
    rep.holds = false;
    rep.notes.push_back({"frame", false, e.what()});
    Witness<T> w;
    w.description = e.what();
    w.residual = {T(1)};
    rep.witness = w;
    return rep;
  }
  return frame_conformance(m, f, tol);
}

template <class T>
CheckReport<T> check_1_normalized(const PlaneWaveMetric& m, const Frame<T>& f, double tol) {
  CheckReport<T> rep = frame_conformance(m, f, tol);
  rep.property = "1-normalized";
  CoordTensor<T> nr = covariant_derivative_R(m, f.point, 1);
  const int b11 = m14_beta(1, 1), b12 = m14_beta(1, 2);
  auto special = [&](int i, int j, int k, int nu, int l) {
    if (l != 0) return false;
    if (nu == b11) return k == 2 && ((i == 0 && j == 2) || (i == 2 && j == 0));
    if (nu == b12) return k == 1 && ((i == 0 && j == 1) || (i == 1 && j == 0));
    return false;
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int nu = 6; nu < 14; ++nu)
          for (int l = 0; l < 3; ++l) {
            T v = contract(nr, f, {i, j, k, nu, l});
            ++rep.checked;
            bool want_nonzero = special(i, j, k, nu, l);
            bool zero = Field<T>::is_zero(v, tol);
            if (want_nonzero == !zero) continue;
            std::string what = "nabla R(" + f.labels[i] + "," + f.labels[j] + "," + f.labels[k] + "," +
                               f.labels[nu] + ";" + f.labels[l] + ")";
            std::string detail = what + " = " + Field<T>::str(v) + (want_nonzero ? ", expected nonzero" : ", expected 0");
            if (!rep.witness) {
              Witness<T> w;
              w.description = detail;
              w.indices = {i, j, k, nu, l};
              w.residual = {v};
              rep.witness = w;
            }
            if (rep.notes.size() < 20) rep.notes.push_back({what, false, detail});
            rep.holds = false;
          }
  return rep;
}

template <class T>
Frame<T> normalize_basis_1(const PlaneWaveMetric& m, const Vec<T>& p, double tol) {
  Frame<T> f = normalize_basis_0(m, p);
  CheckReport<T> rep = check_1_normalized(m, f, tol);
  if (!rep.holds) throw HypothesisError("frame is not 1-normalized: " + rep.witness->description);
  return f;
}

template <class T>
Frame<T> transform_frame(const Frame<T>& f, const LinearMap<T>& t) {
  const std::size_t n = f.vectors.size();
  if (t.rows() != n || t.cols() != n) throw ArityError("transformation size does not match the frame");
  Frame<T> out;
  out.point = f.point;
  out.labels = f.labels;
  for (std::size_t k = 0; k < n; ++k) {
    Vec<T> v(f.vectors[0].size(), T(0));
    for (std::size_t r = 0; r < n; ++r) {
      if (exactly_zero(t(r, k))) continue;
      for (std::size_t c = 0; c < v.size(); ++c) v[c] += t(r, k) * f.vectors[r][c];
    }
    out.vectors.push_back(v);
  }
  return out;
}

XiMode parse_xi_mode(const std::string& s) {
  if (s == "frame") return XiMode::frame;
  if (s == "direct") return XiMode::direct;
  throw ParseError("unknown xi mode '" + s + "' (expected frame or direct)");
}

template <class T>
XiValue<T> xi_from_frame(const PlaneWaveMetric& m, const Frame<T>& f, double tol) {
  CoordTensor<T> n1 = covariant_derivative_R(m, f.point, 1);
  CoordTensor<T> n2 = covariant_derivative_R(m, f.point, 2);
  const int a1 = m14_alpha(1), a2 = m14_alpha(2), a3 = m14_alpha(3);
  const int b11 = m14_beta(1, 1), b12 = m14_beta(1, 2);
  XiValue<T> xi;
  xi.value = T(0);
  xi.mode = XiMode::frame;
  xi.nabla12 = contract(n1, f, {a1, a2, a2, b12, a1});
  xi.nabla11 = contract(n1, f, {a1, a3, a3, b11, a1});
  if (Field<T>::is_zero(xi.nabla12, tol) || Field<T>::is_zero(xi.nabla11, tol))
    throw HypothesisError("a distinguished nabla R contraction vanishes; Xi is undefined");
  xi.q12 = contract(n2, f, {a1, a2, a2, b12, a1, a1}) / (xi.nabla12 * xi.nabla12);
  xi.q11 = contract(n2, f, {a1, a3, a3, b11, a1, a1}) / (xi.nabla11 * xi.nabla11);
  T d = xi.q12 - xi.q11;
  xi.value = d * d / T(4);
  xi.frame = f;
  return xi;
}

template <class T>
XiValue<T> xi_invariant(const PlaneWaveMetric& m, const Vec<T>& p, XiMode mode, double tol) {
  if (mode == XiMode::frame) return xi_from_frame(m, normalize_basis_1(m, p, tol), tol);
  if (m.a() != 3 || m.b() != 8) throw ArityError("Xi needs a = 3, b = 8");
  if (static_cast<int>(p.size()) != m.dim()) throw ArityError("point has the wrong number of coordinates");
  // phi_{1,1}(x_1) = -psi_{33,y11}
  FnExpr phi = -m.psi(2, 2, ybeta(1, 1));
  if (phi.max_var() > 0) throw HypothesisError("phi_{1,1} must depend on x_1 only");
  Vec<T> x(p.begin(), p.begin() + 3);
  std::vector<T> d = jet_eval(phi, x, {0}, 3).derivatives(0);
  if (Field<T>::is_zero(d[2], tol)) throw HypothesisError("phi_{1,1}'' vanishes; Xi is undefined");
  XiValue<T> xi;
  xi.value = T(0);
  xi.mode = XiMode::direct;
  xi.q11 = d[1] * d[3] / (d[2] * d[2]);
  T one_minus = T(1) - xi.q11;
  xi.value = one_minus * one_minus;
  return xi;
}

std::array<Rational, 3> symmetric_space_residuals(const AFamily& a) {
  auto A = [&](int i, int j) { return a.at(i, j); };
  return {A(1, 1) + A(2, 2) + A(3, 1) * A(3, 2) - Rational(2),
          Rational(3) * A(2, 1) + Rational(3) * A(3, 1) + Rational(3) * A(1, 2) * A(1, 1) - Rational(4),
          Rational(3) * A(1, 2) + Rational(3) * A(3, 2) + Rational(3) * A(2, 1) * A(2, 2) - Rational(4)};
}

CheckReport<Rational> symmetric_space_check(const AFamily& a, int points, std::uint64_t seed) {
  CheckReport<Rational> rep;
  rep.property = "locally-symmetric";
  auto res = symmetric_space_residuals(a);
  bool eq = true;
  for (int k = 0; k < 3; ++k) {
    rep.values.push_back({"residual_" + std::to_string(k + 1), res[k]});
    eq = eq && res[k].is_zero();
  }
  PlaneWaveMetric m = build_M_A(a);
  std::mt19937_64 rng(seed);
  Rational worst(0);
  std::optional<Witness<Rational>> first;
  for (int s = 0; s < points; ++s) {
    Vec<Rational> p = random_rational_point(rng, m.dim());
    CoordTensor<Rational> nr = covariant_derivative_R(m, p, 1);
    ++rep.checked;
    for (const auto& [idx, v] : nr.comp) {
      if (abs(v) > worst) worst = abs(v);
      if (!first) {
        Witness<Rational> w;
        auto labels = m.coordinate_labels();
        w.description = "nabla R(" + labels[idx[0]] + "," + labels[idx[1]] + "," + labels[idx[2]] + "," +
                        labels[idx[3]] + ";" + labels[idx[4]] + ") = " + v.str();
        w.indices = idx;
        w.vectors = {p};
        w.residual = {v};
        first = w;
      }
    }
  }
  rep.values.push_back({"max_nabla_R", worst});
  bool flat = worst.is_zero();
  rep.notes.push_back({"equations", eq, eq ? "all three hold" : "residual nonzero"});
  rep.notes.push_back({"nabla R vanishes", flat, flat ? "at every sampled point" : first->description});
  rep.holds = eq && flat;
  if (!rep.holds) {
    if (first) {
      rep.witness = first;
    } else {
      Witness<Rational> w;
      w.description = "parameter equations";
      w.residual = {res[0], res[1], res[2]};
      rep.witness = w;
    }
  }
  return rep;
}

Rational random_rational(std::mt19937_64& rng, int range, int max_den) {
  long long num = static_cast<long long>(rng() % static_cast<std::uint64_t>(2 * range + 1)) - range;
  long long den = 1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(max_den));
  return Rational(num, den);
}

Vec<Rational> random_rational_point(std::mt19937_64& rng, int n, int range, int max_den) {
  Vec<Rational> p;
  for (int i = 0; i < n; ++i) p.push_back(random_rational(rng, range, max_den));
  return p;
}

AFamily random_afamily(std::mt19937_64& rng, bool solvable) {
  AFamily a;
  for (auto& v : a.a) v = random_rational(rng, 3, 3);
  if (!solvable) return a;
  for (;;) {
    a.at(3, 1) = random_rational(rng, 3, 3);
    a.at(3, 2) = random_rational(rng, 3, 3);
    a.at(2, 2) = random_rational(rng, 3, 3);
    a.at(1, 1) = Rational(2) - a.at(2, 2) - a.at(3, 1) * a.at(3, 2);
    // [[3 a11, 3], [3, 3 a22]] (a12, a21) = (4 - 3 a31, 4 - 3 a32)
    Rational det = Rational(9) * a.at(1, 1) * a.at(2, 2) - Rational(9);
    if (det.is_zero()) continue;
    Rational r1 = Rational(4) - Rational(3) * a.at(3, 1), r2 = Rational(4) - Rational(3) * a.at(3, 2);
    a.at(1, 2) = (Rational(3) * a.at(2, 2) * r1 - Rational(3) * r2) / det;
    a.at(2, 1) = (Rational(3) * a.at(1, 1) * r2 - Rational(3) * r1) / det;
    return a;
  }
}

#define JTS_INSTANTIATE(T)                                                                          \
  template Frame<T> normalize_basis_0(const PlaneWaveMetric&, const Vec<T>&);                       \
  template CheckReport<T> frame_conformance(const PlaneWaveMetric&, const Frame<T>&, double);       \
  template CheckReport<T> verify_0_model(const PlaneWaveMetric&, const Vec<T>&, double);            \
  template CheckReport<T> check_1_normalized(const PlaneWaveMetric&, const Frame<T>&, double);      \
  template Frame<T> normalize_basis_1(const PlaneWaveMetric&, const Vec<T>&, double);               \
  template Frame<T> transform_frame(const Frame<T>&, const LinearMap<T>&);                          \
  template XiValue<T> xi_from_frame(const PlaneWaveMetric&, const Frame<T>&, double);               \
  template XiValue<T> xi_invariant(const PlaneWaveMetric&, const Vec<T>&, XiMode, double);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

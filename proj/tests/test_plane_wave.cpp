#include <cmath>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"

using namespace jts;

namespace {

Vec<double> to_d(const Vec<Rational>& v) {
  Vec<double> out;
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

Vec<double> random_point_d(std::mt19937_64& rng, int n, double range = 1.0) {
  std::uniform_real_distribution<double> u(-range, range);
  Vec<double> p(n);
  for (auto& x : p) x = u(rng);
  return p;
}

// First-kind symbols from central differences of the metric.
double koszul_fd(const PlaneWaveMetric& m, const Vec<double>& p, int i, int j, int k) {
  const double h = 1e-5;
  auto dg = [&](int dir, int r, int c) {
    Vec<double> lo = p, hi = p;
    lo[dir] -= h;
    hi[dir] += h;
    return (metric_at(m, hi)(r, c) - metric_at(m, lo)(r, c)) / (2 * h);
  };
  return 0.5 * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));
}

// Classical RK4 on x'' = -Gamma(x', x') with Gamma from the generic oracle path.
std::pair<Vec<double>, Vec<double>> rk4(const PlaneWaveMetric& m, Vec<double> x, Vec<double> v, double t_end,
                                        int steps) {
  const std::size_t n = x.size();
  auto acc = [&](const Vec<double>& p, const Vec<double>& w) {
    auto g = christoffel_generic(m, p);
    Vec<double> a(n, 0.0);
    for (const auto& [k, val] : g.comp) a[k[2]] -= val * w[k[0]] * w[k[1]];
    return a;
  };
  const double h = t_end / steps;
  auto axpy = [&](const Vec<double>& a, double s, const Vec<double>& b) {
    Vec<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int s = 0; s < steps; ++s) {
    auto k1x = v, k1v = acc(x, v);
    auto k2x = axpy(v, h / 2, k1v), k2v = acc(axpy(x, h / 2, k1x), k2x);
    auto k3x = axpy(v, h / 2, k2v), k3v = acc(axpy(x, h / 2, k2x), k3x);
    auto k4x = axpy(v, h, k3v), k4v = acc(axpy(x, h, k3x), k4x);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
      v[i] += h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
  }
  return {x, v};
}

double max_diff(const Vec<double>& a, const Vec<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

PlaneWaveMetric small_metric() {
  // a = 2, b = 1: g(dx1,dx1) = 2 y x2^2.
  PlaneWaveMetric m(2, 1, Matrix<Rational>{{1}});
  m.set_psi(0, 0, 0, FnExpr::pow(FnExpr::var(1), 2));
  return m;
}

}  // namespace

TEST_CASE("vanishing psi is flat") {
  PlaneWaveMetric m(3, 2, Matrix<Rational>{{0, 1}, {1, 0}});
  std::mt19937_64 rng(1);
  auto p = random_rational_point(rng, m.dim());
  CHECK(christoffel(m, p, ChristoffelKind::second).comp.empty());
  CHECK(curvature_at(m, p).comp.empty());
  CHECK(covariant_derivative_R(m, p, 1).comp.empty());
}

TEST_CASE("metric construction errors") {
  CHECK_THROWS_AS(PlaneWaveMetric(2, 2, Matrix<Rational>{{1, 1}, {1, 1}}), DegenerateFormError);
  PlaneWaveMetric m(2, 1, Matrix<Rational>{{1}});
  CHECK_THROWS_AS(m.set_psi(0, 0, 0, FnExpr::var(2)), ArityError);
  CHECK_THROWS_AS(metric_at(m, Vec<Rational>(3, Rational(0))), ArityError);
  CHECK(m.coordinate_labels() == std::vector<std::string>{"x1", "x2", "xs1", "xs2", "y1"});
}

TEST_CASE("metric determinant does not depend on the point") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    auto m = test::random_poly_metric(rng, 3, 4, 3);
    auto d0 = determinant(metric_at(m, Vec<Rational>(m.dim(), Rational(0))));
    CHECK_FALSE(d0.is_zero());
    for (int k = 0; k < 5; ++k) CHECK(determinant(metric_at(m, random_rational_point(rng, m.dim()))) == d0);
  }
}

TEST_CASE("small metric by hand") {
  auto m = small_metric();
  // p = (x1, x2, xs1, xs2, y) = (1, 2, 0, 0, 3).
  Vec<Rational> p{1, 2, 0, 0, 3};
  auto g = metric_at(m, p);
  CHECK(g(0, 0) == Rational(24));
  CHECK(g(0, 2) == Rational(1));
  CHECK(g(4, 4) == Rational(1));
  // g_11 = 2 y x2^2: Gamma_{1 1, 2} = -1/2 d_2 g_11 = -2 y x2, Gamma_{12,1} = 1/2 d_2 g_11 = 2 y x2,
  // Gamma_{11,y} = -1/2 d_y g_11 = -x2^2, Gamma_{1y,1} = x2^2.
  auto c1 = christoffel(m, p, ChristoffelKind::first);
  CHECK(c1.get({0, 0, 1}) == Rational(-12));
  CHECK(c1.get({0, 1, 0}) == Rational(12));
  CHECK(c1.get({1, 0, 0}) == Rational(12));
  CHECK(c1.get({0, 0, 4}) == Rational(-4));
  CHECK(c1.get({0, 4, 0}) == Rational(4));
  // Second kind: raising the x index moves it to x*.
  auto c2 = christoffel(m, p, ChristoffelKind::second);
  CHECK(c2.get({0, 0, 3}) == Rational(-12));
  CHECK(c2.get({0, 1, 2}) == Rational(12));
  CHECK(c2.get({0, 0, 4}) == Rational(-4));
  CHECK(c2.get({0, 4, 2}) == Rational(4));
  // R(d1, d2, d2, d1) = -1/2 d2 d2 g_11 + (Gamma terms vanish) = -2 y = -6.
  auto r = curvature_at(m, p);
  CHECK(r.get({0, 1, 1, 0}) == Rational(-6));
  CHECK(r.get({1, 0, 0, 1}) == Rational(-6));
  CHECK(r.get({0, 1, 0, 1}) == Rational(6));
}

TEST_CASE("closed-form Christoffel symbols against finite differences") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 4; ++t) {
    auto m = test::random_poly_metric(rng, 3, 3, 3);
    auto p = random_point_d(rng, m.dim());
    auto c1 = christoffel(m, p, ChristoffelKind::first);
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double want = koszul_fd(m, p, i, j, k);
          CHECK(std::abs(c1.get({i, j, k}) - want) <= 1e-7 * std::max(1.0, std::abs(want)));
        }
  }
}

TEST_CASE("first and second kind are related by the metric") {
  std::mt19937_64 rng(4);
  auto m = test::random_poly_metric(rng, 3, 4, 2);
  auto p = random_rational_point(rng, m.dim());
  auto g = metric_at(m, p);
  auto c1 = christoffel(m, p, ChristoffelKind::first);
  auto c2 = christoffel(m, p, ChristoffelKind::second);
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Rational s(0);
        for (int l = 0; l < n; ++l) s += c2.get({i, j, l}) * g(l, k);
        CHECK(s == c1.get({i, j, k}));
      }
}

TEST_CASE("closed forms equal the generic oracle in rational mode") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 8; ++t) {
    int a = 1 + t % 3, b = 1 + (t * 3) % 6;
    auto m = test::random_poly_metric(rng, a, b, 3);
    auto p = random_rational_point(rng, m.dim());
    CHECK(test::same_tensor(christoffel(m, p, ChristoffelKind::second), christoffel_generic(m, p)));
    CHECK(test::same_tensor(curvature_at(m, p), curvature_generic(m, p)));
  }
}

TEST_CASE("curvature has the algebraic symmetries and support") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 4; ++t) {
    auto m = test::random_poly_metric(rng, 3, 3, 3);
    auto p = random_rational_point(rng, m.dim());
    auto r = curvature_at(m, p);
    CHECK(validate_curvature_symmetries(test::dense4(r), m.dim()).holds);
    for (const auto& [k, v] : r.comp) {
      int ys = 0;
      for (int s : k) {
        CHECK_FALSE((s >= m.a() && s < 2 * m.a()));  // no x* slot at all
        if (s >= 2 * m.a()) ++ys;
      }
      CHECK(ys <= 1);
    }
  }
}

TEST_CASE("second Bianchi identity") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 3; ++t) {
    auto m = test::random_poly_metric(rng, 3, 2, 3);
    auto p = random_rational_point(rng, m.dim());
    auto nr = covariant_derivative_R(m, p, 1);
    CHECK(nr.covariant == 4);
    CHECK(nr.derivative == 1);
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int v = 0; v < n; ++v)
          for (int k = 0; k < m.a(); ++k)
            for (int l = 0; l < n; ++l) {
              Rational s = nr.get({i, j, k, l, v}) + nr.get({j, v, k, l, i}) + nr.get({v, i, k, l, j});
              CHECK(s == Rational(0));
            }
  }
}

TEST_CASE("covariant derivative against the generic path") {
  // nabla R from finite differences of R plus Gamma corrections, in double.
  std::mt19937_64 rng(8);
  auto m = test::random_poly_metric(rng, 2, 2, 3);
  auto p = random_point_d(rng, m.dim());
  auto nr = covariant_derivative_R(m, p, 1);
  auto g2 = christoffel_generic(m, p);
  const int n = m.dim();
  const double h = 1e-5;
  for (int v = 0; v < n; ++v) {
    Vec<double> lo = p, hi = p;
    lo[v] -= h;
    hi[v] += h;
    auto rl = curvature_generic(m, lo), rh = curvature_generic(m, hi), r0 = curvature_generic(m, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double d = (rh.get({i, j, k, l}) - rl.get({i, j, k, l})) / (2 * h);
            for (int q = 0; q < n; ++q) {
              d -= g2.get({v, i, q}) * r0.get({q, j, k, l});
              d -= g2.get({v, j, q}) * r0.get({i, q, k, l});
              d -= g2.get({v, k, q}) * r0.get({i, j, q, l});
              d -= g2.get({v, l, q}) * r0.get({i, j, k, q});
            }
            CHECK(std::abs(nr.get({i, j, k, l, v}) - d) <= 1e-6 * std::max(1.0, std::abs(d)));
          }
  }
}

TEST_CASE("contraction") {
  auto m = small_metric();
  Vec<Rational> p{1, 2, 0, 0, 3};
  auto r = curvature_at(m, p);
  auto f = coordinate_frame(m, p);
  CHECK(contract(r, f, {0, 1, 1, 0}) == Rational(-6));
  CHECK(f["x1"] == unit<Rational>(5, 0));
  Vec<Rational> u{2, 0, 0, 0, 0}, w{0, 3, 0, 0, 0};
  CHECK(contract(r, {u, w, w, u}) == Rational(-6 * 36));
  CHECK(contract(r, {w, u, w, u}) == Rational(6 * 36));
  CHECK_THROWS_AS(contract(r, {u, w, w}), ArityError);
  auto rf = to_frame(r, f);
  CHECK(test::same_tensor(rf, r));
}

TEST_CASE("geodesic x-components are affine") {
  std::mt19937_64 rng(9);
  auto m = test::random_poly_metric(rng, 3, 3, 2);
  for (int k = 0; k < 5; ++k) {
    auto p = random_rational_point(rng, m.dim(), 2, 2);
    auto v = random_rational_point(rng, m.dim(), 2, 2);
    Rational t = random_rational(rng, 3, 3);
    auto x = geodesic(m, p, v, t, Quadrature::exact_poly);
    for (int i = 0; i < m.a(); ++i) CHECK(x[i] == p[i] + t * v[i]);
    CHECK(geodesic_residual(m, p, v, t, Quadrature::exact_poly) == Rational(0));
    // Initial conditions.
    auto s0 = geodesic_state(m, p, v, Rational(0), Quadrature::exact_poly);
    CHECK(s0.position == p);
    CHECK(s0.velocity == v);
  }
}

TEST_CASE("geodesics against an RK4 integrator") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 3; ++k) {
    auto m = test::random_poly_metric(rng, 2, 2, 2);
    auto p = random_point_d(rng, m.dim(), 0.5), v = random_point_d(rng, m.dim(), 0.5);
    auto [x, w] = rk4(m, p, v, 1.0, 200);
    auto exact = geodesic_state(m, p, v, 1.0, Quadrature::exact_poly);
    auto adapt = geodesic_state(m, p, v, 1.0, Quadrature::adaptive);
    CHECK(max_diff(exact.position, x) < 1e-8);
    CHECK(max_diff(exact.velocity, w) < 1e-8);
    CHECK(max_diff(adapt.position, exact.position) < 1e-10);
    CHECK(geodesic_residual(m, p, v, 1.0, Quadrature::adaptive) < 1e-9);
  }
}

TEST_CASE("exp_inverse inverts the geodesic map") {
  std::mt19937_64 rng(11);
  auto m = test::random_poly_metric(rng, 3, 3, 2);
  for (int k = 0; k < 5; ++k) {
    auto p = random_rational_point(rng, m.dim(), 2, 2);
    auto v = random_rational_point(rng, m.dim(), 2, 2);
    auto target = geodesic(m, p, v, Rational(1), Quadrature::exact_poly);
    CHECK(exp_inverse(m, p, target, Quadrature::exact_poly) == v);
    auto pd = to_d(p), vd = to_d(v);
    auto td = geodesic(m, pd, vd, 1.0, Quadrature::adaptive);
    CHECK(max_diff(exp_inverse(m, pd, td, Quadrature::adaptive), vd) < 1e-9);
  }
  // Flat metric: exp_p(v) = p + v.
  PlaneWaveMetric flat(1, 1, Matrix<Rational>{{1}});
  Vec<Rational> p{1, 2, 3}, q{4, 0, -1};
  CHECK(exp_inverse(flat, p, q, Quadrature::exact_poly) == Vec<Rational>{3, -2, -4});
}

TEST_CASE("exact quadrature refuses transcendental psi") {
  PlaneWaveMetric m(1, 1, Matrix<Rational>{{1}});
  m.set_psi(0, 0, 0, FnExpr::exp(FnExpr::var(0)));
  Vec<double> p{0, 0, 0}, v{1, 0, 0};
  CHECK_THROWS(geodesic(m, p, v, 1.0, Quadrature::exact_poly));
  // x(t) = t, y'' = exp(t): y(1) = e - 2.
  CHECK(std::abs(geodesic(m, p, v, 1.0, Quadrature::adaptive)[2] - (std::exp(1.0) - 2.0)) < 1e-12);
  CHECK_THROWS_AS(parse_quadrature("simpson"), ParseError);
}

TEST_CASE("geodesic CSV") {
  auto m = small_metric();
  std::string csv = geodesic_csv(m, {0, 1, 0, 0, 0}, {1, 0, 0, 0, 0}, 1.0, 4, Quadrature::adaptive);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,x2,xs1,xs2,y1");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

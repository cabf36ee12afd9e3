#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

using namespace jts;

namespace {

// Coordinate indices on the 14-dimensional metrics, 1-based.
int X(int i) { return i - 1; }
int XS(int i) { return 2 + i; }
int Y(int i, int j) { return 6 + 2 * (i - 1) + (j - 1); }

const int a1 = m14_alpha(1), a2 = m14_alpha(2), a3 = m14_alpha(3);
const int b11 = m14_beta(1, 1), b12 = m14_beta(1, 2);

AFamily ones() { return AFamily{}; }

AFamily sym_params() {
  AFamily a;
  a.at(1, 1) = a.at(2, 2) = 1;
  a.at(1, 2) = a.at(2, 1) = Rational(2, 3);
  a.at(3, 1) = a.at(3, 2) = 0;
  return a;
}

PhiFamily exp_family() {
  FnExpr x = FnExpr::var(0);
  return x1_phi_family(FnExpr::exp(x), -FnExpr::exp(-x));
}

// phi_{1,1}' = e^t + e^{2t}, phi_{1,2}' its reciprocal.
PhiFamily e_2e_family() {
  FnExpr x = FnExpr::var(0);
  FnExpr ex = FnExpr::exp(x);
  return x1_phi_family(ex + FnExpr(Rational(1, 2)) * FnExpr::exp(FnExpr(2) * x),
                      -FnExpr::exp(-x) - x + FnExpr::log(FnExpr(1) + ex));
}

Vec<double> random_point_d(std::mt19937_64& rng, int n, double range = 1.0) {
  std::uniform_real_distribution<double> u(-range, range);
  Vec<double> p(n);
  for (auto& x : p) x = u(rng);
  return p;
}

}  // namespace

TEST_CASE("M_Phi metric components") {
  std::mt19937_64 rng(1);
  // Affine reciprocal pairs keep everything rational.
  PhiFamily f;
  for (int i = 1; i <= 3; ++i) {
    Rational c = random_rational(rng, 3, 1);
    if (c.is_zero()) c = 2;
    f.at(i, 1) = FnExpr(c) * FnExpr::var(0) + FnExpr(random_rational(rng));
    f.at(i, 2) = FnExpr(Rational(1) / c) * FnExpr::var(0) + FnExpr(random_rational(rng));
  }
  auto m = build_M_Phi(f);
  for (int k = 0; k < 5; ++k) {
    auto p = random_rational_point(rng, 14);
    auto g = metric_at(m, p);
    auto phi = [&](int i, int j, int var) { return f.at(i, j).eval(std::vector<Rational>{p[X(var)]}); };
    auto y = [&](int i, int j) { return p[Y(i, j)]; };
    CHECK(g(X(1), X(1)) == Rational(-2) * phi(2, 1, 2) * y(2, 1) - Rational(2) * phi(3, 1, 3) * y(3, 1));
    CHECK(g(X(2), X(2)) == Rational(-2) * phi(3, 2, 3) * y(3, 2) - Rational(2) * phi(1, 2, 1) * y(1, 2));
    CHECK(g(X(3), X(3)) == Rational(-2) * phi(1, 1, 1) * y(1, 1) - Rational(2) * phi(2, 2, 2) * y(2, 2));
    CHECK(g(X(2), X(3)) == p[X(1)] * y(4, 1));
    CHECK(g(X(1), X(3)) == p[X(2)] * y(4, 2));
    CHECK(g(X(1), X(2)) == Rational(0));
    for (int i = 1; i <= 3; ++i) {
      CHECK(g(X(i), XS(i)) == Rational(1));
      CHECK(g(Y(i, 1), Y(i, 2)) == Rational(1));
      CHECK(g(Y(i, 1), Y(i, 1)) == Rational(0));
    }
    CHECK(g(Y(4, 1), Y(4, 1)) == Rational(-1, 2));
    CHECK(g(Y(4, 2), Y(4, 2)) == Rational(-1, 2));
    CHECK(g(Y(4, 1), Y(4, 2)) == Rational(1, 4));
  }
  CHECK(m.coordinate_labels()[Y(4, 2)] == "y42");
}

TEST_CASE("M_A metric components") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 5; ++k) {
    AFamily a = random_afamily(rng, false);
    auto m = build_M_A(a);
    auto p = random_rational_point(rng, 14);
    auto g = metric_at(m, p);
    auto A = [&](int i, int j) { return a.at(i, j); };
    auto x = [&](int i) { return p[X(i)]; };
    auto y = [&](int i, int j) { return p[Y(i, j)]; };
    const Rational two(2), one(1);
    CHECK(g(X(1), X(1)) == -two * A(2, 1) * x(2) * y(2, 1) - two * A(3, 1) * x(3) * y(3, 1));
    CHECK(g(X(2), X(2)) == -two * A(3, 2) * x(3) * y(3, 2) - two * A(1, 2) * x(1) * y(1, 2));
    CHECK(g(X(3), X(3)) == -two * A(1, 1) * x(1) * y(1, 1) - two * A(2, 2) * x(2) * y(2, 2));
    CHECK(g(X(1), X(2)) == two * (one - A(2, 1)) * x(1) * y(2, 1) + two * (one - A(1, 2)) * x(2) * y(1, 2));
    CHECK(g(X(2), X(3)) ==
          x(1) * y(4, 1) + two * (one - A(3, 2)) * x(2) * y(3, 2) + two * (one - A(2, 2)) * x(3) * y(2, 2));
    CHECK(g(X(1), X(3)) ==
          x(2) * y(4, 2) + two * (one - A(3, 1)) * x(1) * y(3, 1) + two * (one - A(1, 1)) * x(3) * y(1, 1));
  }
}

TEST_CASE("M_A curvature components") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 8; ++k) {
    AFamily a = random_afamily(rng, false);
    auto m = build_M_A(a);
    auto p = random_rational_point(rng, 14);
    auto r = curvature_at(m, p);
    auto R = [&](int i, int j, int kk, int l) { return r.get({i, j, kk, l}); };
    auto A = [&](int i, int j) { return a.at(i, j); };
    auto x = [&](int i) { return p[X(i)]; };
    const Rational third(1, 3), one(1);
    CHECK(R(X(2), X(1), X(1), Y(2, 1)) == one);
    CHECK(R(X(3), X(1), X(1), Y(3, 1)) == one);
    CHECK(R(X(3), X(2), X(2), Y(3, 2)) == one);
    CHECK(R(X(1), X(2), X(2), Y(1, 2)) == one);
    CHECK(R(X(1), X(3), X(3), Y(1, 1)) == one);
    CHECK(R(X(2), X(3), X(3), Y(2, 2)) == one);
    CHECK(R(X(1), X(2), X(2), X(1)) == -A(3, 1) * A(3, 2) * x(3) * x(3));
    CHECK(R(X(1), X(3), X(3), X(1)) == -third * (Rational(2) + Rational(3) * A(2, 1) * A(2, 2)) * x(2) * x(2));
    CHECK(R(X(3), X(2), X(2), X(3)) == -third * (Rational(2) + Rational(3) * A(1, 1) * A(1, 2)) * x(1) * x(1));
    CHECK(R(X(2), X(1), X(1), X(3)) == (one - A(1, 1) - A(1, 2) + A(1, 1) * A(1, 2) + A(2, 1) -
                                        A(2, 1) * A(2, 2) + A(3, 1) - A(3, 1) * A(3, 2)) *
                                           x(2) * x(3));
    CHECK(R(X(1), X(2), X(2), X(3)) == (one + A(1, 2) - A(2, 1) - A(1, 1) * A(1, 2) - A(2, 2) +
                                        A(2, 1) * A(2, 2) + A(3, 2) - A(3, 1) * A(3, 2)) *
                                           x(1) * x(3));
    CHECK(R(X(1), X(3), X(3), X(2)) == (Rational(2, 3) + A(1, 1) - A(1, 1) * A(1, 2) + A(2, 2) -
                                        A(2, 1) * A(2, 2) - A(3, 1) - A(3, 2) + A(3, 1) * A(3, 2)) *
                                           x(1) * x(2));
  }
}

TEST_CASE("M_A Christoffel symbols") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 5; ++k) {
    AFamily a = random_afamily(rng, false);
    auto m = build_M_A(a);
    auto p = random_rational_point(rng, 14);
    auto g = christoffel(m, p, ChristoffelKind::second);
    auto A = [&](int i, int j) { return a.at(i, j); };
    auto x = [&](int i) { return p[X(i)]; };
    auto y = [&](int i, int j) { return p[Y(i, j)]; };
    const Rational two(2), one(1), half(1, 2);
    // want[(i,j)] lists the target coefficients of nabla_{x_i} d_{x_j}.
    std::map<std::pair<int, int>, std::map<int, Rational>> want;
    want[{1, 1}] = {{XS(2), (two - A(2, 1)) * y(2, 1)},
                    {XS(3), (two - A(3, 1)) * y(3, 1)},
                    {Y(2, 2), A(2, 1) * x(2)},
                    {Y(3, 2), A(3, 1) * x(3)}};
    want[{2, 2}] = {{XS(1), (two - A(1, 2)) * y(1, 2)},
                    {XS(3), (two - A(3, 2)) * y(3, 2)},
                    {Y(1, 1), A(1, 2) * x(1)},
                    {Y(3, 1), A(3, 2) * x(3)}};
    want[{3, 3}] = {{XS(1), (two - A(1, 1)) * y(1, 1)},
                    {XS(2), (two - A(2, 2)) * y(2, 2)},
                    {Y(2, 1), A(2, 2) * x(2)},
                    {Y(1, 2), A(1, 1) * x(1)}};
    want[{1, 2}] = {{XS(1), -A(2, 1) * y(2, 1)},
                    {XS(2), -A(1, 2) * y(1, 2)},
                    {XS(3), (y(4, 1) + y(4, 2)) * half},
                    {Y(1, 1), (A(1, 2) - one) * x(2)},
                    {Y(2, 2), (A(2, 1) - one) * x(1)}};
    want[{1, 3}] = {{XS(1), -A(3, 1) * y(3, 1)},
                    {XS(2), (y(4, 1) - y(4, 2)) * half},
                    {XS(3), -A(1, 1) * y(1, 1)},
                    {Y(1, 2), (A(1, 1) - one) * x(3)},
                    {Y(3, 2), (A(3, 1) - one) * x(1)},
                    {Y(4, 1), Rational(2, 3) * x(2)},
                    {Y(4, 2), Rational(4, 3) * x(2)}};
    want[{2, 3}] = {{XS(1), (y(4, 2) - y(4, 1)) * half},
                    {XS(2), -A(3, 2) * y(3, 2)},
                    {XS(3), -A(2, 2) * y(2, 2)},
                    {Y(2, 1), (A(2, 2) - one) * x(3)},
                    {Y(3, 1), (A(3, 2) - one) * x(2)},
                    {Y(4, 1), Rational(4, 3) * x(1)},
                    {Y(4, 2), Rational(2, 3) * x(1)}};
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) {
        const auto& w = want[{std::min(i, j), std::max(i, j)}];
        for (int t = 0; t < 14; ++t) {
          CAPTURE(i);
          CAPTURE(j);
          CAPTURE(t);
          auto it = w.find(t);
          CHECK(g.get({X(i), X(j), t}) == (it == w.end() ? Rational(0) : it->second));
        }
      }
  }
}

TEST_CASE("M_A covariant derivative of curvature") {
  // The nine listed polynomials are linear in x; comparing on the grid {1,2,3,5}^3
  // with random y and x* fixes them as polynomials.
  std::mt19937_64 rng(5);
  const std::vector<Rational> grid{1, 2, 3, 5};
  for (int draw = 0; draw < 3; ++draw) {
    AFamily a = random_afamily(rng, false);
    auto m = build_M_A(a);
    auto A = [&](int i, int j) { return a.at(i, j); };
    const Rational two(2), three(3), f23(2, 3);
    Rational c1 = -two * (Rational(-2) + A(1, 1) + A(2, 2) + A(3, 1) * A(3, 2));
    Rational c2 = -f23 * (Rational(-4) + three * A(1, 2) + three * A(3, 2) + three * A(2, 1) * A(2, 2));
    Rational c3 = -f23 * (Rational(-4) + three * A(2, 1) + three * A(3, 1) + three * A(1, 1) * A(1, 2));
    Rational P1 = two - A(1, 1) - A(1, 2) + A(2, 1) - A(2, 2) + A(3, 1) - A(3, 2) + A(1, 1) * A(1, 2) -
                  A(2, 1) * A(2, 2) - A(3, 1) * A(3, 2);
    Rational P2 = two - A(1, 1) + A(1, 2) - A(2, 1) - A(2, 2) - A(3, 1) + A(3, 2) - A(1, 1) * A(1, 2) +
                  A(2, 1) * A(2, 2) - A(3, 1) * A(3, 2);
    Rational P3 = f23 + A(1, 1) - A(1, 2) - A(2, 1) + A(2, 2) - A(3, 1) - A(3, 2) - A(1, 1) * A(1, 2) -
                  A(2, 1) * A(2, 2) + A(3, 1) * A(3, 2);
    for (const auto& u1 : grid)
      for (const auto& u2 : grid)
        for (const auto& u3 : grid) {
          auto p = random_rational_point(rng, 14);
          p[X(1)] = u1;
          p[X(2)] = u2;
          p[X(3)] = u3;
          // One curvature tensor on span{x1,x2,x3} per derivative direction.
          std::array<CurvatureTensor<Rational>, 3> want{CurvatureTensor<Rational>(3), CurvatureTensor<Rational>(3),
                                                        CurvatureTensor<Rational>(3)};
          want[2].set({0, 1, 1, 0}, c1 * u3);
          want[1].set({0, 2, 2, 0}, c2 * u2);
          want[0].set({1, 2, 2, 1}, c3 * u1);
          want[1].set({1, 0, 0, 2}, P1 * u3);
          want[2].set({1, 0, 0, 2}, P1 * u2);
          want[0].set({0, 1, 1, 2}, P2 * u3);
          want[2].set({0, 1, 1, 2}, P2 * u1);
          want[0].set({0, 2, 2, 1}, P3 * u2);
          want[1].set({0, 2, 2, 1}, P3 * u1);
          auto nr = covariant_derivative_R(m, p, 1);
          for (const auto& [idx, v] : nr.comp) {
            bool x_only = true;
            for (int s : idx) x_only = x_only && s < 3;
            CHECK(x_only);
          }
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                  for (int v = 0; v < 3; ++v) CHECK(nr.get({i, j, k, l, v}) == want[v](i, j, k, l));
        }
  }
}

TEST_CASE("all-ones parameters: nabla R(x1,x2,x2,x1;x3) = -2 x3") {
  auto m = build_M_A(ones());
  std::mt19937_64 rng(6);
  for (int k = 0; k < 5; ++k) {
    auto p = random_rational_point(rng, 14);
    CHECK(covariant_derivative_R(m, p, 1).get({X(1), X(2), X(2), X(1), X(3)}) == Rational(-2) * p[X(3)]);
  }
}

TEST_CASE("0-model realizations") {
  std::mt19937_64 rng(7);
  for (int draw = 0; draw < 3; ++draw) {
    auto m = build_M_A(random_afamily(rng, false));
    for (int k = 0; k < 5; ++k) {
      auto rep = verify_0_model(m, random_rational_point(rng, 14));
      CHECK(rep.holds);
      if (!rep.holds && rep.witness) MESSAGE(rep.witness->description);
    }
  }
  auto mphi = build_M_Phi(e_2e_family());
  for (int k = 0; k < 5; ++k) CHECK(verify_0_model(mphi, random_point_d(rng, 14), 1e-10).holds);
  auto mid = build_M_Phi(PhiFamily::identity());
  CHECK(verify_0_model(mid, random_rational_point(rng, 14)).holds);
}

TEST_CASE("0-model failures") {
  PlaneWaveMetric flat(3, 8, build_M_A(ones()).C());
  auto rep = verify_0_model(flat, Vec<Rational>(14, Rational(0)));
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.witness);

  // phi_{1,1}' phi_{1,2}' = 2: the y11 and y12 rescalings no longer match the model form.
  PhiFamily broken = PhiFamily::identity();
  broken.at(1, 2) = FnExpr(2) * FnExpr::var(0);
  CHECK_THROWS_AS(build_M_Phi(broken), ConstraintError);
  CHECK_THROWS_AS(check_reciprocal(broken, default_reciprocal_samples()), ConstraintError);
  auto m = build_M_Phi(broken, false);
  std::mt19937_64 rng(8);
  auto bad = verify_0_model(m, random_rational_point(rng, 14));
  CHECK_FALSE(bad.holds);
  CHECK_FALSE(bad.notes.empty());
}

TEST_CASE("1-normalized frames and the distinguished nabla^k R values") {
  auto f = e_2e_family();
  auto m = build_M_Phi(f);
  FnExpr phi1 = f.at(1, 1).derivative(0), phi2 = f.at(1, 2).derivative(0);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 5; ++s) {
    auto p = random_point_d(rng, 14);
    auto frame = normalize_basis_1(m, p);
    CHECK(check_1_normalized(m, frame).holds);
    auto d1 = jet_eval<double>(phi1, {p[0]}, {0}, 3).derivatives(0);
    auto d2 = jet_eval<double>(phi2, {p[0]}, {0}, 3).derivatives(0);
    for (int k = 1; k <= 2; ++k) {
      auto nk = covariant_derivative_R(m, p, k);
      std::vector<int> s12{a1, a2, a2, b12}, s11{a1, a3, a3, b11};
      for (int r = 0; r < k; ++r) {
        s12.push_back(a1);
        s11.push_back(a1);
      }
      double v12 = contract(nk, frame, s12), v11 = contract(nk, frame, s11);
      double w12 = d2[k] / d2[0], w11 = d1[k] / d1[0];
      CHECK(std::abs(v12 - w12) <= 1e-9 * std::max(1.0, std::abs(w12)));
      CHECK(std::abs(v11 - w11) <= 1e-9 * std::max(1.0, std::abs(w11)));
    }
  }
  // The identity family has vanishing nabla R along the distinguished slots.
  auto mid = build_M_Phi(PhiFamily::identity());
  CHECK_THROWS_AS(normalize_basis_1(mid, Vec<Rational>(14, Rational(1))), HypothesisError);
}

TEST_CASE("Xi for the exponential family vanishes") {
  auto m = build_M_Phi(exp_family());
  std::mt19937_64 rng(10);
  for (int s = 0; s < 5; ++s) {
    auto p = random_point_d(rng, 14);
    CHECK(std::abs(xi_invariant(m, p, XiMode::frame).value) < 1e-12);
    CHECK(std::abs(xi_invariant(m, p, XiMode::direct).value) < 1e-12);
  }
}

TEST_CASE("Xi for e^t + e^2t") {
  auto m = build_M_Phi(e_2e_family());
  Vec<double> p(14, 0.0);
  // phi' = 2, phi'' = 3, phi''' = 5 at 0: (1 - 10/9)^2.
  CHECK(std::abs(xi_invariant(m, p, XiMode::direct).value - 1.0 / 81.0) < 1e-14);
  CHECK(std::abs(xi_invariant(m, p, XiMode::frame).value - 1.0 / 81.0) < 1e-12);
  // Closed form (1 - (1 + e^t)(1 + 4 e^t) / (1 + 2 e^t)^2)^2 = e^{2t} / (1 + 2 e^t)^4.
  for (double t : {-1.0, 0.5, 1.5}) {
    p[0] = t;
    double e = std::exp(t);
    double want = e * e / std::pow(1 + 2 * e, 4);
    CHECK(std::abs(xi_invariant(m, p, XiMode::direct).value - want) < 1e-14);
  }
  p[0] = 0;
  double v0 = xi_invariant(m, p, XiMode::frame).value;
  p[0] = -2;
  double v1 = xi_invariant(m, p, XiMode::frame).value;
  CHECK(std::abs(v0 - v1) > 1e-3);
}

TEST_CASE("Xi frame and direct modes agree") {
  auto m = build_M_Phi(e_2e_family());
  std::mt19937_64 rng(11);
  for (int s = 0; s < 20; ++s) {
    auto p = random_point_d(rng, 14, 2.0);
    double fr = xi_invariant(m, p, XiMode::frame).value, di = xi_invariant(m, p, XiMode::direct).value;
    CHECK(std::abs(fr - di) < 1e-9);
  }
}

TEST_CASE("Xi is unchanged by the frame transformations") {
  auto m = build_M_Phi(e_2e_family());
  std::mt19937_64 rng(12);
  auto swap23 = swap12_map<double>() * swap13_map<double>() * swap12_map<double>();
  for (int s = 0; s < 5; ++s) {
    auto p = random_point_d(rng, 14);
    auto f = normalize_basis_1(m, p);
    double base = xi_from_frame(m, f).value;
    for (auto d : std::vector<std::array<double, 3>>{{2.0, 0.5, 1.0}, {-1.0, 3.0, 1.0 / 3.0}, {0.5, -4.0, 0.5}}) {
      auto t = dilatation_map<double>(d[0], d[1], d[2]);
      CHECK(std::abs(xi_from_frame(m, transform_frame(f, t)).value - base) < 1e-10);
      CHECK(std::abs(xi_from_frame(m, transform_frame(f, t * swap23)).value - base) < 1e-10);
    }
    // The transformed frames still realize the model.
    CHECK(frame_conformance(m, transform_frame(f, swap23), 1e-10).holds);
  }
  CHECK_THROWS_AS(parse_xi_mode("both"), ParseError);
}

TEST_CASE("symmetric space equations") {
  auto r = symmetric_space_residuals(sym_params());
  CHECK(r == std::array<Rational, 3>{0, 0, 0});
  auto rep = symmetric_space_check(sym_params(), 20);
  CHECK(rep.holds);

  // The residuals are the x-free factors of three nabla R components.
  std::mt19937_64 rng(13);
  for (int k = 0; k < 5; ++k) {
    AFamily a = random_afamily(rng, false);
    auto res = symmetric_space_residuals(a);
    Vec<Rational> p(14, Rational(0));
    p[X(1)] = p[X(2)] = p[X(3)] = 1;
    auto nr = covariant_derivative_R(build_M_A(a), p, 1);
    CHECK(nr.get({X(1), X(2), X(2), X(1), X(3)}) == Rational(-2) * res[0]);
    CHECK(nr.get({X(2), X(3), X(3), X(2), X(1)}) == Rational(-2, 3) * res[1]);
    CHECK(nr.get({X(1), X(3), X(3), X(1), X(2)}) == Rational(-2, 3) * res[2]);
  }
  auto ones_res = symmetric_space_residuals(ones());
  CHECK(ones_res == std::array<Rational, 3>{1, 5, 5});
  CHECK_FALSE(symmetric_space_check(ones(), 3).holds);
}

TEST_CASE("equation verdict agrees with the nabla R verdict") {
  std::mt19937_64 rng(14);
  int solvable = 0;
  for (int k = 0; k < 30; ++k) {
    AFamily a = random_afamily(rng, k % 2 == 0);
    auto rep = symmetric_space_check(a, 3, k);
    REQUIRE(rep.notes.size() == 2);
    CHECK(rep.notes[0].holds == rep.notes[1].holds);
    if (rep.notes[0].holds) ++solvable;
  }
  CHECK(solvable == 15);
}

TEST_CASE("family JSON") {
  auto f = e_2e_family();
  auto back = phi_family_from_json(json::parse(to_json(f).dump()));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j)
      for (double t : {-0.5, 0.25}) CHECK(back.at(i, j).eval<double>({t}) == f.at(i, j).eval<double>({t}));
  auto a = sym_params();
  CHECK(a_family_from_json(json::parse(to_json(a).dump())).a == a.a);
  auto m = build_M_A(a);
  auto mb = metric_from_json(json::parse(to_json(m).dump()));
  std::mt19937_64 rng(15);
  auto p = random_rational_point(rng, 14);
  CHECK(metric_at(mb, p) == metric_at(m, p));
  CHECK(mb.coordinate_labels() == m.coordinate_labels());
  CHECK_THROWS_AS(phi_family_from_json(json::parse(R"({"1,3": []})")), ParseError);
}

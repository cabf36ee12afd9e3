#pragma once

#include <random>

#include "jtsankov/json_io.hpp"

namespace jts::test {

inline Rational q(const char* s) { return Rational(std::string_view(s)); }

inline Vec<Rational> e14(int i) { return unit<Rational>(14, i); }

inline Vec<Rational> combo(std::initializer_list<std::pair<int, Rational>> terms, int n = 14) {
  Vec<Rational> v(n, Rational(0));
  for (const auto& [i, c] : terms) v[i] += c;
  return v;
}

// Symmetric rational matrix with entries in [-range, range] / den, nondegenerate.
inline Matrix<Rational> random_symmetric(std::mt19937_64& rng, int n) {
  for (;;) {
    Matrix<Rational> g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) g(i, j) = g(j, i) = random_rational(rng, 3, 3);
    if (!determinant(g).is_zero()) return g;
  }
}

inline Matrix<Rational> random_invertible(std::mt19937_64& rng, int n) {
  for (;;) {
    Matrix<Rational> s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = random_rational(rng, 3, 2);
    if (!determinant(s).is_zero()) return s;
  }
}

// A(x,y,z,w) = sum_k c_k (phi_k(x,w) phi_k(y,z) - phi_k(x,z) phi_k(y,w)) for sparse
// symmetric phi_k: Bianchi holds by construction.
inline CurvatureTensor<Rational> random_sparse_tensor(std::mt19937_64& rng, int n, int terms) {
  CurvatureTensor<Rational> a(n);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < terms; ++t) {
    Matrix<Rational> phi(n, n);
    for (int e = 0; e < 3; ++e) {
      int i = pick(rng), j = pick(rng);
      Rational v = random_rational(rng, 2, 2);
      phi(i, j) += v;
      if (i != j) phi(j, i) += v;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k + 1; l < n; ++l) {
            if (std::pair(k, l) < std::pair(i, j)) continue;  // one element per pair-exchange orbit
            Rational v = phi(i, l) * phi(j, k) - phi(i, k) * phi(j, l);
            if (!v.is_zero()) a.add({i, j, k, l}, v);
          }
  }
  return a;
}

// Hyperbolic form on W + W-bar (each of dimension k), tensor supported on W,
// then moved by a random change of basis. These are 2-step Jacobi nilpotent.
inline Model0<Rational> random_isotropic_model(std::mt19937_64& rng, int k, int terms) {
  const int n = 2 * k;
  Matrix<Rational> g(n, n);
  for (int i = 0; i < k; ++i) g(i, k + i) = g(k + i, i) = Rational(1);
  CurvatureTensor<Rational> a(n);
  CurvatureTensor<Rational> w = random_sparse_tensor(rng, k, terms);
  for (const auto& [idx, v] : w.canonical_entries()) a.set(idx, v);
  return pullback(random_invertible(rng, n), Model0<Rational>(std::move(g), std::move(a)));
}

// Evaluates A(x,y,z,w) by brute force over the expanded components.
inline Rational eval_tensor(const Model0<Rational>& m, const Vec<Rational>& x, const Vec<Rational>& y,
                            const Vec<Rational>& z, const Vec<Rational>& w) {
  Rational s(0);
  for (const auto& [idx, v] : m.expanded()) s += v * x[idx[0]] * y[idx[1]] * z[idx[2]] * w[idx[3]];
  return s;
}

// Random polynomial of total degree <= deg in the first a variables.
inline FnExpr random_poly(std::mt19937_64& rng, int a, int deg, int terms = 3) {
  std::uniform_int_distribution<int> pick_e(0, deg);
  FnExpr f(Rational(0));
  for (int t = 0; t < terms; ++t) {
    FnExpr mono(random_rational(rng, 3, 2));
    int left = deg;
    for (int v = 0; v < a && left > 0; ++v) {
      int e = std::min(left, pick_e(rng));
      if (e == 0) continue;
      mono = mono * FnExpr::pow(FnExpr::var(v), e);
      left -= e;
    }
    f = f + mono;
  }
  return f;
}

// Plane wave metric with random polynomial psi (about half the entries zero) and random C.
inline PlaneWaveMetric random_poly_metric(std::mt19937_64& rng, int a, int b, int deg) {
  PlaneWaveMetric m(a, b, random_symmetric(rng, b));
  std::bernoulli_distribution use(0.5);
  for (int i = 0; i < a; ++i)
    for (int j = i; j < a; ++j)
      for (int mu = 0; mu < b; ++mu)
        if (use(rng)) m.set_psi(i, j, mu, random_poly(rng, a, deg));
  return m;
}

// Union-of-keys comparison of two coordinate tensors.
template <class T>
bool same_tensor(const CoordTensor<T>& x, const CoordTensor<T>& y, double tol = 0.0) {
  for (const auto& [k, v] : x.comp)
    if (!Field<T>::near(v, y.get(k), tol)) return false;
  for (const auto& [k, v] : y.comp)
    if (!Field<T>::near(v, x.get(k), tol)) return false;
  return true;
}

// Dense n^4 array of a 4-slot coordinate tensor.
template <class T>
std::vector<T> dense4(const CoordTensor<T>& t) {
  const std::size_t n = t.dim;
  std::vector<T> d(n * n * n * n, T(0));
  for (const auto& [k, v] : t.comp) d[((k[0] * n + k[1]) * n + k[2]) * n + k[3]] = v;
  return d;
}

}  // namespace jts::test

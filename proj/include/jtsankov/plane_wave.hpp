#pragma once

#include <map>
#include <string>
#include <vector>

#include "jtsankov/curvature_tensor.hpp"
#include "jtsankov/fn_expr.hpp"
#include "jtsankov/linalg.hpp"

namespace jts {

// Coordinates (x_0..x_{a-1}, x*_0..x*_{a-1}, y_0..y_{b-1}) on R^{2a+b} with
//   g(dx_i, dx_j) = 2 sum_mu y_mu psi_{ij mu}(x),  g(dx_i, dx*_i) = 1,  g(dy_mu, dy_nu) = C_{mu nu}.
// The psi are functions of x only and are stored symmetrically.
class PlaneWaveMetric {
 public:
  PlaneWaveMetric() = default;
  // Throws DegenerateFormError / DomainError for a singular or non-symmetric C.
  PlaneWaveMetric(int a, int b, Matrix<Rational> c);

  int a() const { return a_; }
  int b() const { return b_; }
  int dim() const { return 2 * a_ + b_; }
  const Matrix<Rational>& C() const { return c_; }
  const Matrix<Rational>& C_inverse() const { return c_inv_; }

  // 0-based; sets both (i,j) and (j,i). ArityError if f reads a variable >= a.
  void set_psi(int i, int j, int mu, const FnExpr& f);
  const FnExpr& psi(int i, int j, int mu) const { return psi_[(i * a_ + j) * b_ + mu]; }
  bool rational_closed() const;

  int x(int i) const { return i; }
  int xs(int i) const { return a_ + i; }
  int y(int mu) const { return 2 * a_ + mu; }
  // Coordinate names; y names default to y1..yb.
  std::vector<std::string> coordinate_labels() const;
  void set_y_labels(std::vector<std::string> names);
  const std::vector<std::string>& y_labels() const { return y_labels_; }

 private:
  int a_ = 0, b_ = 0;
  Matrix<Rational> c_, c_inv_;
  std::vector<FnExpr> psi_;
  std::vector<std::string> y_labels_;
};

// Components over coordinate indices. `covariant` tensor slots are followed by
// `derivative` slots; absent keys are zero.
template <class T>
struct CoordTensor {
  int dim = 0;
  int covariant = 0;
  int derivative = 0;
  std::map<std::vector<int>, T> comp;

  int arity() const { return covariant + derivative; }
  T get(const std::vector<int>& idx) const {
    auto it = comp.find(idx);
    return it == comp.end() ? T(0) : it->second;
  }
};

// Tangent vectors at a point, as coordinate columns, with role labels.
template <class T>
struct Frame {
  Vec<T> point;
  std::vector<Vec<T>> vectors;
  std::vector<std::string> labels;

  int index(const std::string& label) const;
  const Vec<T>& operator[](const std::string& label) const { return vectors[index(label)]; }
};

template <class T>
Frame<T> coordinate_frame(const PlaneWaveMetric& m, const Vec<T>& p);

template <class T>
BilinearForm<T> metric_at(const PlaneWaveMetric& m, const Vec<T>& p);

enum class ChristoffelKind { first, second };

// Key (i,j,k): first kind g(nabla_i d_j, d_k); second kind the d_k coefficient of nabla_i d_j.
template <class T>
CoordTensor<T> christoffel(const PlaneWaveMetric& m, const Vec<T>& p, ChristoffelKind kind);
// Closed-form curvature R(d_i,d_j,d_k,d_l), all nonzero components.
template <class T>
CoordTensor<T> curvature_at(const PlaneWaveMetric& m, const Vec<T>& p);

// Oracle path: Koszul formula on metric jets, series inverse, and
// R_ijkl = g_ml (d_i G^m_jk - d_j G^m_ik + G^p_jk G^m_ip - G^p_ik G^m_jp).
template <class T>
CoordTensor<T> christoffel_generic(const PlaneWaveMetric& m, const Vec<T>& p);
template <class T>
CoordTensor<T> curvature_generic(const PlaneWaveMetric& m, const Vec<T>& p);

// nabla^k R; the new derivative slot is appended last, so
// nabla R(x,y,z,w;v) = (nabla_v R)(x,y,z,w).
template <class T>
CoordTensor<T> covariant_derivative_R(const PlaneWaveMetric& m, const Vec<T>& p, int k);

// Multilinear contraction against explicit vectors. ArityError on a count mismatch.
template <class T>
T contract(const CoordTensor<T>& t, const std::vector<Vec<T>>& vectors);
// Frame version: slots name frame vectors by position.
template <class T>
T contract(const CoordTensor<T>& t, const Frame<T>& f, const std::vector<int>& slots);
// All frame components at once: the tensor expressed in the frame basis.
template <class T>
CoordTensor<T> to_frame(const CoordTensor<T>& t, const Frame<T>& f);

// ---- geodesics ----

enum class Quadrature { exact_poly, adaptive };
Quadrature parse_quadrature(const std::string& s);
std::string quadrature_name(Quadrature q);

template <class T>
struct GeodesicState {
  Vec<T> position;
  Vec<T> velocity;
  Vec<T> acceleration;
};

// Cascade solution: x affine, y by double quadrature of the C-contracted psi,
// x* by double quadrature of the remaining sources. exact_poly needs
// polynomial psi; adaptive needs double.
template <class T>
GeodesicState<T> geodesic_state(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t,
                                Quadrature q);
template <class T>
Vec<T> geodesic(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t, Quadrature q);
// Largest component of accel + Gamma(vel, vel) along the cascade solution.
template <class T>
T geodesic_residual(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v, const T& t, Quadrature q);
// The v with geodesic(m, p, v, 1) = target.
template <class T>
Vec<T> exp_inverse(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& target, Quadrature q);
// -Gamma(v, v) at p.
template <class T>
Vec<T> geodesic_acceleration(const PlaneWaveMetric& m, const Vec<T>& p, const Vec<T>& v);

// CSV with header t,<coordinate labels>, `steps`+1 rows on [0, t_end].
std::string geodesic_csv(const PlaneWaveMetric& m, const Vec<double>& p, const Vec<double>& v, double t_end,
                         int steps, Quadrature q);

}  // namespace jts

#include "jtsankov/linalg.hpp"

#include <algorithm>

namespace jts {

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ArityError("ragged matrix literal");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
  return m;
}

template <class T>
Matrix<T> Matrix<T>::from_rows(const std::vector<Vec<T>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw ArityError("ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

template <class T>
Matrix<T> Matrix<T>::from_columns(const std::vector<Vec<T>>& cols) {
  return from_rows(cols).transpose();
}

template <class T>
Vec<T> Matrix<T>::row(std::size_t i) const {
  return Vec<T>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

template <class T>
Vec<T> Matrix<T>::column(std::size_t j) const {
  Vec<T> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
bool Matrix<T>::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!Field<T>::near((*this)(i, j), (*this)(j, i), tol)) return false;
  return true;
}

template <class T>
bool Matrix<T>::is_zero(double tol) const {
  return std::all_of(a_.begin(), a_.end(), [tol](const T& v) { return Field<T>::is_zero(v, tol); });
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw ArityError("matrix product shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (exactly_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!exactly_zero(b(k, j))) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class T>
Vec<T> operator*(const Matrix<T>& a, const Vec<T>& v) {
  if (a.cols() != v.size()) throw ArityError("matrix-vector shape mismatch");
  Vec<T> out(a.rows(), T(0));
  for (std::size_t k = 0; k < a.cols(); ++k) {
    if (exactly_zero(v[k])) continue;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (!exactly_zero(a(i, k))) out[i] += a(i, k) * v[k];
  }
  return out;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArityError("matrix sum shape mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArityError("matrix difference shape mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

template <class T>
Matrix<T> scaled(const Matrix<T>& a, const T& s) {
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

template <class T>
Vec<T> add(const Vec<T>& a, const Vec<T>& b) {
  if (a.size() != b.size()) throw ArityError("vector length mismatch");
  Vec<T> c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += b[i];
  return c;
}

template <class T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b) {
  if (a.size() != b.size()) throw ArityError("vector length mismatch");
  Vec<T> c = a;
  for (std::size_t i = 0; i < a.size(); ++i) c[i] -= b[i];
  return c;
}

template <class T>
Vec<T> scale(const Vec<T>& a, const T& s) {
  Vec<T> c = a;
  for (auto& x : c) x *= s;
  return c;
}

template <class T>
Vec<T> unit(std::size_t n, std::size_t i) {
  Vec<T> v(n, T(0));
  v.at(i) = T(1);
  return v;
}

template <class T>
bool is_zero_vec(const Vec<T>& v, double tol) {
  return std::all_of(v.begin(), v.end(), [tol](const T& x) { return Field<T>::is_zero(x, tol); });
}

template <class T>
bool near_vec(const Vec<T>& a, const Vec<T>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!Field<T>::near(a[i], b[i], tol)) return false;
  return true;
}

template <class T>
bool near_mat(const Matrix<T>& a, const Matrix<T>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!Field<T>::near(a(i, j), b(i, j), tol)) return false;
  return true;
}

namespace {

// Pivot choice: first nonzero for exact fields, largest magnitude for floats.
template <class T>
std::size_t pick_pivot(const Matrix<T>& m, std::size_t col, std::size_t from, double tol) {
  std::size_t best = m.rows();
  if constexpr (Field<T>::exact) {
    (void)tol;
    for (std::size_t r = from; r < m.rows(); ++r)
      if (!m(r, col).is_zero()) return r;
  } else {
    double bestv = tol;
    for (std::size_t r = from; r < m.rows(); ++r)
      if (std::abs(m(r, col)) > bestv) {
        bestv = std::abs(m(r, col));
        best = r;
      }
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace

template <class T>
std::vector<std::size_t> rref(Matrix<T>& m, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = pick_pivot(m, c, r, tol);
    if (p == m.rows()) {
      if constexpr (!Field<T>::exact)
        for (std::size_t i = r; i < m.rows(); ++i) m(i, c) = 0.0;
      continue;
    }
    swap_rows(m, p, r);
    T inv = T(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || exactly_zero(m(i, c))) continue;
      T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!exactly_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m, double tol) {
  return rref(m, tol).size();
}

template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw ArityError("determinant of a non-square matrix");
  T det(1);
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = pick_pivot(m, c, c, 0.0);
    if (p == n) return T(0);
    if (p != c) {
      swap_rows(m, p, c);
      det = -det;
    }
    det *= m(c, c);
    T inv = T(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (exactly_zero(m(i, c))) continue;
      T f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw ArityError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  auto piv = rref(aug, 0.0);
  if (piv.size() < n || piv[n - 1] != n - 1) throw DomainError("singular matrix");
  Matrix<T> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

template <class T>
std::vector<Vec<T>> nullspace(Matrix<T> m, double tol) {
  auto piv = rref(m, tol);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : piv) is_pivot[p] = true;
  std::vector<Vec<T>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vec<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class T>
std::vector<Vec<T>> row_basis(const std::vector<Vec<T>>& vs, std::size_t n, double tol) {
  if (vs.empty()) return {};
  Matrix<T> m(vs.size(), n);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = vs[i].at(j);
  auto piv = rref(m, tol);
  std::vector<Vec<T>> out;
  for (std::size_t r = 0; r < piv.size(); ++r) out.push_back(m.row(r));
  return out;
}

template <class T>
bool coordinates_in(const std::vector<Vec<T>>& rows, const Vec<T>& v, Vec<T>& coords, double tol) {
  coords.assign(rows.size(), T(0));
  Vec<T> rest = v;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::size_t p = 0;
    while (p < rows[r].size() && Field<T>::is_zero(rows[r][p], 0.0)) ++p;
    if (p == rows[r].size()) continue;
    coords[r] = rest[p] / rows[r][p];
    if (!exactly_zero(coords[r]))
      for (std::size_t j = 0; j < rest.size(); ++j) rest[j] -= coords[r] * rows[r][j];
  }
  return is_zero_vec(rest, tol);
}

// Symmetric Gaussian congruence: eliminate with a nonzero diagonal pivot, or
// create one from an off-diagonal entry via e_i <- e_i + e_j.
template <class T>
Signature signature(const BilinearForm<T>& g, double tol) {
  if (g.rows() != g.cols()) throw ArityError("form is not square");
  Matrix<T> m = g;
  const std::size_t n = m.rows();
  Signature sig;
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n && piv == n; ++i)
      if (!done[i] && !Field<T>::is_zero(m(i, i), tol)) piv = i;
    if (piv == n) {
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && !Field<T>::is_zero(m(i, j), tol)) {
            pi = i;
            pj = j;
            break;
          }
      if (pi == n) throw DegenerateFormError("degenerate form");
      for (std::size_t k = 0; k < n; ++k) m(pi, k) += m(pj, k);
      for (std::size_t k = 0; k < n; ++k) m(k, pi) += m(k, pj);
      piv = pi;
      if (Field<T>::is_zero(m(piv, piv), tol)) throw DegenerateFormError("degenerate form");
    }
    T d = m(piv, piv);
    if constexpr (Field<T>::exact)
      (d.sign() < 0 ? sig.p : sig.q)++;
    else
      (d < 0 ? sig.p : sig.q)++;
    done[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || exactly_zero(m(i, piv))) continue;
      T f = m(i, piv) / d;
      for (std::size_t k = 0; k < n; ++k) m(i, k) -= f * m(piv, k);
      for (std::size_t k = 0; k < n; ++k) m(k, i) = m(i, k);
    }
  }
  return sig;
}

template <class T>
BilinearForm<T> invert_form(const BilinearForm<T>& g) {
  if (!g.is_symmetric()) throw DomainError("form is not symmetric");
  try {
    return inverse(g);
  } catch (const DomainError&) {
    throw DegenerateFormError("degenerate form");
  }
}

template <class T>
T form_apply(const BilinearForm<T>& g, const Vec<T>& x, const Vec<T>& y) {
  T s(0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    if (exactly_zero(x[i])) continue;
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (!exactly_zero(y[j]) && !exactly_zero(g(i, j))) s += x[i] * g(i, j) * y[j];
  }
  return s;
}

template <class U, class T>
Matrix<U> convert_matrix(const Matrix<T>& m) {
  Matrix<U> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<U, T>)
        out(i, j) = m(i, j);
      else
        out(i, j) = Field<U>::from(m(i, j));
    }
  return out;
}

template <class U, class T>
Vec<U> convert_vec(const Vec<T>& v) {
  Vec<U> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<U, T>)
      out.push_back(x);
    else
      out.push_back(Field<U>::from(x));
  }
  return out;
}

#define JTS_INSTANTIATE(T)                                                                     \
  template class Matrix<T>;                                                                    \
  template Matrix<T> operator*(const Matrix<T>&, const Matrix<T>&);                            \
  template Vec<T> operator*(const Matrix<T>&, const Vec<T>&);                                  \
  template Matrix<T> operator+(const Matrix<T>&, const Matrix<T>&);                            \
  template Matrix<T> operator-(const Matrix<T>&, const Matrix<T>&);                            \
  template Matrix<T> scaled(const Matrix<T>&, const T&);                                       \
  template Vec<T> add(const Vec<T>&, const Vec<T>&);                                           \
  template Vec<T> sub(const Vec<T>&, const Vec<T>&);                                           \
  template Vec<T> scale(const Vec<T>&, const T&);                                              \
  template Vec<T> unit<T>(std::size_t, std::size_t);                                           \
  template bool is_zero_vec(const Vec<T>&, double);                                            \
  template bool near_vec(const Vec<T>&, const Vec<T>&, double);                                \
  template bool near_mat(const Matrix<T>&, const Matrix<T>&, double);                          \
  template std::vector<std::size_t> rref(Matrix<T>&, double);                                  \
  template std::size_t rank(Matrix<T>, double);                                                \
  template T determinant(Matrix<T>);                                                           \
  template Matrix<T> inverse(const Matrix<T>&);                                                \
  template std::vector<Vec<T>> nullspace(Matrix<T>, double);                                   \
  template std::vector<Vec<T>> row_basis(const std::vector<Vec<T>>&, std::size_t, double);     \
  template bool coordinates_in(const std::vector<Vec<T>>&, const Vec<T>&, Vec<T>&, double);    \
  template Signature signature(const BilinearForm<T>&, double);                                \
  template BilinearForm<T> invert_form(const BilinearForm<T>&);                                \
  template T form_apply(const BilinearForm<T>&, const Vec<T>&, const Vec<T>&);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

template Matrix<double> convert_matrix<double, Rational>(const Matrix<Rational>&);
template Matrix<Rational> convert_matrix<Rational, Rational>(const Matrix<Rational>&);
template Matrix<double> convert_matrix<double, double>(const Matrix<double>&);
template Vec<double> convert_vec<double, Rational>(const Vec<Rational>&);
template Vec<Rational> convert_vec<Rational, Rational>(const Vec<Rational>&);
template Vec<double> convert_vec<double, double>(const Vec<double>&);

}  // namespace jts

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "jtsankov/field.hpp"

namespace jts {

template <class T>
using Vec = std::vector<T>;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec<T>>& rows);
  static Matrix from_columns(const std::vector<Vec<T>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vec<T> row(std::size_t i) const;
  Vec<T> column(std::size_t j) const;
  Matrix transpose() const;
  bool is_symmetric(double tol = kDefaultTol) const;
  bool is_zero(double tol = kDefaultTol) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> a_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Vec<T> operator*(const Matrix<T>& a, const Vec<T>& v);
template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> scaled(const Matrix<T>& a, const T& s);

template <class T>
Vec<T> add(const Vec<T>& a, const Vec<T>& b);
template <class T>
Vec<T> sub(const Vec<T>& a, const Vec<T>& b);
template <class T>
Vec<T> scale(const Vec<T>& a, const T& s);
template <class T>
Vec<T> unit(std::size_t n, std::size_t i);
template <class T>
bool is_zero_vec(const Vec<T>& v, double tol = kDefaultTol);
template <class T>
bool near_vec(const Vec<T>& a, const Vec<T>& b, double tol = kDefaultTol);
template <class T>
bool near_mat(const Matrix<T>& a, const Matrix<T>& b, double tol = kDefaultTol);

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m, double tol = kDefaultTol);
template <class T>
std::size_t rank(Matrix<T> m, double tol = kDefaultTol);
template <class T>
T determinant(Matrix<T> m);
// Throws DomainError when singular.
template <class T>
Matrix<T> inverse(const Matrix<T>& m);
// Basis of {x : m x = 0} as columns.
template <class T>
std::vector<Vec<T>> nullspace(Matrix<T> m, double tol = kDefaultTol);
// Nonzero rows of the RREF of the stacked vectors.
template <class T>
std::vector<Vec<T>> row_basis(const std::vector<Vec<T>>& vs, std::size_t n, double tol = kDefaultTol);
// Coordinates of v in the span of the rows of an RREF basis, or nothing.
template <class T>
bool coordinates_in(const std::vector<Vec<T>>& rref_rows, const Vec<T>& v, Vec<T>& coords,
                    double tol = kDefaultTol);

// Symmetric bilinear form on T^n.
template <class T>
using BilinearForm = Matrix<T>;

struct Signature {
  std::size_t p = 0;  // negative directions
  std::size_t q = 0;  // positive directions
  friend bool operator==(const Signature&, const Signature&) = default;
};

// Congruence diagonalization; DegenerateFormError if singular.
template <class T>
Signature signature(const BilinearForm<T>& g, double tol = kDefaultTol);
template <class T>
BilinearForm<T> invert_form(const BilinearForm<T>& g);
template <class T>
T form_apply(const BilinearForm<T>& g, const Vec<T>& x, const Vec<T>& y);

template <class U, class T>
Matrix<U> convert_matrix(const Matrix<T>& m);
template <class U, class T>
Vec<U> convert_vec(const Vec<T>& v);

}  // namespace jts

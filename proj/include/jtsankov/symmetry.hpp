#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "jtsankov/model.hpp"
#include "jtsankov/scalar.hpp"

namespace jts {

// Linear maps act on column vectors: column i is the image of basis vector i.
template <class T>
using LinearMap = Matrix<T>;

// (T*g)(x,y) = g(Tx,Ty), (T*A)(x,y,z,w) = A(Tx,Ty,Tz,Tw). Throws DomainError if T is singular.
template <class T>
Model0<T> pullback(const LinearMap<T>& t, const Model0<T>& m);

// Holds iff the pullback equals m; the invariant-subspace containments are
// reported as notes.
template <class T>
CheckReport<T> is_symmetry(const LinearMap<T>& t, const Model0<T>& m, double tol = kDefaultTol);

// Restriction of T to V_{alpha*} in its row-reduced basis (alpha_i* for the 14-model).
// ConstraintError if T does not preserve V_{alpha*}.
template <class T>
Matrix<T> tau(const LinearMap<T>& t, const Model0<T>& m, double tol = kDefaultTol);

struct GeneratorSpec {
  enum class Kind { swap12, swap13, rotation, dilatation };
  Kind kind = Kind::swap12;
  std::vector<Scalar> params;  // (cos, sin) or (a1, a2, a3)

  // "swap12", "swap13", "rotation:3/5,4/5", "dilatation:2,1/2,1".
  static GeneratorSpec parse(std::string_view text, Mode mode);
  std::string str() const;
  // ConstraintError when cos^2+sin^2 != 1 or a1 a2 a3 != +-1.
  void validate(double tol = kDefaultTol) const;
};

template <class T>
LinearMap<T> generator_map(const GeneratorSpec& g, double tol = kDefaultTol);
template <class T>
LinearMap<T> swap12_map();
template <class T>
LinearMap<T> swap13_map();
template <class T>
LinearMap<T> rotation_map(const T& c, const T& s);
// No constraint on the product; for products other than +-1 the result is not a symmetry.
template <class T>
LinearMap<T> dilatation_map(const T& a1, const T& a2, const T& a3);

// b(i, nu): coefficient of beta_nu (beta order b11 b12 b21 b22 b31 b32 b41 b42) in T alpha_i.
template <class T>
struct KernelParams {
  Matrix<T> b = Matrix<T>(3, 8);
  std::array<T, 3> c_antisym{T(0), T(0), T(0)};  // c_1^2, c_1^3, c_2^3
};

// 6 x 24 coefficient matrix; column i*8+nu holds b_i^nu.
template <class T>
Matrix<T> kernel_constraints();
// ConstraintError if b violates the constraints.
template <class T>
LinearMap<T> kernel_element(const KernelParams<T>& p, double tol = kDefaultTol);

struct KernelDimension {
  std::size_t constraint_rank;
  std::size_t b_freedom;
  std::size_t c_freedom;
  std::size_t total;
};
KernelDimension kernel_dimension();

// Random integer combination of a nullspace basis, coefficients in [-range, range].
KernelParams<Rational> random_kernel_params(std::uint64_t seed, int range = 3);

}  // namespace jts

#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "jtsankov/plane_wave.hpp"
#include "jtsankov/symmetry.hpp"

namespace jts {

// phi_{i,j} for i in 1..3, j in 1..2, each univariate in variable 0.
struct PhiFamily {
  std::array<FnExpr, 6> phi;

  const FnExpr& at(int i, int j) const { return phi[(i - 1) * 2 + (j - 1)]; }
  FnExpr& at(int i, int j) { return phi[(i - 1) * 2 + (j - 1)]; }
  static PhiFamily identity();
};

struct AFamily {
  std::array<Rational, 6> a{Rational(1), Rational(1), Rational(1), Rational(1), Rational(1), Rational(1)};

  const Rational& at(int i, int j) const { return a[(i - 1) * 2 + (j - 1)]; }
  Rational& at(int i, int j) { return a[(i - 1) * 2 + (j - 1)]; }
};

// y coordinate names in the order y11 y12 y21 y22 y31 y32 y41 y42.
const std::vector<std::string>& m14_y_labels();

// ConstraintError unless phi_{i,1}' phi_{i,2}' = 1 at every sample (exactly when
// the family is rational-closed, within tol otherwise).
void check_reciprocal(const PhiFamily& f, const std::vector<Rational>& samples, double tol = kDefaultTol);
const std::vector<Rational>& default_reciprocal_samples();

PlaneWaveMetric build_M_Phi(const PhiFamily& f, bool check = true);
PlaneWaveMetric build_M_A(const AFamily& a);
// phi_{2,j} = x_2, phi_{3,j} = x_3, with the given phi_{1,1}, phi_{1,2}.
PhiFamily x1_phi_family(const FnExpr& phi11, const FnExpr& phi12);

// The three-stage frame; labels follow the 14-model basis order.
// DomainError if a rescaling coefficient vanishes.
template <class T>
Frame<T> normalize_basis_0(const PlaneWaveMetric& m, const Vec<T>& p);
// Compares the frame's metric and curvature with the 14-model; every mismatch is a note.
template <class T>
CheckReport<T> frame_conformance(const PlaneWaveMetric& m, const Frame<T>& f, double tol = kDefaultTol);
template <class T>
CheckReport<T> verify_0_model(const PlaneWaveMetric& m, const Vec<T>& p, double tol = kDefaultTol);

// nabla R(a_i,a_j,a_k,b_nu;a_l) vanishes except on the (a1,a3,a3,b11;a1) and
// (a1,a2,a2,b12;a1) orbits, where it must not.
template <class T>
CheckReport<T> check_1_normalized(const PlaneWaveMetric& m, const Frame<T>& f, double tol = kDefaultTol);
// normalize_basis_0 validated by check_1_normalized; HypothesisError on failure.
template <class T>
Frame<T> normalize_basis_1(const PlaneWaveMetric& m, const Vec<T>& p, double tol = kDefaultTol);

// Vector k of the result is sum_r t(r,k) f_r.
template <class T>
Frame<T> transform_frame(const Frame<T>& f, const LinearMap<T>& t);

enum class XiMode { frame, direct };
XiMode parse_xi_mode(const std::string& s);

template <class T>
struct XiValue {
  T value{0};
  XiMode mode = XiMode::frame;
  // frame: nabla^2 R / (nabla R)^2 for the b12 and b11 contractions.
  // direct: phi' phi''' / phi''^2 in q11, q12 unused.
  T q12{0}, q11{0};
  T nabla12{0}, nabla11{0};
  Frame<T> frame;
};

template <class T>
XiValue<T> xi_from_frame(const PlaneWaveMetric& m, const Frame<T>& f, double tol = kDefaultTol);
// direct mode reads phi_{1,1} back from psi_{33,y11} = -phi_{1,1}(x_1).
template <class T>
XiValue<T> xi_invariant(const PlaneWaveMetric& m, const Vec<T>& p, XiMode mode, double tol = kDefaultTol);

// Residuals of the three parameter equations for local symmetry.
std::array<Rational, 3> symmetric_space_residuals(const AFamily& a);
// Equations plus nabla R sampled at random rational points; holds iff both vanish.
CheckReport<Rational> symmetric_space_check(const AFamily& a, int points = 20, std::uint64_t seed = 1);

// Deterministic sampling helpers.
Rational random_rational(std::mt19937_64& rng, int range = 5, int max_den = 4);
Vec<Rational> random_rational_point(std::mt19937_64& rng, int n, int range = 5, int max_den = 4);
// solvable = true draws a parameter set satisfying the three equations.
AFamily random_afamily(std::mt19937_64& rng, bool solvable);

}  // namespace jts

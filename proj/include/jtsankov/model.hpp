#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "jtsankov/curvature_tensor.hpp"
#include "jtsankov/linalg.hpp"

namespace jts {

// (V, <.,.>, A). Immutable; the inverse form and the expanded tensor are cached.
template <class T>
class Model0 {
 public:
  Model0() = default;
  // Throws DegenerateFormError for a singular form.
  Model0(BilinearForm<T> form, CurvatureTensor<T> tensor, std::vector<std::string> labels = {});

  int dim() const { return static_cast<int>(form_.rows()); }
  const BilinearForm<T>& form() const { return form_; }
  const CurvatureTensor<T>& tensor() const { return tensor_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const BilinearForm<T>& form_inverse() const { return cache_->inverse; }
  const std::vector<std::pair<Idx4, T>>& expanded() const { return cache_->expanded; }
  // Index of a label, -1 if absent.
  int label_index(std::string_view label) const;
  std::string label(int i) const;

 private:
  struct Cache {
    BilinearForm<T> inverse;
    std::vector<std::pair<Idx4, T>> expanded;
  };
  BilinearForm<T> form_;
  CurvatureTensor<T> tensor_;
  std::vector<std::string> labels_;
  std::shared_ptr<const Cache> cache_;
};

template <class U, class T>
Model0<U> convert_model(const Model0<T>& m);

enum class OperatorKind { jacobi, jacobi_polarized, skew, product, other };

template <class T>
struct Operator {
  Matrix<T> matrix;
  OperatorKind kind = OperatorKind::other;
  std::vector<Vec<T>> args;

  Vec<T> operator()(const Vec<T>& v) const { return matrix * v; }
  Operator then(const Operator& outer) const;  // outer after this
};

// y -> A(y,x)x raised through the form.
template <class T>
Operator<T> jacobi(const Model0<T>& m, const Vec<T>& x);
template <class T>
Operator<T> jacobi_polarized(const Model0<T>& m, const Vec<T>& x, const Vec<T>& y);
// z -> A(x,y)z raised through the form.
template <class T>
Operator<T> skew(const Model0<T>& m, const Vec<T>& x, const Vec<T>& y);

enum class Property {
  jacobi_tsankov,
  two_step_jacobi_nilpotent,
  skew_tsankov,
  two_step_skew_nilpotent,
  mixed_tsankov,
  mixed_nilpotent_tsankov,
  jacobi_square_zero
};

const std::vector<Property>& all_properties();
std::string property_name(Property p);
Property parse_property(std::string_view s);

template <class T>
CheckReport<T> check_property(const Model0<T>& m, Property kind, double tol = kDefaultTol);

template <class T>
struct InvariantSpans {
  std::vector<Vec<T>> beta_alpha_star;  // span of J(x,y)z
  std::vector<Vec<T>> alpha_star;       // span of J(x,y)J(z,w)u
};

template <class T>
InvariantSpans<T> invariant_spans(const Model0<T>& m, double tol = kDefaultTol);

// The 14-dimensional model. Basis order: a1 a2 a3 a1* a2* a3* b11 b12 b21 b22 b31 b32 b41 b42.
Model0<Rational> build_M14();
const std::vector<std::string>& m14_labels();
// Index of beta_{i,j} (1-based i in 1..4, j in 1..2) in the basis above.
constexpr int m14_alpha(int i) { return i - 1; }
constexpr int m14_alpha_star(int i) { return 2 + i; }
constexpr int m14_beta(int i, int j) { return 6 + 2 * (i - 1) + (j - 1); }

}  // namespace jts

#include "jtsankov/model.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace jts {

template <class T>
Model0<T>::Model0(BilinearForm<T> form, CurvatureTensor<T> tensor, std::vector<std::string> labels)
    : form_(std::move(form)), tensor_(std::move(tensor)), labels_(std::move(labels)) {
  if (form_.rows() != form_.cols()) throw ArityError("form is not square");
  if (static_cast<int>(form_.rows()) != tensor_.dim()) throw ArityError("form and tensor dimensions differ");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != dim()) throw ArityError("label count mismatch");
  auto c = std::make_shared<Cache>();
  c->inverse = invert_form(form_);
  c->expanded = tensor_.expanded();
  cache_ = std::move(c);
}

template <class T>
int Model0<T>::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

template <class T>
std::string Model0<T>::label(int i) const {
  if (!labels_.empty()) return labels_.at(i);
  return "e" + std::to_string(i);
}

template <class U, class T>
Model0<U> convert_model(const Model0<T>& m) {
  CurvatureTensor<U> t(m.dim());
  for (const auto& [idx, v] : m.tensor().canonical_entries()) t.set(idx, Field<U>::from(v));
  return Model0<U>(convert_matrix<U>(m.form()), std::move(t), m.labels());
}

template Model0<double> convert_model<double, Rational>(const Model0<Rational>&);
template Model0<Rational> convert_model<Rational, Rational>(const Model0<Rational>&);

template <class T>
Operator<T> Operator<T>::then(const Operator& outer) const {
  return Operator{outer.matrix * matrix, OperatorKind::product, {}};
}

namespace {

// Lowered matrix K with K(l, c) = A-contraction, then raised by G^{-1}.
template <class T>
Matrix<T> raise(const Model0<T>& m, const Matrix<T>& k) {
  return m.form_inverse() * k;
}

template <class T>
void check_len(const Model0<T>& m, const Vec<T>& v) {
  if (static_cast<int>(v.size()) != m.dim()) throw ArityError("vector length does not match the model");
}

}  // namespace

template <class T>
Operator<T> jacobi(const Model0<T>& m, const Vec<T>& x) {
  check_len(m, x);
  Matrix<T> k(m.dim(), m.dim());
  for (const auto& [idx, v] : m.expanded()) {
    const auto [c, j, kk, l] = idx;
    if (exactly_zero(x[j]) || exactly_zero(x[kk])) continue;
    k(l, c) += x[j] * x[kk] * v;
  }
  return Operator<T>{raise(m, k), OperatorKind::jacobi, {x}};
}

template <class T>
Operator<T> jacobi_polarized(const Model0<T>& m, const Vec<T>& x, const Vec<T>& y) {
  check_len(m, x);
  check_len(m, y);
  Matrix<T> k(m.dim(), m.dim());
  const T half = T(1) / T(2);
  for (const auto& [idx, v] : m.expanded()) {
    const auto [c, j, kk, l] = idx;
    T w = x[j] * y[kk] + y[j] * x[kk];
    if (exactly_zero(w)) continue;
    k(l, c) += half * w * v;
  }
  return Operator<T>{raise(m, k), OperatorKind::jacobi_polarized, {x, y}};
}

template <class T>
Operator<T> skew(const Model0<T>& m, const Vec<T>& x, const Vec<T>& y) {
  check_len(m, x);
  check_len(m, y);
  Matrix<T> k(m.dim(), m.dim());
  for (const auto& [idx, v] : m.expanded()) {
    const auto [i, j, c, l] = idx;
    if (exactly_zero(x[i]) || exactly_zero(y[j])) continue;
    k(l, c) += x[i] * y[j] * v;
  }
  return Operator<T>{raise(m, k), OperatorKind::skew, {x, y}};
}

const std::vector<Property>& all_properties() {
  static const std::vector<Property> all{Property::jacobi_tsankov,       Property::two_step_jacobi_nilpotent,
                                         Property::skew_tsankov,         Property::two_step_skew_nilpotent,
                                         Property::mixed_tsankov,        Property::mixed_nilpotent_tsankov,
                                         Property::jacobi_square_zero};
  return all;
}

std::string property_name(Property p) {
  switch (p) {
    case Property::jacobi_tsankov: return "jacobi-tsankov";
    case Property::two_step_jacobi_nilpotent: return "2-step-jacobi-nilpotent";
    case Property::skew_tsankov: return "skew-tsankov";
    case Property::two_step_skew_nilpotent: return "2-step-skew-nilpotent";
    case Property::mixed_tsankov: return "mixed-tsankov";
    case Property::mixed_nilpotent_tsankov: return "mixed-nilpotent-tsankov";
    case Property::jacobi_square_zero: return "jacobi-square-zero";
  }
  return "?";
}

Property parse_property(std::string_view s) {
  for (auto p : all_properties())
    if (property_name(p) == s) return p;
  throw ParseError("unknown property '" + std::string(s) + "'");
}

namespace {

// A family of basis-polarized operators with printable names.
template <class T>
struct Family {
  std::vector<Matrix<T>> ops;
  std::vector<std::vector<int>> args;  // basis indices of the arguments
  std::vector<std::string> names;
};

template <class T>
Family<T> jacobi_diagonal(const Model0<T>& m) {
  Family<T> f;
  const int n = m.dim();
  for (int i = 0; i < n; ++i) {
    f.ops.push_back(jacobi(m, unit<T>(n, i)).matrix);
    f.args.push_back({i});
    f.names.push_back("J(" + m.label(i) + ")");
  }
  return f;
}

template <class T>
Family<T> jacobi_pairs(const Model0<T>& m) {
  Family<T> f;
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      f.ops.push_back(jacobi_polarized(m, unit<T>(n, i), unit<T>(n, j)).matrix);
      f.args.push_back({i, j});
      f.names.push_back("J(" + m.label(i) + "," + m.label(j) + ")");
    }
  return f;
}

template <class T>
Family<T> skew_pairs(const Model0<T>& m) {
  Family<T> f;
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      f.ops.push_back(skew(m, unit<T>(n, i), unit<T>(n, j)).matrix);
      f.args.push_back({i, j});
      f.names.push_back("A(" + m.label(i) + "," + m.label(j) + ")");
    }
  return f;
}

template <class T>
bool all_zero(const Matrix<T>& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!exactly_zero(a(i, j))) return false;
  return true;
}

template <class T>
int first_bad_column(const Matrix<T>& c, double tol) {
  for (std::size_t j = 0; j < c.cols(); ++j)
    for (std::size_t i = 0; i < c.rows(); ++i)
      if (!Field<T>::is_zero(c(i, j), tol)) return static_cast<int>(j);
  return -1;
}

template <class T>
Witness<T> make_witness(const Model0<T>& m, const std::string& formula, const std::vector<int>& idx, int target,
                        const Matrix<T>& residual_op) {
  const int n = m.dim();
  Witness<T> w;
  w.description = formula + " " + m.label(target);
  w.indices = idx;
  w.indices.push_back(target);
  for (int i : w.indices) w.vectors.push_back(unit<T>(n, i));
  w.residual = residual_op.column(target);
  return w;
}

// Commutator kinds: first failing pair (p, q) in index order, then first failing target.
// Every ordered pair is visited, so the count matches the full square.
template <class T>
bool commutator_pass(const Model0<T>& m, const Family<T>& inner, const Family<T>& outer, CheckReport<T>& rep,
                     double tol) {
  for (std::size_t p = 0; p < inner.ops.size(); ++p) {
    if (all_zero(inner.ops[p])) {
      rep.checked += outer.ops.size();
      continue;
    }
    for (std::size_t q = 0; q < outer.ops.size(); ++q) {
      ++rep.checked;
      if (all_zero(outer.ops[q])) continue;
      Matrix<T> c = outer.ops[q] * inner.ops[p] - inner.ops[p] * outer.ops[q];
      int col = first_bad_column(c, tol);
      if (col < 0) continue;
      std::vector<int> idx = inner.args[p];
      idx.insert(idx.end(), outer.args[q].begin(), outer.args[q].end());
      rep.holds = false;
      rep.witness = make_witness(m, "[" + outer.names[q] + ", " + inner.names[p] + "]", idx, col, c);
      return false;
    }
  }
  return true;
}

// Product kinds: first failing (target, inner, outer) of outer * inner.
template <class T>
bool product_pass(const Model0<T>& m, const Family<T>& inner, const Family<T>& outer, CheckReport<T>& rep,
                  double tol) {
  std::tuple<int, std::size_t, std::size_t> best{m.dim(), 0, 0};
  Matrix<T> best_prod;
  for (std::size_t p = 0; p < inner.ops.size(); ++p) {
    if (all_zero(inner.ops[p])) {
      rep.checked += outer.ops.size();
      continue;
    }
    for (std::size_t q = 0; q < outer.ops.size(); ++q) {
      ++rep.checked;
      if (all_zero(outer.ops[q])) continue;
      Matrix<T> prod = outer.ops[q] * inner.ops[p];
      int col = first_bad_column(prod, tol);
      if (col < 0) continue;
      std::tuple<int, std::size_t, std::size_t> here{col, p, q};
      if (here < best) {
        best = here;
        best_prod = std::move(prod);
      }
    }
  }
  auto [col, p, q] = best;
  if (col == m.dim()) return true;
  std::vector<int> idx = outer.args[q];
  idx.insert(idx.end(), inner.args[p].begin(), inner.args[p].end());
  rep.holds = false;
  rep.witness = make_witness(m, outer.names[q] + " " + inner.names[p], idx, col, best_prod);
  return false;
}

// Coefficient of x_i x_j x_k x_l in J(x)^2, summed over ordered rearrangements.
template <class T>
bool square_zero_pass(const Model0<T>& m, CheckReport<T>& rep, double tol) {
  const int n = m.dim();
  Family<T> jp = jacobi_pairs(m);
  std::vector<std::vector<int>> slot(n, std::vector<int>(n));
  for (std::size_t p = 0; p < jp.args.size(); ++p) {
    slot[jp.args[p][0]][jp.args[p][1]] = static_cast<int>(p);
    slot[jp.args[p][1]][jp.args[p][0]] = static_cast<int>(p);
  }
  std::map<std::pair<int, int>, Matrix<T>> prod;
  auto product = [&](int a, int b) -> const Matrix<T>& {
    auto it = prod.find({a, b});
    if (it != prod.end()) return it->second;
    return prod.emplace(std::pair{a, b}, jp.ops[a] * jp.ops[b]).first->second;
  };
  std::vector<bool> nonzero(jp.ops.size());
  for (std::size_t p = 0; p < jp.ops.size(); ++p) nonzero[p] = !all_zero(jp.ops[p]);

  std::tuple<int, std::vector<int>> best{n, {}};
  Matrix<T> best_sum;
  std::vector<int> ms(4);
  for (ms[0] = 0; ms[0] < n; ++ms[0])
    for (ms[1] = ms[0]; ms[1] < n; ++ms[1])
      for (ms[2] = ms[1]; ms[2] < n; ++ms[2])
        for (ms[3] = ms[2]; ms[3] < n; ++ms[3]) {
          ++rep.checked;
          std::vector<int> perm = ms;
          Matrix<T> sum(n, n);
          bool any = false;
          do {
            int a = slot[perm[0]][perm[1]], b = slot[perm[2]][perm[3]];
            if (!nonzero[a] || !nonzero[b]) continue;
            sum = sum + product(a, b);
            any = true;
          } while (std::next_permutation(perm.begin(), perm.end()));
          if (!any) continue;
          int col = first_bad_column(sum, tol);
          if (col < 0) continue;
          std::tuple<int, std::vector<int>> here{col, ms};
          if (here < best) {
            best = here;
            best_sum = sum;
          }
        }
  auto [col, idx] = best;
  if (col == n) return true;
  rep.holds = false;
  std::string name = "coefficient of J(x)^2 at x";
  for (int i : idx) name += "_" + m.label(i);
  name += " applied to";
  rep.witness = make_witness(m, name, idx, col, best_sum);
  return false;
}

}  // namespace

template <class T>
CheckReport<T> check_property(const Model0<T>& m, Property kind, double tol) {
  CheckReport<T> rep;
  rep.property = property_name(kind);
  switch (kind) {
    case Property::jacobi_tsankov: {
      auto d = jacobi_diagonal(m);
      if (!commutator_pass(m, d, d, rep, tol)) break;
      auto p = jacobi_pairs(m);
      commutator_pass(m, p, p, rep, tol);
      break;
    }
    case Property::two_step_jacobi_nilpotent: {
      auto d = jacobi_diagonal(m);
      if (!product_pass(m, d, d, rep, tol)) break;
      auto p = jacobi_pairs(m);
      product_pass(m, p, p, rep, tol);
      break;
    }
    case Property::skew_tsankov: {
      auto s = skew_pairs(m);
      commutator_pass(m, s, s, rep, tol);
      break;
    }
    case Property::two_step_skew_nilpotent: {
      auto s = skew_pairs(m);
      product_pass(m, s, s, rep, tol);
      break;
    }
    case Property::mixed_tsankov: {
      auto s = skew_pairs(m);
      auto d = jacobi_diagonal(m);
      if (!commutator_pass(m, s, d, rep, tol)) break;
      auto p = jacobi_pairs(m);
      commutator_pass(m, s, p, rep, tol);
      break;
    }
    case Property::mixed_nilpotent_tsankov: {
      auto s = skew_pairs(m);
      auto d = jacobi_diagonal(m);
      if (!product_pass(m, d, s, rep, tol) || !product_pass(m, s, d, rep, tol)) break;
      auto p = jacobi_pairs(m);
      if (!product_pass(m, p, s, rep, tol)) break;
      product_pass(m, s, p, rep, tol);
      break;
    }
    case Property::jacobi_square_zero: {
      square_zero_pass(m, rep, tol);
      break;
    }
  }
  return rep;
}

template <class T>
InvariantSpans<T> invariant_spans(const Model0<T>& m, double tol) {
  const int n = m.dim();
  auto p = jacobi_pairs(m);
  std::vector<Vec<T>> images;
  for (const auto& op : p.ops)
    for (int k = 0; k < n; ++k) {
      auto c = op.column(k);
      if (!is_zero_vec(c, tol)) images.push_back(std::move(c));
    }
  InvariantSpans<T> out;
  out.beta_alpha_star = row_basis(images, n, tol);
  // J(.,.)J(.,.)e_m lies in the image of J(.,.) applied to span(J(.,.)e_k).
  std::vector<Vec<T>> second;
  for (const auto& op : p.ops)
    for (const auto& v : out.beta_alpha_star) {
      auto c = op * v;
      if (!is_zero_vec(c, tol)) second.push_back(std::move(c));
    }
  out.alpha_star = row_basis(second, n, tol);
  return out;
}

#define JTS_INSTANTIATE(T)                                                                    \
  template class Model0<T>;                                                                   \
  template struct Operator<T>;                                                                \
  template Operator<T> jacobi(const Model0<T>&, const Vec<T>&);                               \
  template Operator<T> jacobi_polarized(const Model0<T>&, const Vec<T>&, const Vec<T>&);      \
  template Operator<T> skew(const Model0<T>&, const Vec<T>&, const Vec<T>&);                  \
  template CheckReport<T> check_property(const Model0<T>&, Property, double);                 \
  template InvariantSpans<T> invariant_spans(const Model0<T>&, double);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

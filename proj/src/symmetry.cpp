#include "jtsankov/symmetry.hpp"

#include <map>
#include <random>
#include <sstream>

namespace jts {

namespace {

template <class T>
void require_invertible(const LinearMap<T>& t, int n) {
  if (static_cast<int>(t.rows()) != n || static_cast<int>(t.cols()) != n)
    throw ArityError("linear map does not match the model dimension");
  if (Field<T>::is_zero(determinant(t), 0.0)) throw DomainError("singular linear map");
}

// Full (all orbit members) components of T*A.
template <class T>
std::map<Idx4, T> pulled_components(const LinearMap<T>& t, const Model0<T>& m) {
  std::map<Idx4, T> cur(m.expanded().begin(), m.expanded().end());
  const int n = m.dim();
  for (int s = 0; s < 4; ++s) {
    std::map<Idx4, T> next;
    for (const auto& [idx, v] : cur) {
      const int r = idx[s];
      for (int a = 0; a < n; ++a) {
        if (exactly_zero(t(r, a))) continue;
        Idx4 k = idx;
        k[s] = a;
        next[k] += t(r, a) * v;
      }
    }
    cur.clear();
    for (auto& [k, v] : next)
      if (!exactly_zero(v)) cur.emplace(k, std::move(v));
  }
  return cur;
}

}  // namespace

template <class T>
Model0<T> pullback(const LinearMap<T>& t, const Model0<T>& m) {
  require_invertible(t, m.dim());
  BilinearForm<T> g = t.transpose() * m.form() * t;
  CurvatureTensor<T> a(m.dim());
  for (const auto& [idx, v] : pulled_components(t, m)) {
    int s;
    if (canonical_index(idx, s) == idx) a.set(idx, v);
  }
  return Model0<T>(std::move(g), std::move(a), m.labels());
}

template <class T>
CheckReport<T> is_symmetry(const LinearMap<T>& t, const Model0<T>& m, double tol) {
  CheckReport<T> rep;
  rep.property = "symmetry";
  Model0<T> p = pullback(t, m);
  const int n = m.dim();
  auto fail = [&](const std::string& what, std::vector<int> idx, T pulled, T original) {
    if (!rep.holds) return;
    rep.holds = false;
    Witness<T> w;
    std::ostringstream os;
    os << what << "(";
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << m.label(idx[i]);
    os << ")";
    w.description = os.str();
    w.indices = std::move(idx);
    w.residual = {pulled, original};
    rep.witness = std::move(w);
  };
  bool form_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ++rep.checked;
      if (!Field<T>::near(p.form()(i, j), m.form()(i, j), tol)) {
        form_ok = false;
        fail("form", {i, j}, p.form()(i, j), m.form()(i, j));
      }
    }
  bool tensor_ok = true;
  std::map<Idx4, bool> keys;
  for (const auto& [k, v] : p.tensor().canonical_entries()) keys[k] = true;
  for (const auto& [k, v] : m.tensor().canonical_entries()) keys[k] = true;
  for (const auto& [k, unused] : keys) {
    ++rep.checked;
    T a = p.tensor().get(k), b = m.tensor().get(k);
    if (!Field<T>::near(a, b, tol)) {
      tensor_ok = false;
      fail("tensor", {k[0], k[1], k[2], k[3]}, a, b);
    }
  }
  rep.notes.push_back({"form preserved", form_ok, ""});
  rep.notes.push_back({"tensor preserved", tensor_ok, ""});
  auto spans = invariant_spans(m, tol);
  auto preserved = [&](const std::vector<Vec<T>>& basis) {
    Vec<T> coords;
    for (const auto& v : basis)
      if (!coordinates_in(basis, t * v, coords, tol)) return false;
    return true;
  };
  rep.notes.push_back({"T V_alpha* in V_alpha*", preserved(spans.alpha_star),
                       "dim " + std::to_string(spans.alpha_star.size())});
  rep.notes.push_back({"T V_beta,alpha* in V_beta,alpha*", preserved(spans.beta_alpha_star),
                       "dim " + std::to_string(spans.beta_alpha_star.size())});
  return rep;
}

template <class T>
Matrix<T> tau(const LinearMap<T>& t, const Model0<T>& m, double tol) {
  auto basis = invariant_spans(m, tol).alpha_star;
  const std::size_t k = basis.size();
  Matrix<T> out(k, k);
  Vec<T> coords;
  for (std::size_t c = 0; c < k; ++c) {
    if (!coordinates_in(basis, t * basis[c], coords, tol))
      throw ConstraintError("map does not preserve V_alpha*");
    for (std::size_t r = 0; r < k; ++r) out(r, c) = coords[r];
  }
  return out;
}

// --- generators -------------------------------------------------------------

namespace {

constexpr int A1 = m14_alpha(1), A2 = m14_alpha(2), A3 = m14_alpha(3);
constexpr int S1 = m14_alpha_star(1), S2 = m14_alpha_star(2), S3 = m14_alpha_star(3);
constexpr int B11 = m14_beta(1, 1), B12 = m14_beta(1, 2), B21 = m14_beta(2, 1), B22 = m14_beta(2, 2);
constexpr int B31 = m14_beta(3, 1), B32 = m14_beta(3, 2), B41 = m14_beta(4, 1), B42 = m14_beta(4, 2);

template <class T>
void image(LinearMap<T>& t, int src, std::initializer_list<std::pair<int, T>> terms) {
  for (int r = 0; r < 14; ++r) t(r, src) = T(0);
  for (const auto& [r, c] : terms) t(r, src) += c;
}

template <class T>
LinearMap<T> permutation(std::initializer_list<std::pair<int, int>> swaps) {
  LinearMap<T> t = LinearMap<T>::identity(14);
  for (auto [a, b] : swaps) {
    image<T>(t, a, {{b, T(1)}});
    image<T>(t, b, {{a, T(1)}});
  }
  return t;
}

}  // namespace

template <class T>
LinearMap<T> swap12_map() {
  return permutation<T>({{A1, A2}, {S1, S2}, {B11, B22}, {B12, B21}, {B31, B32}, {B41, B42}});
}

template <class T>
LinearMap<T> swap13_map() {
  auto t = permutation<T>({{A1, A3}, {S1, S3}, {B11, B31}, {B12, B32}, {B21, B22}});
  // b41 <-> b43 := -b41 - b42, b42 fixed
  image<T>(t, B41, {{B41, T(-1)}, {B42, T(-1)}});
  return t;
}

template <class T>
LinearMap<T> rotation_map(const T& c, const T& s) {
  LinearMap<T> t = LinearMap<T>::identity(14);
  const T cs = c * s, c2 = c * c, s2 = s * s, half = T(1) / T(2);
  image<T>(t, A1, {{A1, c}, {A2, s}});
  image<T>(t, A2, {{A1, -s}, {A2, c}});
  image<T>(t, S1, {{S1, c}, {S2, s}});
  image<T>(t, S2, {{S1, -s}, {S2, c}});
  image<T>(t, B11, {{B11, c}, {B22, s}});
  image<T>(t, B12, {{B12, c}, {B21, s}});
  image<T>(t, B21, {{B12, -s}, {B21, c}});
  image<T>(t, B22, {{B11, -s}, {B22, c}});
  // b43 = -b41 - b42
  image<T>(t, B31, {{B32, s2}, {B41, T(2) * cs}, {B42, T(2) * cs}, {B31, c2}});
  image<T>(t, B32, {{B32, c2}, {B41, -T(2) * cs}, {B42, -T(2) * cs}, {B31, s2}});
  image<T>(t, B41, {{B32, half * cs}, {B31, -half * cs}, {B42, -s2}, {B41, c2}});
  image<T>(t, B42, {{B32, half * cs}, {B31, -half * cs}, {B42, c2}, {B41, -s2}});
  return t;
}

template <class T>
LinearMap<T> dilatation_map(const T& a1, const T& a2, const T& a3) {
  const T prod = a1 * a2 * a3;
  // For products +-1 the beta factors carry the sign; otherwise the plain
  // determinant-one formulas are used as given.
  T eps(1);
  if (Field<T>::near(prod, T(-1), 0.0)) eps = T(-1);
  LinearMap<T> t(14, 14);
  t(A1, A1) = a1;
  t(A2, A2) = a2;
  t(A3, A3) = a3;
  t(S1, S1) = T(1) / a1;
  t(S2, S2) = T(1) / a2;
  t(S3, S3) = T(1) / a3;
  t(B11, B11) = eps * a2 / a3;
  t(B12, B12) = eps * a3 / a2;
  t(B21, B21) = eps * a3 / a1;
  t(B22, B22) = eps * a1 / a3;
  t(B31, B31) = eps * a2 / a1;
  t(B32, B32) = eps * a1 / a2;
  t(B41, B41) = eps;
  t(B42, B42) = eps;
  return t;
}

GeneratorSpec GeneratorSpec::parse(std::string_view text, Mode mode) {
  GeneratorSpec g;
  auto colon = text.find(':');
  std::string_view head = text.substr(0, colon);
  if (head == "swap12")
    g.kind = Kind::swap12;
  else if (head == "swap13")
    g.kind = Kind::swap13;
  else if (head == "rotation")
    g.kind = Kind::rotation;
  else if (head == "dilatation")
    g.kind = Kind::dilatation;
  else
    throw ParseError("unknown generator '" + std::string(head) + "'");
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      auto comma = rest.find(',');
      g.params.push_back(Scalar::parse(rest.substr(0, comma), mode));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  std::size_t want = g.kind == Kind::rotation ? 2 : (g.kind == Kind::dilatation ? 3 : 0);
  if (g.params.size() != want)
    throw ParseError("generator '" + std::string(head) + "' takes " + std::to_string(want) + " parameters");
  return g;
}

std::string GeneratorSpec::str() const {
  std::string s;
  switch (kind) {
    case Kind::swap12: s = "swap12"; break;
    case Kind::swap13: s = "swap13"; break;
    case Kind::rotation: s = "rotation"; break;
    case Kind::dilatation: s = "dilatation"; break;
  }
  for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : ":") + params[i].str();
  return s;
}

void GeneratorSpec::validate(double tol) const {
  if (kind == Kind::rotation) {
    Scalar one = params[0].is_rational() ? Scalar(1) : Scalar(1.0);
    Scalar r = params[0] * params[0] + params[1] * params[1] - one;
    if (!r.is_zero(tol)) throw ConstraintError("rotation needs cos^2 + sin^2 = 1");
  } else if (kind == Kind::dilatation) {
    Scalar p = params[0] * params[1] * params[2];
    Scalar one = p.is_rational() ? Scalar(1) : Scalar(1.0);
    if (!(p - one).is_zero(tol) && !(p + one).is_zero(tol))
      throw ConstraintError("dilatation needs a1 a2 a3 = +-1");
  }
}

template <class T>
LinearMap<T> generator_map(const GeneratorSpec& g, double tol) {
  g.validate(tol);
  switch (g.kind) {
    case GeneratorSpec::Kind::swap12: return swap12_map<T>();
    case GeneratorSpec::Kind::swap13: return swap13_map<T>();
    case GeneratorSpec::Kind::rotation: return rotation_map<T>(g.params[0].as<T>(), g.params[1].as<T>());
    case GeneratorSpec::Kind::dilatation:
      return dilatation_map<T>(g.params[0].as<T>(), g.params[1].as<T>(), g.params[2].as<T>());
  }
  throw Error("unreachable generator kind");
}

// --- kernel of tau ----------------------------------------------------------

namespace {

// A(T a_p, T a_q, T a_r, T a_s) is linear in b at first order; these six
// tuples give the independent equations.
const std::array<Idx4, 6> kConstraintTuples{{{A2, A1, A1, A2},
                                             {A3, A1, A1, A3},
                                             {A3, A2, A2, A3},
                                             {A2, A1, A1, A3},
                                             {A1, A2, A2, A3},
                                             {A1, A3, A3, A2}}};

}  // namespace

template <class T>
Matrix<T> kernel_constraints() {
  const auto m = build_M14();
  Matrix<T> c(6, 24);
  for (std::size_t row = 0; row < kConstraintTuples.size(); ++row) {
    const Idx4& t = kConstraintTuples[row];
    for (int s = 0; s < 4; ++s)
      for (int nu = 0; nu < 8; ++nu) {
        Idx4 k = t;
        k[s] = B11 + nu;
        Rational v = m.tensor().get(k);
        if (!v.is_zero()) c(row, t[s] * 8 + nu) += Field<T>::from(v);
      }
  }
  return c;
}

template <class T>
LinearMap<T> kernel_element(const KernelParams<T>& p, double tol) {
  if (p.b.rows() != 3 || p.b.cols() != 8) throw ArityError("kernel b must be 3 x 8");
  Vec<T> flat(24);
  for (int i = 0; i < 3; ++i)
    for (int nu = 0; nu < 8; ++nu) flat[i * 8 + nu] = p.b(i, nu);
  auto residual = kernel_constraints<T>() * flat;
  if (!is_zero_vec(residual, tol)) throw ConstraintError("kernel parameters violate the b constraints");

  const auto m14 = build_M14();
  Matrix<T> gb(8, 8);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) gb(a, b) = Field<T>::from(m14.form()(B11 + a, B11 + b));
  Matrix<T> q = p.b * gb * p.b.transpose();
  Matrix<T> c(3, 3);
  c(0, 1) = p.c_antisym[0];
  c(0, 2) = p.c_antisym[1];
  c(1, 2) = p.c_antisym[2];
  c(1, 0) = -c(0, 1);
  c(2, 0) = -c(0, 2);
  c(2, 1) = -c(1, 2);
  c = c - scaled(q, T(1) / T(2));
  Matrix<T> d = scaled(gb * p.b.transpose(), T(-1));  // d(nu, i)

  LinearMap<T> t = LinearMap<T>::identity(14);
  for (int i = 0; i < 3; ++i) {
    for (int nu = 0; nu < 8; ++nu) t(B11 + nu, A1 + i) = p.b(i, nu);
    for (int j = 0; j < 3; ++j) t(S1 + j, A1 + i) += c(i, j);
  }
  for (int nu = 0; nu < 8; ++nu)
    for (int i = 0; i < 3; ++i) t(S1 + i, B11 + nu) = d(nu, i);
  return t;
}

KernelDimension kernel_dimension() {
  KernelDimension k{};
  k.constraint_rank = rank(kernel_constraints<Rational>());
  k.b_freedom = 24 - k.constraint_rank;
  k.c_freedom = 3;
  k.total = k.b_freedom + k.c_freedom;
  return k;
}

KernelParams<Rational> random_kernel_params(std::uint64_t seed, int range) {
  std::mt19937_64 rng(seed);
  auto draw = [&] { return Rational(static_cast<long>(rng() % (2 * range + 1)) - range); };
  auto basis = nullspace(kernel_constraints<Rational>());
  Vec<Rational> flat(24, Rational(0));
  for (const auto& v : basis) flat = add(flat, scale(v, draw()));
  KernelParams<Rational> p;
  for (int i = 0; i < 3; ++i)
    for (int nu = 0; nu < 8; ++nu) p.b(i, nu) = flat[i * 8 + nu];
  for (auto& c : p.c_antisym) c = draw();
  return p;
}

#define JTS_INSTANTIATE(T)                                                          \
  template Model0<T> pullback(const LinearMap<T>&, const Model0<T>&);               \
  template CheckReport<T> is_symmetry(const LinearMap<T>&, const Model0<T>&, double); \
  template Matrix<T> tau(const LinearMap<T>&, const Model0<T>&, double);            \
  template LinearMap<T> generator_map<T>(const GeneratorSpec&, double);             \
  template LinearMap<T> swap12_map<T>();                                            \
  template LinearMap<T> swap13_map<T>();                                            \
  template LinearMap<T> rotation_map(const T&, const T&);                           \
  template LinearMap<T> dilatation_map(const T&, const T&, const T&);               \
  template Matrix<T> kernel_constraints<T>();                                       \
  template LinearMap<T> kernel_element(const KernelParams<T>&, double);

JTS_INSTANTIATE(Rational)
JTS_INSTANTIATE(double)
#undef JTS_INSTANTIATE

}  // namespace jts

#include "jtsankov/curvature_tensor.hpp"

#include <algorithm>
#include <sstream>

namespace jts {

std::vector<std::pair<Idx4, int>> orbit(const Idx4& x) {
  const auto [i, j, k, l] = x;
  return {{{i, j, k, l}, 1},  {{j, i, k, l}, -1}, {{i, j, l, k}, -1}, {{j, i, l, k}, 1},
          {{k, l, i, j}, 1},  {{l, k, i, j}, -1}, {{k, l, j, i}, -1}, {{l, k, j, i}, 1}};
}

Idx4 canonical_index(const Idx4& idx, int& sign) {
  if (idx[0] == idx[1] || idx[2] == idx[3]) {
    sign = 0;
    return idx;
  }
  auto orb = orbit(idx);
  auto best = std::min_element(orb.begin(), orb.end(),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
  sign = best->second;
  return best->first;
}

template <class T>
void CurvatureTensor<T>::check(const Idx4& idx) const {
  for (int x : idx)
    if (x < 0 || x >= n_) throw ArityError("tensor index out of range");
}

template <class T>
void CurvatureTensor<T>::set(const Idx4& idx, const T& v) {
  check(idx);
  int s;
  Idx4 c = canonical_index(idx, s);
  if (s == 0) {
    if (!exactly_zero(v)) throw DomainError("entry with a repeated antisymmetric index must vanish");
    return;
  }
  if (exactly_zero(v))
    e_.erase(c);
  else
    e_[c] = s > 0 ? v : -v;
}

template <class T>
void CurvatureTensor<T>::add(const Idx4& idx, const T& v) {
  if (exactly_zero(v)) return;
  set(idx, get(idx) + v);
}

template <class T>
T CurvatureTensor<T>::get(const Idx4& idx) const {
  check(idx);
  int s;
  Idx4 c = canonical_index(idx, s);
  if (s == 0) return T(0);
  auto it = e_.find(c);
  if (it == e_.end()) return T(0);
  return s > 0 ? it->second : -it->second;
}

template <class T>
std::vector<std::pair<Idx4, T>> CurvatureTensor<T>::expanded() const {
  std::vector<std::pair<Idx4, T>> out;
  for (const auto& [c, v] : e_) {
    auto orb = orbit(c);
    std::sort(orb.begin(), orb.end());
    orb.erase(std::unique(orb.begin(), orb.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              orb.end());
    for (const auto& [idx, s] : orb) out.emplace_back(idx, s > 0 ? v : -v);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template <class T>
std::vector<T> CurvatureTensor<T>::dense() const {
  std::vector<T> d(static_cast<std::size_t>(n_) * n_ * n_ * n_, T(0));
  for (const auto& [idx, v] : expanded())
    d[((static_cast<std::size_t>(idx[0]) * n_ + idx[1]) * n_ + idx[2]) * n_ + idx[3]] = v;
  return d;
}

namespace {

std::string tuple_str(const Idx4& x) {
  std::ostringstream os;
  os << "(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ")";
  return os.str();
}

// Shared driver: `at` returns the component for any index tuple.
template <class T, class Get>
CheckReport<T> validate(int n, Get at, bool pair_checks, double tol) {
  CheckReport<T> rep;
  rep.property = "curvature-symmetries";
  auto fail = [&](const std::string& what, const Idx4& x, std::vector<T> residual) {
    rep.holds = false;
    Witness<T> w;
    w.description = what + " at " + tuple_str(x);
    w.indices.assign(x.begin(), x.end());
    w.residual = std::move(residual);
    rep.witness = std::move(w);
  };
  for (int i = 0; i < n && rep.holds; ++i)
    for (int j = 0; j < n && rep.holds; ++j)
      for (int k = 0; k < n && rep.holds; ++k)
        for (int l = 0; l < n && rep.holds; ++l) {
          ++rep.checked;
          T v = at(Idx4{i, j, k, l});
          if (pair_checks) {
            T a1 = v + at(Idx4{j, i, k, l});
            if (!Field<T>::is_zero(a1, tol)) {
              fail("antisymmetry in the first pair", {i, j, k, l}, {a1});
              break;
            }
            T a2 = v + at(Idx4{i, j, l, k});
            if (!Field<T>::is_zero(a2, tol)) {
              fail("antisymmetry in the second pair", {i, j, k, l}, {a2});
              break;
            }
            T a3 = v - at(Idx4{k, l, i, j});
            if (!Field<T>::is_zero(a3, tol)) {
              fail("pair exchange", {i, j, k, l}, {a3});
              break;
            }
          }
          T b = v + at(Idx4{j, k, i, l}) + at(Idx4{k, i, j, l});
          if (!Field<T>::is_zero(b, tol)) {
            fail("first Bianchi identity", {i, j, k, l}, {b});
            break;
          }
        }
  return rep;
}

}  // namespace

template <class T>
CheckReport<T> validate_curvature_symmetries(const CurvatureTensor<T>& a, double tol) {
  // Bianchi is linear, so only tuples meeting a stored orbit can fail; the
  // exhaustive sweep is still cheap enough at these dimensions.
  return validate<T>(a.dim(), [&](const Idx4& x) { return a.get(x); }, false, tol);
}

template <class T>
CheckReport<T> validate_curvature_symmetries(const std::vector<T>& d, int n, double tol) {
  if (d.size() != static_cast<std::size_t>(n) * n * n * n) throw ArityError("dense tensor size mismatch");
  return validate<T>(
      n,
      [&](const Idx4& x) {
        return d[((static_cast<std::size_t>(x[0]) * n + x[1]) * n + x[2]) * n + x[3]];
      },
      true, tol);
}

template class CurvatureTensor<Rational>;
template class CurvatureTensor<double>;
template CheckReport<Rational> validate_curvature_symmetries(const CurvatureTensor<Rational>&, double);
template CheckReport<double> validate_curvature_symmetries(const CurvatureTensor<double>&, double);
template CheckReport<Rational> validate_curvature_symmetries(const std::vector<Rational>&, int, double);
template CheckReport<double> validate_curvature_symmetries(const std::vector<double>&, int, double);

}  // namespace jts

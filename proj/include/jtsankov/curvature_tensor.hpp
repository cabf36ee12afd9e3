#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jtsankov/field.hpp"
#include "jtsankov/linalg.hpp"

namespace jts {

using Idx4 = std::array<int, 4>;

// Least element of the orbit under (i,j)-swap, (k,l)-swap and pair exchange,
// with the sign relating the input to it. Sign 0 when the entry is forced to vanish.
Idx4 canonical_index(const Idx4& idx, int& sign);
// The 8 orbit elements with their signs relative to idx.
std::vector<std::pair<Idx4, int>> orbit(const Idx4& idx);

// Sparse tensor with the pair symmetries built in; only Bianchi can fail.
template <class T>
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int n) : n_(n) {}

  int dim() const { return n_; }
  // Sets the orbit of idx so that A(idx) = v.
  void set(const Idx4& idx, const T& v);
  void add(const Idx4& idx, const T& v);
  T get(const Idx4& idx) const;
  T operator()(int i, int j, int k, int l) const { return get({i, j, k, l}); }
  const std::map<Idx4, T>& canonical_entries() const { return e_; }
  // Every nonzero component, all orbit members included.
  std::vector<std::pair<Idx4, T>> expanded() const;
  std::vector<T> dense() const;

  friend bool operator==(const CurvatureTensor& a, const CurvatureTensor& b) {
    return a.n_ == b.n_ && a.e_ == b.e_;
  }

 private:
  void check(const Idx4& idx) const;
  int n_ = 0;
  std::map<Idx4, T> e_;
};

struct Note {
  std::string name;
  bool holds = true;
  std::string detail;
};

template <class T>
struct Witness {
  std::string description;
  std::vector<int> indices;     // basis indices involved, in formula order
  std::vector<Vec<T>> vectors;  // the test vectors, in formula order
  std::vector<T> residual;      // nonzero vector or component list
};

template <class T>
struct CheckReport {
  std::string property;
  bool holds = true;
  std::optional<Witness<T>> witness;
  std::size_t checked = 0;
  std::vector<Note> notes;
  std::vector<std::pair<std::string, T>> values;
};

template <class T>
CheckReport<T> validate_curvature_symmetries(const CurvatureTensor<T>& a, double tol = kDefaultTol);
// Dense n^4 array, row-major in (i,j,k,l); checks the pair symmetries as well.
template <class T>
CheckReport<T> validate_curvature_symmetries(const std::vector<T>& dense, int n, double tol = kDefaultTol);

}  // namespace jts

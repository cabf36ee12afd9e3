#pragma once

#include <string>

#include "json.hpp"
#include "jtsankov/realizations.hpp"
#include "jtsankov/scalar.hpp"
#include "jtsankov/symmetry.hpp"

namespace jts {

using json = nlohmann::ordered_json;

// All readers throw ParseError on malformed input.

// {"num": "p", "den": "q"} with decimal strings. Readers also take "p/q"
// strings and plain JSON numbers (converted through their shortest decimal form).
json to_json(const Rational& r);
Rational rational_from_json(const json& j);
json to_json(double d);
json to_json(const Scalar& s);

// {"op": ..., "args": [...]}, {"var": i} (0-based), or a rational.
json to_json(const FnExpr& f);
FnExpr fn_from_json(const json& j);

template <class T>
json matrix_to_json(const Matrix<T>& m);
Matrix<Rational> rational_matrix_from_json(const json& j);

// {"dim", "form", "tensor": [{"idx": [i,j,k,l], "val"}], "labels": {"0": ...}}, 0-based indices.
// The tensor lists canonical orbit representatives.
json to_json(const Model0<Rational>& m);
Model0<Rational> model_from_json(const json& j);

// {"a", "b", "C", "psi": {"i,j": [b expressions]}} with 1-based i <= j.
json to_json(const PlaneWaveMetric& m);
PlaneWaveMetric metric_from_json(const json& j);

// {"phi": {"1,1": expr, ...}}; absent entries default to the identity.
PhiFamily phi_family_from_json(const json& j);
json to_json(const PhiFamily& f);
// {"a": {"1,1": value, ...}}; absent entries default to 1.
AFamily a_family_from_json(const json& j);
json to_json(const AFamily& a);

// {"b": [[8 values] x 3], "c": [c12, c13, c23]}
KernelParams<Rational> kernel_params_from_json(const json& j);
json to_json(const KernelParams<Rational>& p);

template <class T>
json report_to_json(const CheckReport<T>& r, const std::vector<std::string>& labels = {});
// Components with coordinate labels.
template <class T>
json tensor_to_json(const CoordTensor<T>& t, const std::vector<std::string>& labels);

json read_json_file(const std::string& path);

}  // namespace jts

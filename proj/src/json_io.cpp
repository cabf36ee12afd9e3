#include "jtsankov/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace jts {

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_from_json(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

// "i,j" -> (i, j), both 1-based.
std::pair<int, int> pair_key(const std::string& k, int max) {
  auto comma = k.find(',');
  if (comma == std::string::npos) bad("expected a key of the form \"i,j\", got \"" + k + "\"");
  int i = 0, j = 0;
  auto r1 = std::from_chars(k.data(), k.data() + comma, i);
  auto r2 = std::from_chars(k.data() + comma + 1, k.data() + k.size(), j);
  if (r1.ec != std::errc() || r2.ec != std::errc() || r1.ptr != k.data() + comma || r2.ptr != k.data() + k.size())
    bad("bad index pair \"" + k + "\"");
  if (i < 1 || j < 1 || i > max || j > max) bad("index pair \"" + k + "\" out of range");
  return {i, j};
}

const std::map<std::string, FnExpr::Op>& op_names() {
  using Op = FnExpr::Op;
  static const std::map<std::string, Op> names{{"add", Op::add}, {"sub", Op::sub}, {"mul", Op::mul},
                                               {"div", Op::div}, {"pow", Op::pow}, {"neg", Op::neg},
                                               {"exp", Op::exp}, {"sin", Op::sin}, {"cos", Op::cos},
                                               {"log", Op::log}, {"compose", Op::compose}};
  return names;
}

std::string op_name(FnExpr::Op op) {
  for (const auto& [k, v] : op_names())
    if (v == op) return k;
  throw Error("no name for expression node");
}

}  // namespace

json to_json(const Rational& r) { return json{{"num", r.num_str()}, {"den", r.den_str()}}; }

Rational rational_from_json(const json& j) {
  try {
    if (j.is_object()) {
      const json& n = field(j, "num");
      const json& d = j.contains("den") ? j.at("den") : json("1");
      auto text = [](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        bad("rational parts must be integer strings");
      };
      return Rational::from_parts(text(n), text(d));
    }
    if (j.is_string()) return Rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) {
      double d = j.get<double>();
      char buf[512];
      auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
      if (res.ec != std::errc()) bad("number out of range");
      return Rational(std::string_view(buf, res.ptr - buf));
    }
  } catch (const DomainError& e) {
    bad(e.what());
  }
  bad("expected a rational value");
}

json to_json(double d) { return json(d); }

json to_json(const Scalar& s) { return s.is_rational() ? to_json(s.rational()) : json(s.to_double()); }

json to_json(const FnExpr& f) {
  using Op = FnExpr::Op;
  switch (f.op()) {
    case Op::constant:
      return to_json(f.value());
    case Op::var:
      return json{{"var", f.index()}};
    case Op::pow:
      return json{{"op", "pow"}, {"args", json::array({to_json(f.args()[0]), to_json(Rational(f.index()))})}};
    default: {
      json args = json::array();
      for (const auto& a : f.args()) args.push_back(to_json(a));
      return json{{"op", op_name(f.op())}, {"args", args}};
    }
  }
}

FnExpr fn_from_json(const json& j) {
  using Op = FnExpr::Op;
  if (j.is_number() || j.is_string()) return FnExpr(rational_from_json(j));
  if (!j.is_object()) bad("expression must be an object, number or string");
  if (j.contains("var")) {
    int v = int_from_json(j.at("var"), "var");
    if (v < 0) bad("negative variable index");
    return FnExpr::var(v);
  }
  if (j.contains("num")) return FnExpr(rational_from_json(j));
  const json& opj = field(j, "op");
  if (!opj.is_string()) bad("op must be a string");
  auto it = op_names().find(opj.get<std::string>());
  if (it == op_names().end()) bad("unknown expression op '" + opj.get<std::string>() + "'");
  const json& aj = field(j, "args");
  if (!aj.is_array()) bad("args must be an array");
  std::vector<FnExpr> args;
  Op op = it->second;
  auto need = [&](std::size_t n) {
    if (aj.size() != n) bad("op '" + it->first + "' takes " + std::to_string(n) + " argument(s)");
  };
  switch (op) {
    case Op::pow: {
      need(2);
      Rational e = rational_from_json(aj[1]);
      if (!e.is_integer()) bad("pow exponent must be an integer");
      return FnExpr::pow(fn_from_json(aj[0]), std::stoi(e.num_str()));
    }
    case Op::neg:
      need(1);
      return -fn_from_json(aj[0]);
    case Op::exp:
      need(1);
      return FnExpr::exp(fn_from_json(aj[0]));
    case Op::sin:
      need(1);
      return FnExpr::sin(fn_from_json(aj[0]));
    case Op::cos:
      need(1);
      return FnExpr::cos(fn_from_json(aj[0]));
    case Op::log:
      need(1);
      return FnExpr::log(fn_from_json(aj[0]));
    case Op::compose:
      need(2);
      try {
        return FnExpr::compose(fn_from_json(aj[0]), fn_from_json(aj[1]));
      } catch (const ArityError& e) {
        bad(e.what());
      }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
      if (aj.size() < 2) bad("op '" + it->first + "' takes at least 2 arguments");
      FnExpr acc = fn_from_json(aj[0]);
      for (std::size_t k = 1; k < aj.size(); ++k) {
        FnExpr b = fn_from_json(aj[k]);
        if (op == Op::add) acc = acc + b;
        if (op == Op::sub) acc = acc - b;
        if (op == Op::mul) acc = acc * b;
        if (op == Op::div) acc = acc / b;
      }
      return acc;
    }
    default:
      break;
  }
  bad("unsupported expression op");
}

template <class T>
json matrix_to_json(const Matrix<T>& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, Rational>)
        row.push_back(to_json(m(i, j)));
      else
        row.push_back(json(m(i, j)));
    }
    out.push_back(row);
  }
  return out;
}

Matrix<Rational> rational_matrix_from_json(const json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  std::vector<Vec<Rational>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) bad("matrix rows must be arrays");
    Vec<Rational> row;
    for (const auto& x : r) row.push_back(rational_from_json(x));
    if (!rows.empty() && row.size() != rows[0].size()) bad("ragged matrix");
    rows.push_back(row);
  }
  if (rows.empty()) return Matrix<Rational>(0, 0);
  return Matrix<Rational>::from_rows(rows);
}

json to_json(const Model0<Rational>& m) {
  json tensor = json::array();
  for (const auto& [idx, v] : m.tensor().canonical_entries())
    tensor.push_back(json{{"idx", json::array({idx[0], idx[1], idx[2], idx[3]})}, {"val", to_json(v)}});
  json labels = json::object();
  for (int i = 0; i < static_cast<int>(m.labels().size()); ++i) labels[std::to_string(i)] = m.labels()[i];
  return json{{"dim", m.dim()}, {"form", matrix_to_json(m.form())}, {"tensor", tensor}, {"labels", labels}};
}

Model0<Rational> model_from_json(const json& j) {
  int n = int_from_json(field(j, "dim"), "dim");
  if (n < 1) bad("dim must be positive");
  Matrix<Rational> form = rational_matrix_from_json(field(j, "form"));
  if (static_cast<int>(form.rows()) != n || static_cast<int>(form.cols()) != n) bad("form must be dim x dim");
  if (!form.is_symmetric()) bad("form must be symmetric");
  CurvatureTensor<Rational> a(n);
  const json& t = field(j, "tensor");
  if (!t.is_array()) bad("tensor must be an array");
  for (const auto& e : t) {
    const json& ij = field(e, "idx");
    if (!ij.is_array() || ij.size() != 4) bad("tensor idx must have 4 entries");
    Idx4 idx;
    for (int k = 0; k < 4; ++k) {
      idx[k] = int_from_json(ij[k], "tensor index");
      if (idx[k] < 0 || idx[k] >= n) bad("tensor index out of range");
    }
    Rational v = rational_from_json(field(e, "val"));
    int sign;
    canonical_index(idx, sign);
    if (sign == 0) {
      if (!v.is_zero()) bad("nonzero value on an antisymmetric diagonal");
      continue;
    }
    a.set(idx, v);
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const json& l = j.at("labels");
    if (l.is_array()) {
      for (const auto& s : l) labels.push_back(s.get<std::string>());
    } else if (l.is_object() && !l.empty()) {
      labels.assign(n, "");
      for (const auto& [k, v] : l.items()) {
        int i = -1;
        auto r = std::from_chars(k.data(), k.data() + k.size(), i);
        if (r.ec != std::errc() || i < 0 || i >= n || !v.is_string()) bad("bad label entry '" + k + "'");
        labels[i] = v.get<std::string>();
      }
      for (int i = 0; i < n; ++i)
        if (labels[i].empty()) labels[i] = "e" + std::to_string(i);
    }
    if (!labels.empty() && static_cast<int>(labels.size()) != n) bad("need one label per basis vector");
  }
  try {
    return Model0<Rational>(form, a, labels);
  } catch (const DegenerateFormError& e) {
    bad(std::string("form is degenerate: ") + e.what());
  }
}

json to_json(const PlaneWaveMetric& m) {
  json psi = json::object();
  for (int i = 0; i < m.a(); ++i)
    for (int j = i; j < m.a(); ++j) {
      bool any = false;
      json list = json::array();
      for (int mu = 0; mu < m.b(); ++mu) {
        any = any || !m.psi(i, j, mu).is_zero();
        list.push_back(to_json(m.psi(i, j, mu)));
      }
      if (any) psi[std::to_string(i + 1) + "," + std::to_string(j + 1)] = list;
    }
  json out{{"a", m.a()}, {"b", m.b()}, {"C", matrix_to_json(m.C())}, {"psi", psi}};
  if (!m.y_labels().empty()) out["y_labels"] = m.y_labels();
  return out;
}

PlaneWaveMetric metric_from_json(const json& j) {
  int a = int_from_json(field(j, "a"), "a");
  int b = int_from_json(field(j, "b"), "b");
  if (a < 1 || b < 0) bad("need a >= 1 and b >= 0");
  Matrix<Rational> c = rational_matrix_from_json(field(j, "C"));
  PlaneWaveMetric m;
  try {
    m = PlaneWaveMetric(a, b, c);
  } catch (const Error& e) {
    bad(std::string("bad C: ") + e.what());
  }
  if (j.contains("psi")) {
    const json& psi = j.at("psi");
    if (!psi.is_object()) bad("psi must be an object keyed by \"i,j\"");
    for (const auto& [k, list] : psi.items()) {
      auto [i, jj] = pair_key(k, a);
      if (!list.is_array() || static_cast<int>(list.size()) != b) bad("psi \"" + k + "\" needs b expressions");
      for (int mu = 0; mu < b; ++mu) {
        try {
          m.set_psi(i - 1, jj - 1, mu, fn_from_json(list[mu]));
        } catch (const ArityError& e) {
          bad("psi \"" + k + "\": " + e.what());
        }
      }
    }
  }
  if (j.contains("y_labels")) {
    try {
      m.set_y_labels(j.at("y_labels").get<std::vector<std::string>>());
    } catch (const std::exception& e) {
      bad(std::string("bad y_labels: ") + e.what());
    }
  }
  return m;
}

PhiFamily phi_family_from_json(const json& j) {
  PhiFamily f = PhiFamily::identity();
  const json& phi = field(j, "phi");
  if (!phi.is_object()) bad("phi must be an object keyed by \"i,j\"");
  for (const auto& [k, v] : phi.items()) {
    auto [i, jj] = pair_key(k, 3);
    if (jj > 2) bad("phi index \"" + k + "\" out of range");
    FnExpr e = fn_from_json(v);
    if (e.max_var() > 0) bad("phi \"" + k + "\" must be univariate in variable 0");
    f.at(i, jj) = e;
  }
  return f;
}

json to_json(const PhiFamily& f) {
  json phi = json::object();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j) phi[std::to_string(i) + "," + std::to_string(j)] = to_json(f.at(i, j));
  return json{{"phi", phi}};
}

AFamily a_family_from_json(const json& j) {
  AFamily a;
  const json& aj = field(j, "a");
  if (!aj.is_object()) bad("a must be an object keyed by \"i,j\"");
  for (const auto& [k, v] : aj.items()) {
    auto [i, jj] = pair_key(k, 3);
    if (jj > 2) bad("a index \"" + k + "\" out of range");
    a.at(i, jj) = rational_from_json(v);
  }
  return a;
}

json to_json(const AFamily& a) {
  json aj = json::object();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j) aj[std::to_string(i) + "," + std::to_string(j)] = to_json(a.at(i, j));
  return json{{"a", aj}};
}

KernelParams<Rational> kernel_params_from_json(const json& j) {
  KernelParams<Rational> p;
  Matrix<Rational> b = rational_matrix_from_json(field(j, "b"));
  if (b.rows() != 3 || b.cols() != 8) bad("kernel b must be 3 x 8");
  p.b = b;
  if (j.contains("c")) {
    const json& c = j.at("c");
    if (!c.is_array() || c.size() != 3) bad("kernel c must list c12, c13, c23");
    for (int k = 0; k < 3; ++k) p.c_antisym[k] = rational_from_json(c[k]);
  }
  return p;
}

json to_json(const KernelParams<Rational>& p) {
  json c = json::array();
  for (const auto& v : p.c_antisym) c.push_back(to_json(v));
  return json{{"b", matrix_to_json(p.b)}, {"c", c}};
}

namespace {

template <class T>
json value_json(const T& v) {
  if constexpr (std::is_same_v<T, Rational>)
    return to_json(v);
  else
    return json(v);
}

template <class T>
json vec_json(const Vec<T>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(value_json(x));
  return out;
}

}  // namespace

template <class T>
json report_to_json(const CheckReport<T>& r, const std::vector<std::string>& labels) {
  json out{{"property", r.property}, {"holds", r.holds}, {"checked", r.checked}};
  if (r.witness) {
    const Witness<T>& w = *r.witness;
    json wj{{"description", w.description}, {"indices", w.indices}};
    if (!labels.empty()) {
      json names = json::array();
      for (int i : w.indices) names.push_back(i >= 0 && i < static_cast<int>(labels.size()) ? labels[i] : "?");
      wj["labels"] = names;
    }
    json vs = json::array();
    for (const auto& v : w.vectors) vs.push_back(vec_json(v));
    wj["vectors"] = vs;
    wj["residual"] = vec_json(w.residual);
    json nz = json::array();
    for (std::size_t i = 0; i < w.residual.size(); ++i)
      if (!exactly_zero(w.residual[i])) nz.push_back(i);
    wj["residual_support"] = nz;
    out["witness"] = wj;
  }
  if (!r.notes.empty()) {
    json notes = json::array();
    for (const auto& n : r.notes) notes.push_back(json{{"name", n.name}, {"holds", n.holds}, {"detail", n.detail}});
    out["notes"] = notes;
  }
  if (!r.values.empty()) {
    json vals = json::object();
    for (const auto& [k, v] : r.values) vals[k] = value_json(v);
    out["values"] = vals;
  }
  return out;
}

template <class T>
json tensor_to_json(const CoordTensor<T>& t, const std::vector<std::string>& labels) {
  json comps = json::array();
  for (const auto& [idx, v] : t.comp) {
    std::string name = t.derivative > 0 ? "nabla" : "";
    if (t.derivative > 1) name += "^" + std::to_string(t.derivative);
    name += t.covariant == 4 ? "R(" : "T(";
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (s) name += (static_cast<int>(s) == t.covariant) ? ";" : ",";
      name += idx[s] < static_cast<int>(labels.size()) ? labels[idx[s]] : std::to_string(idx[s]);
    }
    name += ")";
    comps.push_back(json{{"idx", idx}, {"name", name}, {"val", value_json(v)}});
  }
  return json{{"covariant", t.covariant}, {"derivative", t.derivative}, {"components", comps}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("'" + path + "': " + e.what());
  }
}

template json matrix_to_json(const Matrix<Rational>&);
template json matrix_to_json(const Matrix<double>&);
template json report_to_json(const CheckReport<Rational>&, const std::vector<std::string>&);
template json report_to_json(const CheckReport<double>&, const std::vector<std::string>&);
template json tensor_to_json(const CoordTensor<Rational>&, const std::vector<std::string>&);
template json tensor_to_json(const CoordTensor<double>&, const std::vector<std::string>&);

}  // namespace jts

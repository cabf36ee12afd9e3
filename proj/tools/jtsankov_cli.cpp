#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fixtures.hpp"

namespace jts::cli {
namespace {

struct Config {
  std::string mode = "auto";
  double tol = kDefaultTol;
  std::uint64_t seed = 1;
  int points = 1;
  bool points_given = false;
  std::string out;
  bool timing = false;

  std::string target;
  std::string properties = "all";
  std::string generator, kernel_file;
  bool kernel_random = false, kernel_dim = false;

  std::string params;
  std::string sub;
  int order = 1;
  std::vector<std::string> at;
  std::string velocity;
  std::string t = "1";
  int steps = 20;
  std::string quadrature = "exact-poly";
  std::string xi_mode = "frame";
  std::string sweep;
};

// Final artifact goes to --out when given, else stdout.
void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ParseError("cannot write '" + c.out + "'");
  f << text;
}

json config_echo(const Config& c, const std::string& mode) {
  json j{{"target", c.target}, {"mode", mode}, {"tol", c.tol}, {"seed", c.seed}, {"points", c.points}};
  if (!c.params.empty()) j["params"] = c.params;
  return j;
}

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

template <class T>
json matrix_json(const Matrix<T>& m) {
  return matrix_to_json(m);
}

template <class T>
T parse_value(const std::string& s) {
  return Scalar::parse(s, std::is_same_v<T, Rational> ? Mode::rational : Mode::float64).template as<T>();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

// "1,2,1/2,..." with one entry per coordinate, or "x1=2,y11=1/3" with the rest 0.
template <class T>
Vec<T> parse_point(const std::string& text, const std::vector<std::string>& labels) {
  Vec<T> p(labels.size(), T(0));
  auto parts = split(text, ',');
  if (text.find('=') != std::string::npos) {
    for (const auto& part : parts) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw ParseError("mixed point syntax in '" + text + "'");
      auto it = std::find(labels.begin(), labels.end(), part.substr(0, eq));
      if (it == labels.end()) throw ParseError("unknown coordinate '" + part.substr(0, eq) + "'");
      p[it - labels.begin()] = parse_value<T>(part.substr(eq + 1));
    }
    return p;
  }
  if (parts.size() != labels.size())
    throw ParseError("point needs " + std::to_string(labels.size()) + " coordinates, got " +
                     std::to_string(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) p[i] = parse_value<T>(parts[i]);
  return p;
}

// Explicit --at points, or --points random rational points from --seed.
template <class T>
std::vector<Vec<T>> sample_points(const Config& c, const std::vector<std::string>& labels) {
  std::vector<Vec<T>> pts;
  for (const auto& s : c.at) pts.push_back(parse_point<T>(s, labels));
  if (!pts.empty()) return pts;
  std::mt19937_64 rng(c.seed);
  for (int k = 0; k < c.points; ++k)
    pts.push_back(convert_vec<T>(random_rational_point(rng, static_cast<int>(labels.size()))));
  return pts;
}

struct Outcome {
  json report;
  bool holds = true;
  std::string summary;
  std::string artifact;  // replaces the JSON report when set
};

// ---- check-model ----

Outcome check_model(const Config& c) {
  Model0<Rational> m = load_model(c.target);
  std::vector<Property> props;
  if (c.properties == "all")
    props = all_properties();
  else
    for (const auto& s : split(c.properties, ',')) props.push_back(parse_property(s));

  Outcome o;
  json checks = json::array();
  auto sym = validate_curvature_symmetries(m.tensor());
  checks.push_back(report_to_json(sym, m.labels()));
  o.holds = sym.holds;
  Signature sig = signature(m.form());
  std::ostringstream sum;
  sum << "dim " << m.dim() << ", signature (" << sig.p << "," << sig.q << ")\n";
  sum << "  curvature-symmetries: " << (sym.holds ? "holds" : "FAILS") << "\n";
  for (Property p : props) {
    auto r = check_property(m, p, c.tol);
    o.holds = o.holds && r.holds;
    checks.push_back(report_to_json(r, m.labels()));
    sum << "  " << property_name(p) << ": " << (r.holds ? "holds" : "FAILS");
    if (r.witness) sum << " (" << r.witness->description << ")";
    sum << "\n";
  }
  o.report = json{{"command", "check-model"},
                  {"config", config_echo(c, "rational")},
                  {"dim", m.dim()},
                  {"signature", json::array({sig.p, sig.q})},
                  {"checks", checks}};
  o.summary = sum.str();
  return o;
}

// ---- symmetry ----

template <class T>
Outcome symmetry_t(const Config& c, const std::string& mode) {
  Model0<T> m = convert_model<T>(load_model(c.target));
  Outcome o;
  json r{{"command", "symmetry"}, {"config", config_echo(c, mode)}};
  std::ostringstream sum;
  if (c.kernel_dim) {
    KernelDimension d = kernel_dimension();
    r["kernel"] = json{{"constraint_rank", d.constraint_rank},
                       {"b_freedom", d.b_freedom},
                       {"c_freedom", d.c_freedom},
                       {"dimension", d.total}};
    sum << "kernel dimension " << d.total << " (constraint rank " << d.constraint_rank << ")\n";
    o.report = r;
    o.summary = sum.str();
    return o;
  }
  if (m.dim() != 14) throw ParseError("symmetry maps act on the 14-dimensional model");
  LinearMap<T> t;
  if (!c.generator.empty()) {
    GeneratorSpec g = GeneratorSpec::parse(c.generator, Field<T>::exact ? Mode::rational : Mode::float64);
    g.validate(c.tol);
    t = generator_map<T>(g, c.tol);
    r["generator"] = g.str();
  } else {
    KernelParams<Rational> p = c.kernel_random ? random_kernel_params(c.seed)
                                               : kernel_params_from_json(read_json_file(c.kernel_file));
    r["kernel_params"] = to_json(p);
    KernelParams<T> pt;
    pt.b = convert_matrix<T>(p.b);
    for (int k = 0; k < 3; ++k) pt.c_antisym[k] = Field<T>::from(p.c_antisym[k]);
    t = kernel_element(pt, c.tol);
    KernelDimension d = kernel_dimension();
    r["kernel"] = json{{"constraint_rank", d.constraint_rank}, {"dimension", d.total}};
  }
  auto rep = is_symmetry(t, m, c.tol);
  o.holds = rep.holds;
  r["map"] = matrix_json(t);
  r["checks"] = json::array({report_to_json(rep, m.labels())});
  sum << "is_symmetry: " << (rep.holds ? "holds" : "FAILS") << "\n";
  try {
    Matrix<T> tau_m = tau(t, m, c.tol);
    r["tau"] = matrix_json(tau_m);
    r["det_tau"] = value_json(determinant(tau_m));
    sum << "det tau = " << Field<T>::str(determinant(tau_m)) << "\n";
  } catch (const ConstraintError& e) {
    r["tau"] = nullptr;
    sum << "tau undefined: " << e.what() << "\n";
  }
  o.report = r;
  o.summary = sum.str();
  return o;
}

// ---- geometry ----

template <class T>
json point_json(const Vec<T>& p) {
  return vec_json(p);
}

template <class T>
Outcome geometry_t(const Config& c, const GeometryInput& in, const std::string& mode) {
  const PlaneWaveMetric& m = in.metric;
  auto labels = m.coordinate_labels();
  Outcome o;
  json r{{"command", "geometry " + c.sub}, {"config", config_echo(c, mode)}};
  std::ostringstream sum;

  if (c.sub == "curvature" || c.sub == "nabla-r") {
    int k = c.sub == "curvature" ? 0 : c.order;
    if (k < 0) throw ParseError("--order must be non-negative");
    json pts = json::array();
    for (const auto& p : sample_points<T>(c, labels)) {
      auto t = k == 0 ? curvature_at(m, p) : covariant_derivative_R(m, p, k);
      json e = tensor_to_json(t, labels);
      e["point"] = point_json(p);
      pts.push_back(e);
      sum << "point " << pts.size() << ": " << t.comp.size() << " nonzero components\n";
    }
    r["order"] = k;
    r["points"] = pts;
  } else if (c.sub == "verify-0-model") {
    json checks = json::array();
    std::size_t failed = 0, n = 0;
    for (const auto& p : sample_points<T>(c, labels)) {
      auto rep = verify_0_model(m, p, c.tol);
      ++n;
      if (!rep.holds) {
        ++failed;
        o.holds = false;
        json e = report_to_json(rep, m14_labels());
        e["point"] = point_json(p);
        if (failed <= 10) checks.push_back(e);
      }
    }
    r["checked_points"] = n;
    r["failed_points"] = failed;
    r["holds"] = o.holds;
    r["failures"] = checks;
    sum << "0-model at " << n << " points: " << (o.holds ? "holds" : "FAILS at " + std::to_string(failed)) << "\n";
  } else if (c.sub == "xi") {
    XiMode xm = parse_xi_mode(c.xi_mode);
    if (!c.sweep.empty()) {
      // x1=a:b:step over a base point (--at, default the origin).
      auto eq = c.sweep.find('=');
      if (eq == std::string::npos) throw ParseError("--sweep wants NAME=START:STOP:STEP");
      std::string name = c.sweep.substr(0, eq);
      auto idx = std::find(labels.begin(), labels.end(), name) - labels.begin();
      if (idx == static_cast<long>(labels.size())) throw ParseError("unknown coordinate '" + name + "'");
      auto range = split(c.sweep.substr(eq + 1), ':');
      if (range.size() != 3) throw ParseError("--sweep wants NAME=START:STOP:STEP");
      // Steps are counted in exact arithmetic so the grid does not drift.
      Rational a(range[0]), b(range[1]), h(range[2]);
      if (h.sign() <= 0 || b < a) throw ParseError("--sweep needs STEP > 0 and STOP >= START");
      Vec<T> base = c.at.empty() ? Vec<T>(labels.size(), T(0)) : parse_point<T>(c.at.front(), labels);
      std::string csv = name + ",Xi\n";
      json rows = json::array();
      for (Rational s = a; s <= b; s += h) {
        base[idx] = Field<T>::from(s);
        T xi = xi_invariant(m, base, xm, c.tol).value;
        csv += Field<T>::str(Field<T>::from(s)) + "," + Field<T>::str(xi) + "\n";
      }
      o.artifact = csv;
      sum << "xi sweep over " << name << " written\n";
    } else {
      json pts = json::array();
      for (const auto& p : sample_points<T>(c, labels)) {
        auto xi = xi_invariant(m, p, xm, c.tol);
        json e{{"point", point_json(p)}, {"xi", value_json(xi.value)}, {"mode", c.xi_mode}};
        if (xm == XiMode::frame)
          e["quotients"] = json{{"q12", value_json(xi.q12)}, {"q11", value_json(xi.q11)}};
        pts.push_back(e);
        sum << "Xi = " << Field<T>::str(xi.value) << "\n";
      }
      r["points"] = pts;
    }
  } else if (c.sub == "symmetric") {
    if (!in.a) throw ParseError("symmetric applies to m-a only");
    auto rep = symmetric_space_check(*in.a, c.points_given ? c.points : 20, c.seed);
    o.holds = rep.holds;
    r["a"] = to_json(*in.a)["a"];
    r["checks"] = json::array({report_to_json(rep)});
    auto res = symmetric_space_residuals(*in.a);
    sum << "residuals (" << res[0] << ", " << res[1] << ", " << res[2] << "): "
        << (rep.holds ? "locally symmetric" : "not locally symmetric") << "\n";
  } else if (c.sub == "geodesic" || c.sub == "exp-inverse") {
    Quadrature q = parse_quadrature(c.quadrature);
    auto p = c.at.empty() ? Vec<T>(labels.size(), T(0)) : parse_point<T>(c.at.front(), labels);
    if (c.velocity.empty()) throw ParseError("--velocity is required");
    auto v = parse_point<T>(c.velocity, labels);
    if (c.sub == "geodesic") {
      if (c.steps < 1) throw ParseError("--steps must be positive");
      if constexpr (std::is_same_v<T, double>) {
        o.artifact = geodesic_csv(m, p, v, parse_value<double>(c.t), c.steps, q);
      } else {
        // Exact trace: rows at t = k * t_end / steps.
        Rational tend = parse_value<Rational>(c.t);
        std::string csv = "t";
        for (const auto& l : labels) csv += "," + l;
        csv += "\n";
        for (int k = 0; k <= c.steps; ++k) {
          Rational t = tend * Rational(k) / Rational(c.steps);
          csv += t.str();
          for (const auto& x : geodesic(m, p, v, t, q)) csv += "," + x.str();
          csv += "\n";
        }
        o.artifact = csv;
      }
      sum << "geodesic trace with " << c.steps + 1 << " rows\n";
    } else {
      Vec<T> target = geodesic(m, p, v, T(1), q);
      Vec<T> back = exp_inverse(m, p, target, q);
      Vec<T> again = geodesic(m, p, back, T(1), q);
      T dv(0), dq(0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        dv = std::max(dv, Field<T>::abs(back[i] - v[i]));
        dq = std::max(dq, Field<T>::abs(again[i] - target[i]));
      }
      o.holds = Field<T>::is_zero(dv, c.tol) && Field<T>::is_zero(dq, c.tol);
      r["point"] = point_json(p);
      r["velocity"] = vec_json(v);
      r["target"] = vec_json(target);
      r["recovered_velocity"] = vec_json(back);
      r["velocity_residual"] = value_json(dv);
      r["position_residual"] = value_json(dq);
      r["holds"] = o.holds;
      sum << "roundtrip residual " << Field<T>::str(std::max(dv, dq)) << "\n";
    }
  } else {
    throw ParseError("unknown geometry subcommand '" + c.sub + "'");
  }
  o.report = r;
  o.summary = sum.str();
  return o;
}

std::string resolve_mode(const std::string& mode, bool exact_possible) {
  if (mode == "auto") return exact_possible ? "rational" : "float";
  parse_mode(mode);
  return mode;
}

Outcome run(const Config& c, const std::string& command) {
  if (command == "check-model") {
    if (c.mode != "auto" && c.mode != "rational") throw ParseError("check-model runs in rational mode");
    return check_model(c);
  }
  if (command == "symmetry") {
    std::string mode = resolve_mode(c.mode, true);
    return mode == "rational" ? symmetry_t<Rational>(c, mode) : symmetry_t<double>(c, mode);
  }
  GeometryInput in = load_geometry(c.target, c.params);
  std::string mode = resolve_mode(c.mode, in.metric.rational_closed());
  if (c.sub == "symmetric") mode = "rational";
  return parse_mode(mode) == Mode::rational ? geometry_t<Rational>(c, in, mode) : geometry_t<double>(c, in, mode);
}

}  // namespace
}  // namespace jts::cli

int main(int argc, char** argv) {
  using namespace jts::cli;
  Config c;
  CLI::App app{"Exact checks for Jacobi-Tsankov curvature models and their plane-wave realizations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--mode", c.mode, "rational | float | auto (rational when the input allows it)")
      ->check(CLI::IsMember({"auto", "rational", "float"}));
  app.add_option("--tol", c.tol, "tolerance for float mode");
  app.add_option("--seed", c.seed, "seed for sampled points");
  auto* pts = app.add_option("--points", c.points, "number of sampled points")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "write the report or CSV here instead of stdout");
  app.add_flag("--timing", c.timing, "include wall-clock duration in the report");

  auto* cm = app.add_subcommand("check-model", "algebraic checks on a 0-model");
  cm->add_option("model", c.target, "m14 or a model JSON file")->required();
  cm->add_option("--properties", c.properties, "comma-separated property names, or all");

  auto* sy = app.add_subcommand("symmetry", "symmetry-group membership on the 14-model");
  sy->add_option("model", c.target, "m14")->required();
  auto* g = sy->add_option("--generator", c.generator, "swap12 | swap13 | rotation:c,s | dilatation:a1,a2,a3");
  auto* k = sy->add_option("--kernel", c.kernel_file, "kernel parameter JSON");
  auto* kr = sy->add_flag("--kernel-random", c.kernel_random, "random kernel element from --seed");
  auto* kd = sy->add_flag("--kernel-dim", c.kernel_dim, "report the kernel dimension count");
  g->excludes(k)->excludes(kr)->excludes(kd);
  k->excludes(kr)->excludes(kd);
  kr->excludes(kd);

  auto* ge = app.add_subcommand("geometry", "plane-wave metric computations");
  ge->add_option("metric", c.target, "m-a, m-phi or a metric JSON file")->required();
  ge->add_option("--params", c.params, "AFamily or PhiFamily JSON");
  ge->require_subcommand(1);
  auto add_points = [&](CLI::App* s) {
    s->add_option("--at", c.at, "point as v1,v2,... or name=value,...");
  };
  auto* cu = ge->add_subcommand("curvature", "curvature components");
  add_points(cu);
  auto* nr = ge->add_subcommand("nabla-r", "covariant derivatives of curvature");
  add_points(nr);
  nr->add_option("--order", c.order, "derivative order");
  auto* v0 = ge->add_subcommand("verify-0-model", "0-model realization at sampled points");
  add_points(v0);
  auto* xi = ge->add_subcommand("xi", "the isometry invariant Xi");
  add_points(xi);
  xi->add_option("--xi-mode", c.xi_mode, "frame | direct")->check(CLI::IsMember({"frame", "direct"}));
  xi->add_option("--sweep", c.sweep, "NAME=START:STOP:STEP, CSV output");
  ge->add_subcommand("symmetric", "local symmetry of m-a");
  auto* gd = ge->add_subcommand("geodesic", "geodesic trace as CSV");
  auto* ei = ge->add_subcommand("exp-inverse", "exp_inverse after geodesic roundtrip");
  for (auto* s : {gd, ei}) {
    s->add_option("--at", c.at, "start point");
    s->add_option("--velocity", c.velocity, "initial velocity")->required();
    s->add_option("--quadrature", c.quadrature, "exact-poly | adaptive")
        ->check(CLI::IsMember({"exact-poly", "adaptive"}));
  }
  gd->add_option("--t", c.t, "end parameter");
  gd->add_option("--steps", c.steps, "number of intervals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  c.points_given = pts->count() > 0;
  std::string command = app.get_subcommands().front()->get_name();
  if (command == "geometry") c.sub = ge->get_subcommands().front()->get_name();
  if (command == "symmetry" && c.generator.empty() && c.kernel_file.empty() && !c.kernel_random && !c.kernel_dim) {
    std::cerr << "symmetry needs --generator, --kernel, --kernel-random or --kernel-dim\n";
    return 2;
  }

  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run(c, command);
  } catch (const jts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (o.artifact.empty()) {
    o.report["holds"] = o.holds;
    if (c.timing)
      o.report["duration_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.artifact = o.report.dump(2) + "\n";
  }
  try {
    emit(c, o.artifact);
  } catch (const jts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << o.summary;
  if (c.timing)
    std::cerr << "duration "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  return o.holds ? 0 : 1;
}

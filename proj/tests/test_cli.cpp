#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::filesystem::path scratch() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / ("jtsankov_cli_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Run run(const std::string& args) {
  auto err = scratch() / "stderr.txt";
  std::string cmd = std::string(JTS_CLI_PATH) + " " + args + " 2>" + err.string();
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string data(const char* name) { return std::string(JTS_DATA_DIR) + "/" + name; }

std::string rat(const json& j) { return j.at("num").get<std::string>() + "/" + j.at("den").get<std::string>(); }

const json* find_check(const json& report, const std::string& property) {
  for (const auto& c : report.at("checks"))
    if (c.at("property") == property) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("check-model: Tsankov properties of m14 hold") {
  auto r = run("check-model m14 --properties jacobi-tsankov,mixed-tsankov");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("holds") == true);
  CHECK(j.at("signature") == json::array({8, 6}));
  REQUIRE(find_check(j, "jacobi-tsankov"));
  CHECK(find_check(j, "jacobi-tsankov")->at("holds") == true);
  CHECK(find_check(j, "mixed-tsankov")->at("holds") == true);
  CHECK(r.err.find("signature (8,6)") != std::string::npos);
}

TEST_CASE("check-model: 2-step nilpotency fails with the expected witness") {
  auto r = run("check-model m14 --properties 2-step-jacobi-nilpotent");
  CHECK(r.code == 1);
  auto j = json::parse(r.out);
  CHECK(j.at("holds") == false);
  const json* c = find_check(j, "2-step-jacobi-nilpotent");
  REQUIRE(c);
  const auto& w = c->at("witness");
  CHECK(w.at("labels") == json::array({"a3", "a2", "a1"}));
  // Residual is alpha_1*: a single 1 in slot 3.
  const auto& res = w.at("residual");
  REQUIRE(res.size() == 14);
  for (int i = 0; i < 14; ++i) CHECK(rat(res[i]) == (i == 3 ? "1/1" : "0/1"));
}

TEST_CASE("check-model: the zero model satisfies every property") {
  auto r = run("check-model " + data("zero.json") + " --properties all");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("holds") == true);
  CHECK(j.at("checks").size() > 5);
}

TEST_CASE("symmetry: dilatation generator") {
  auto r = run("symmetry m14 --generator dilatation:2,1/2,1");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("holds") == true);
  const auto& t = j.at("tau");
  CHECK(rat(t[0][0]) == "1/2");
  CHECK(rat(t[1][1]) == "2/1");
  CHECK(rat(t[2][2]) == "1/1");
  CHECK(rat(t[0][1]) == "0/1");
  CHECK(rat(j.at("det_tau")) == "1/1");
}

TEST_CASE("symmetry: a non-unimodular dilatation is a constraint error") {
  auto r = run("symmetry m14 --generator dilatation:2,1,1");
  CHECK(r.code == 2);
}

TEST_CASE("symmetry: random kernel element and kernel dimension") {
  auto r = run("symmetry m14 --kernel-random --seed 7");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  const auto& t = j.at("tau");
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(rat(t[i][k]) == (i == k ? "1/1" : "0/1"));

  auto d = run("symmetry m14 --kernel-dim");
  CHECK(d.code == 0);
  auto jd = json::parse(d.out);
  CHECK(jd.at("kernel").at("dimension") == 21);
  CHECK(jd.at("kernel").at("constraint_rank") == 6);

  auto f = run("symmetry m14 --kernel " + data("kernel-example.json"));
  CHECK(f.code == 0);
}

TEST_CASE("geometry: symmetric-space check on the all-ones parameters") {
  auto r = run("geometry m-a --params " + data("ones.json") + " symmetric");
  CHECK(r.code == 1);
  auto j = json::parse(r.out);
  const json* c = find_check(j, "locally-symmetric");
  REQUIRE(c);
  const auto& v = c->at("values");
  CHECK(rat(v.at("residual_1")) == "1/1");
  CHECK(rat(v.at("residual_2")) == "5/1");
  CHECK(rat(v.at("residual_3")) == "5/1");

  auto s = run("geometry m-a --params " + data("sym.json") + " symmetric");
  CHECK(s.code == 0);
}

TEST_CASE("geometry: verify-0-model on the symmetric parameter set") {
  auto r = run("geometry m-a --params " + data("sym.json") + " verify-0-model --points 100");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("holds") == true);
}

TEST_CASE("geometry: Xi sweep of the exponential family") {
  auto r = run("geometry m-phi --params " + data("exp-family.json") + " xi --sweep x1=0:1:0.1");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,Xi");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::abs(std::stod(line.substr(comma + 1))) < 1e-12);
  }
  CHECK(rows == 11);
}

TEST_CASE("geometry: Xi of the e + e^2 family varies") {
  auto r = run("geometry m-phi --params " + data("e-2e-family.json") + " xi --sweep x1=-2:0:1");
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  std::vector<double> xi;
  while (std::getline(in, line))
    if (!line.empty()) xi.push_back(std::stod(line.substr(line.find(',') + 1)));
  REQUIRE(xi.size() == 3);
  CHECK(std::abs(xi[2] - 1.0 / 81.0) < 1e-12);
  CHECK(std::abs(xi[0] - xi[2]) > 1e-3);
}

TEST_CASE("geometry: curvature, nabla-r and geodesic output") {
  auto c = run("geometry m-a --params " + data("ones.json") + " curvature --at x1=1,x2=2,x3=3");
  CHECK(c.code == 0);
  auto j = json::parse(c.out);
  bool seen = false;
  for (const auto& comp : j.at("points")[0].at("components"))
    if (comp.at("name") == "R(x1,x2,x2,x1)") {
      seen = true;
      CHECK(rat(comp.at("val")) == "-9/1");  // -a31 a32 x3^2
    }
  CHECK(seen);

  auto n = run("geometry m-a --params " + data("ones.json") + " nabla-r --order 1 --at x3=5");
  CHECK(n.code == 0);
  auto jn = json::parse(n.out);
  seen = false;
  for (const auto& comp : jn.at("points")[0].at("components"))
    if (comp.at("name") == "nablaR(x1,x2,x2,x1;x3)") {
      seen = true;
      CHECK(rat(comp.at("val")) == "-10/1");
    }
  CHECK(seen);

  auto g = run("geometry m-a --params " + data("sym.json") + " geodesic --at x1=1 --velocity x1=1,y11=2 --steps 2");
  CHECK(g.code == 0);
  std::istringstream in(g.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x1,x2,x3,xs1,xs2,xs3,y11,y12,y21,y22,y31,y32,y41,y42");
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("1/2,3/2,0,0,", 0) == 0);

  auto e = run("geometry m-a --params " + data("sym.json") + " exp-inverse --at x1=1 --velocity x1=1,y11=2");
  CHECK(e.code == 0);
}

TEST_CASE("rational reruns are byte-identical") {
  std::string args = "geometry m-a --params " + data("ones.json") + " curvature --points 3 --seed 11";
  auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto c = run("geometry m-a --params " + data("ones.json") + " curvature --points 3 --seed 12");
  CHECK(c.out != a.out);
  std::string sym = "symmetry m14 --kernel-random --seed 5";
  CHECK(run(sym).out == run(sym).out);
}

TEST_CASE("--out writes the report to a file") {
  auto path = scratch() / "report.json";
  auto r = run("check-model m14 --properties jacobi-square-zero --out " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(json::parse(slurp(path)).at("holds") == true);
}

TEST_CASE("usage and parse errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("check-model missing-file.json").code == 2);
  CHECK(run("check-model m14 --properties not-a-property").code == 2);
  CHECK(run("symmetry m14 --generator twist").code == 2);
  CHECK(run("geometry m-a --params " + data("ones.json") + " curvature --at x9=1").code == 2);
  CHECK(run("geometry m-a --params " + data("ones.json") + " curvature --mode bogus").code == 2);
  CHECK(run("geometry m-a --params missing.json symmetric").code == 2);
}

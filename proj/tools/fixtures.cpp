#include "fixtures.hpp"

namespace jts::cli {

Model0<Rational> load_model(const std::string& arg) {
  if (arg == "m14") return build_M14();
  return model_from_json(read_json_file(arg));
}

GeometryInput load_geometry(const std::string& arg, const std::string& params_path) {
  GeometryInput in;
  in.name = arg;
  if (arg == "m-a") {
    in.a = params_path.empty() ? AFamily{} : a_family_from_json(read_json_file(params_path));
    in.metric = build_M_A(*in.a);
  } else if (arg == "m-phi") {
    in.phi = params_path.empty() ? PhiFamily::identity() : phi_family_from_json(read_json_file(params_path));
    in.metric = build_M_Phi(*in.phi);
  } else {
    if (!params_path.empty()) throw ParseError("--params only applies to m-a and m-phi");
    in.metric = metric_from_json(read_json_file(arg));
  }
  return in;
}

}  // namespace jts::cli

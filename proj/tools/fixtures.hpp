#pragma once

#include <optional>
#include <string>

#include "jtsankov/json_io.hpp"

namespace jts::cli {

// "m14" or a Model0 JSON file.
Model0<Rational> load_model(const std::string& arg);

struct GeometryInput {
  std::string name;
  PlaneWaveMetric metric;
  std::optional<AFamily> a;
  std::optional<PhiFamily> phi;
};

// "m-a", "m-phi" (parameters from params_path, defaults otherwise) or a metric JSON file.
GeometryInput load_geometry(const std::string& arg, const std::string& params_path);

}  // namespace jts::cli

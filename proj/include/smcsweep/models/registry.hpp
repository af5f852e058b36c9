#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "smcsweep/blackbox/simulator.hpp"

namespace smcsweep::models {

// A built-in model selected by name with named numeric parameters.
// Text forms: "counter", "bernoulli:P", "gaussian:MU,SD",
// "switching" or "switching:beta=0.2,eta=0.5".
struct ModelSpec {
  std::string name;
  std::map<std::string, double> params;

  // Sets a parameter after checking it is one the model understands.
  void set(const std::string& param, double value);
  std::string to_string() const;
};

// Throws std::invalid_argument for unknown models or malformed parameters.
ModelSpec parse_model_spec(std::string_view text);

std::vector<std::string> builtin_model_names();
// Parameter names accepted by ModelSpec::set for `model`.
std::vector<std::string> parameter_names(std::string_view model);

std::unique_ptr<blackbox::Model> make_model(const ModelSpec& spec);
std::unique_ptr<blackbox::Simulator> make_simulator(const ModelSpec& spec);

}  // namespace smcsweep::models

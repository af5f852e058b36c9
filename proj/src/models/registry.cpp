#include "smcsweep/models/registry.hpp"

#include <algorithm>
#include <stdexcept>

#include "smcsweep/csv.hpp"
#include "smcsweep/models/calibration.hpp"
#include "smcsweep/models/switching.hpp"

namespace smcsweep::models {
namespace {

double number(std::string_view text, std::string_view context) {
  auto v = csv::parse_double(text);
  if (!v) throw std::invalid_argument("model spec: '" + std::string(text) + "' is not a number in " + std::string(context));
  return *v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<std::string> builtin_model_names() { return {"counter", "bernoulli", "gaussian", "switching"}; }

std::vector<std::string> parameter_names(std::string_view model) {
  if (model == "counter") return {};
  if (model == "bernoulli") return {"p"};
  if (model == "gaussian") return {"mu", "sd"};
  if (model == "switching") {
    return {"beta", "delta_s", "eta", "omega_ada", "omega_wtr", "omega_str", "omega_aa", "feedback", "noise_sd",
            "n_agents"};
  }
  throw std::invalid_argument("unknown model '" + std::string(model) + "'");
}

void ModelSpec::set(const std::string& param, double value) {
  auto names = parameter_names(name);
  if (std::find(names.begin(), names.end(), param) == names.end()) {
    throw std::invalid_argument("model '" + name + "' has no parameter '" + param + "'");
  }
  params[param] = value;
}

std::string ModelSpec::to_string() const {
  std::string out = name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    out += sep + k + "=" + csv::format_double(v);
    sep = ',';
  }
  return out;
}

ModelSpec parse_model_spec(std::string_view text) {
  ModelSpec spec;
  auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  const auto names = parameter_names(spec.name);  // validates the model name
  if (colon == std::string_view::npos) {
    if (spec.name == "bernoulli" || spec.name == "gaussian") {
      throw std::invalid_argument("model '" + spec.name + "' needs parameters, e.g. bernoulli:0.5 or gaussian:0,1");
    }
    return spec;
  }
  auto body = text.substr(colon + 1);
  auto parts = split(body, ',');
  if (body.find('=') == std::string_view::npos) {
    // positional form
    if (parts.size() != names.size()) {
      throw std::invalid_argument("model '" + spec.name + "' takes " + std::to_string(names.size()) +
                                  " positional parameter(s)");
    }
    for (std::size_t i = 0; i < parts.size(); ++i) spec.params[names[i]] = number(parts[i], text);
    return spec;
  }
  for (auto part : parts) {
    auto eq = part.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("model spec: expected name=value in '" + std::string(part) + "'");
    spec.set(std::string(part.substr(0, eq)), number(part.substr(eq + 1), text));
  }
  return spec;
}

std::unique_ptr<blackbox::Model> make_model(const ModelSpec& spec) {
  const auto get = [&](const char* key, std::optional<double> fallback = std::nullopt) {
    auto it = spec.params.find(key);
    if (it != spec.params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("model '" + spec.name + "' is missing parameter '" + key + "'");
  };
  if (spec.name == "counter") return std::make_unique<CounterModel>();
  if (spec.name == "bernoulli") return std::make_unique<BernoulliModel>(get("p"));
  if (spec.name == "gaussian") return std::make_unique<GaussianModel>(get("mu"), get("sd"));
  if (spec.name == "switching") {
    SwitchingParams p;
    for (const auto& [k, v] : spec.params) p.set(k, v);
    return std::make_unique<SwitchingModel>(p);
  }
  throw std::invalid_argument("unknown model '" + spec.name + "'");
}

std::unique_ptr<blackbox::Simulator> make_simulator(const ModelSpec& spec) {
  return std::make_unique<blackbox::InProcessSimulator>(make_model(spec));
}

}  // namespace smcsweep::models

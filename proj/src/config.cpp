#include "qbat/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbat/error.hpp"
#include "qbat/io.hpp"

namespace qbat {

namespace {

double parameter_value(const nlohmann::json& v, const std::string& name) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw ConfigError("parameter '" + name + "' must be a number or \"inf\"");
}

}  // namespace

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!obj.is_object()) throw ConfigError(std::string(context) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(context));
    }
  }
}

ModelSpec model_spec_from_json(const nlohmann::json& j, bool default_normalize) {
  reject_unknown_keys(j, {"family", "n_peripheral", "parameters", "normalize_extensive", "hamiltonian"},
                      "model");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("model.family must be a string");
  }
  ModelSpec spec;
  spec.family = family_from_name(j["family"].get<std::string>());
  spec.normalize_extensive = default_normalize;
  if (j.contains("normalize_extensive")) {
    if (!j["normalize_extensive"].is_boolean()) {
      throw ConfigError("model.normalize_extensive must be a boolean");
    }
    spec.normalize_extensive = j["normalize_extensive"].get<bool>();
  }
  if (spec.family == Family::Custom) {
    if (!j.contains("hamiltonian")) throw ConfigError("custom model needs 'hamiltonian'");
    if (j.contains("n_peripheral") || j.contains("parameters")) {
      throw ConfigError("custom model takes only 'hamiltonian' and 'normalize_extensive'");
    }
    spec.custom = hamiltonian_from_json(j["hamiltonian"]);
    spec.n_peripheral = 0;
  } else {
    if (j.contains("hamiltonian")) throw ConfigError("'hamiltonian' is only valid for family custom");
    if (!j.contains("n_peripheral") || !j["n_peripheral"].is_number_integer() ||
        j["n_peripheral"].get<long long>() < 0) {
      throw ConfigError("model.n_peripheral must be a nonnegative integer");
    }
    spec.n_peripheral = j["n_peripheral"].get<std::size_t>();
    if (j.contains("parameters")) {
      if (!j["parameters"].is_object()) throw ConfigError("model.parameters must be an object");
      for (const auto& [name, value] : j["parameters"].items()) {
        spec.parameters[name] = parameter_value(value, name);
      }
    }
  }
  validate(spec);
  return spec;
}

nlohmann::json to_json(const ModelSpec& spec) {
  nlohmann::json j;
  j["family"] = std::string(family_name(spec.family));
  j["normalize_extensive"] = spec.normalize_extensive;
  if (spec.family == Family::Custom) {
    j["hamiltonian"] = to_json(*spec.custom);
    return j;
  }
  j["n_peripheral"] = spec.n_peripheral;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, fallback] : default_parameters(spec.family)) {
    const double v = spec.parameter(name);
    if (std::isinf(v)) {
      params[name] = "inf";
    } else {
      params[name] = v;
    }
  }
  j["parameters"] = params;
  return j;
}

InitialStateSpec initial_state_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"kind", "degenerate_policy"}, "initial");
  InitialStateSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("initial.kind must be a string");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "battery_ground") {
    spec.kind = InitialKind::BatteryGround;
  } else if (kind == "central_product") {
    spec.kind = InitialKind::CentralProduct;
  } else {
    throw ConfigError("unknown initial.kind '" + kind + "'");
  }
  if (j.contains("degenerate_policy")) {
    if (!j["degenerate_policy"].is_string()) throw ConfigError("degenerate_policy must be a string");
    const auto policy = j["degenerate_policy"].get<std::string>();
    if (policy == "lowest_index") {
      spec.degenerate_policy = DegeneratePolicy::LowestIndex;
    } else if (policy == "uniform_superposition") {
      spec.degenerate_policy = DegeneratePolicy::UniformSuperposition;
    } else {
      throw ConfigError("unknown degenerate_policy '" + policy + "'");
    }
  }
  return spec;
}

nlohmann::json to_json(const InitialStateSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind == InitialKind::BatteryGround ? "battery_ground" : "central_product";
  if (spec.kind == InitialKind::BatteryGround) {
    j["degenerate_policy"] = spec.degenerate_policy == DegeneratePolicy::LowestIndex
                                 ? "lowest_index"
                                 : "uniform_superposition";
  }
  return j;
}

EntropyBase entropy_base_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "e") return EntropyBase::Natural;
  if ((j.is_string() && j.get<std::string>() == "2") || (j.is_number_integer() && j.get<int>() == 2)) {
    return EntropyBase::Two;
  }
  throw ConfigError("entropy_base must be \"e\" or \"2\"");
}

std::string entropy_base_name(EntropyBase base) { return base == EntropyBase::Two ? "2" : "e"; }

}  // namespace qbat

#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qbat/dynamics.hpp"
#include "qbat/models.hpp"

namespace qbat {

/// Throws ConfigError naming the first key of `obj` not in `allowed`.
void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view context);

/// Parses a model object. `default_normalize` applies when the key is absent.
ModelSpec model_spec_from_json(const nlohmann::json& j, bool default_normalize);
nlohmann::json to_json(const ModelSpec& spec);

InitialStateSpec initial_state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InitialStateSpec& spec);

EntropyBase entropy_base_from_json(const nlohmann::json& j);
std::string entropy_base_name(EntropyBase base);

}  // namespace qbat

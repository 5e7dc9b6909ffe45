#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qbat/pauli_algebra.hpp"

namespace qbat {

/// Shortest decimal that round-trips to the same double; "inf"/"nan" spelled out.
std::string format_number(double value);

/// {"n_sites": n, "terms": [{"coeff": [re, im], "ops": "IXYZ"}]}
nlohmann::json to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const nlohmann::json& j);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace qbat

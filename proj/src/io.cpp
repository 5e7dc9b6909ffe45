#include "qbat/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "qbat/error.hpp"

namespace qbat {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, end);
}

nlohmann::json to_json(const LocalHamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms()) {
    terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"ops", t.ops.to_string()}});
  }
  return {{"n_sites", h.n_sites()}, {"terms", terms}};
}

LocalHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("hamiltonian must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n_sites" && key != "terms") throw ConfigError("unknown hamiltonian key '" + key + "'");
  }
  if (!j.contains("n_sites") || !j["n_sites"].is_number_integer() || j["n_sites"].get<long long>() < 1) {
    throw ConfigError("hamiltonian.n_sites must be a positive integer");
  }
  const auto n = j["n_sites"].get<std::size_t>();
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw ConfigError("hamiltonian.terms must be an array");
  }
  std::vector<PauliTerm> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("coeff") || !t.contains("ops")) {
      throw ConfigError("each term needs 'coeff' and 'ops'");
    }
    for (const auto& [key, _] : t.items()) {
      if (key != "coeff" && key != "ops") throw ConfigError("unknown term key '" + key + "'");
    }
    const auto& c = t["coeff"];
    Complex coeff;
    if (c.is_number()) {
      coeff = {c.get<double>(), 0.0};
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      coeff = {c[0].get<double>(), c[1].get<double>()};
    } else {
      throw ConfigError("term coeff must be [re, im]");
    }
    if (!t["ops"].is_string()) throw ConfigError("term ops must be a string");
    const auto ops = t["ops"].get<std::string>();
    if (ops.size() != n) {
      throw ConfigError("term '" + ops + "' length differs from n_sites");
    }
    terms.push_back({coeff, PauliString::parse(ops)});
  }
  return LocalHamiltonian(n, std::move(terms));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qbat

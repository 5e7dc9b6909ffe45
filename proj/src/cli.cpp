#include "qbat/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "qbat/bounds.hpp"
#include "qbat/config.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/error.hpp"
#include "qbat/io.hpp"
#include "qbat/models.hpp"
#include "qbat/operator_backend.hpp"
#include "qbat/scaling_lab.hpp"

namespace qbat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

struct Run {
  json resolved;
  fs::path output_dir;
  std::vector<std::string> outputs;
  std::vector<std::string> validation_errors;

  void write(const std::string& name, std::string_view contents) {
    write_file_atomic(output_dir / name, contents);
    outputs.push_back(name);
  }
  void fail_check(std::string message) { validation_errors.push_back(std::move(message)); }
};

double get_number(const json& config, const char* key, double fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
  return config[key].get<double>();
}

std::size_t get_count(const json& config, const char* key, std::size_t fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_number_integer() || config[key].get<long long>() < 0) {
    throw ConfigError(std::string(key) + " must be a nonnegative integer");
  }
  return config[key].get<std::size_t>();
}

bool get_bool(const json& config, const char* key, bool fallback) {
  if (!config.contains(key)) return fallback;
  if (!config[key].is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
  return config[key].get<bool>();
}

std::vector<std::size_t> get_sizes(const json& config, const char* key) {
  std::vector<std::size_t> sizes;
  if (!config.contains(key)) return sizes;
  if (!config[key].is_array()) throw ConfigError(std::string(key) + " must be an array");
  for (const auto& v : config[key]) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError(std::string(key) + " entries must be positive integers");
    }
    sizes.push_back(v.get<std::size_t>());
  }
  return sizes;
}

const json& require(const json& config, const char* key) {
  if (!config.contains(key)) throw ConfigError(std::string("missing required key '") + key + "'");
  return config[key];
}

std::string relative_difference_note(const char* what, double value, double limit) {
  return std::string(what) + " = " + format_number(value) + " exceeds " + format_number(limit);
}

// --- analyze ---------------------------------------------------------------

void cmd_analyze(const json& config, Run& run, std::ostream& out) {
  reject_unknown_keys(config, {"command", "output_dir", "dense_cap", "model"}, "analyze config");
  const ModelSpec spec = model_spec_from_json(require(config, "model"), false);
  run.resolved["model"] = to_json(spec);

  const LocalHamiltonian h = build(spec);
  const auto profile = extensivity(h);
  json report;
  report["n_total"] = h.n_sites();
  report["n_terms"] = h.terms().size();
  report["locality"] = locality(h);
  report["per_site_g"] = profile.per_site;
  report["g"] = profile.g;
  report["argmax_site"] = profile.argmax_site;
  report["hermitian"] = h.hermitian();
  report["commuting"] = is_commuting(h);
  if (h.n_sites() <= dense_cap()) {
    report["norm"] = spectral_norm(h);
  } else {
    report["norm"] = nullptr;
  }
  run.write("analysis.json", report.dump(2) + "\n");

  out << "n_total    " << h.n_sites() << "\n"
      << "locality   " << locality(h) << "\n"
      << "g          " << format_number(profile.g) << " (site " << profile.argmax_site << ")\n"
      << "norm       " << (report["norm"].is_null() ? std::string("n/a")
                                                    : format_number(report["norm"].get<double>()))
      << "\n"
      << "hermitian  " << (h.hermitian() ? "yes" : "no") << "\n"
      << "commuting  " << (is_commuting(h) ? "yes" : "no") << "\n";
}

// --- bounds ----------------------------------------------------------------

Vector witness_state(const std::string& kind, const ModelSpec& battery, std::size_t n_total) {
  std::string resolved = kind;
  if (resolved == "auto") resolved = has_central_site(battery.family) ? "central_product" : "plus_x";
  if (resolved == "central_product") {
    if (!has_central_site(battery.family)) {
      throw DomainError("central_product witness needs a central-spin layout");
    }
    return central_product_state(n_total);
  }
  if (resolved == "plus_x") {
    const Eigen::Index dim = Eigen::Index{1} << n_total;
    return Vector::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  }
  throw ConfigError("witness_state must be auto, central_product or plus_x");
}

void cmd_bounds(const json& config, Run& run, std::ostream& out) {
  reject_unknown_keys(config,
                      {"command", "output_dir", "dense_cap", "battery", "charger", "sizes",
                       "witness_state"},
                      "bounds config");
  const ModelSpec battery = model_spec_from_json(require(config, "battery"), false);
  const ModelSpec charger = model_spec_from_json(require(config, "charger"), false);
  std::vector<std::size_t> sizes = get_sizes(config, "sizes");
  if (sizes.empty()) sizes.push_back(total_sites(battery));
  std::string witness = "auto";
  if (config.contains("witness_state")) {
    if (!config["witness_state"].is_string()) throw ConfigError("witness_state must be a string");
    witness = config["witness_state"].get<std::string>();
  }
  run.resolved["battery"] = to_json(battery);
  run.resolved["charger"] = to_json(charger);
  run.resolved["sizes"] = sizes;
  run.resolved["witness_state"] = witness;

  std::string csv = bound_report_csv_header() + "\n";
  for (std::size_t n_total : sizes) {
    const bool resize = config.contains("sizes");
    const ModelSpec b = resize ? with_total_sites(battery, n_total) : battery;
    const ModelSpec c = resize ? with_total_sites(charger, n_total) : charger;
    if (total_sites(b) != total_sites(c)) {
      throw StructuralError("battery and charger specs have different site counts");
    }
    const auto report = bound_report(build(b), build(c), witness_state(witness, b, total_sites(b)));
    csv += to_csv_row(report) + "\n";
    const double tol = 1e-8;
    if (report.exact_commutator_norm > report.tightest_valid_bound() + tol) {
      run.fail_check(relative_difference_note("commutator norm", report.exact_commutator_norm,
                                              report.tightest_valid_bound()));
    }
    if (report.witness_lower_bound > report.exact_commutator_norm + tol) {
      run.fail_check(relative_difference_note("witness", report.witness_lower_bound,
                                              report.exact_commutator_norm));
    }
    out << "n_total=" << report.n_total << " exact=" << format_number(report.exact_commutator_norm)
        << " witness=" << format_number(report.witness_lower_bound) << "\n";
  }
  run.write("bounds.csv", csv);
}

// --- heatmap ---------------------------------------------------------------

void cmd_heatmap(const json& config, Run& run, std::ostream& out) {
  reject_unknown_keys(config,
                      {"command", "output_dir", "dense_cap", "reference", "probe", "group_tol",
                       "metric"},
                      "heatmap config");
  const ModelSpec reference = model_spec_from_json(require(config, "reference"), false);
  const ModelSpec probe = model_spec_from_json(require(config, "probe"), false);
  std::optional<double> group_tol;
  if (config.contains("group_tol")) group_tol = get_number(config, "group_tol", 0.0);
  TransitionMetric metric = TransitionMetric::BlockSpectralNorm;
  std::string metric_name = "block_spectral_norm";
  if (config.contains("metric")) {
    if (!config["metric"].is_string()) throw ConfigError("metric must be a string");
    metric_name = config["metric"].get<std::string>();
    if (metric_name == "max_abs_entry") {
      metric = TransitionMetric::MaxAbsEntry;
    } else if (metric_name != "block_spectral_norm") {
      throw ConfigError("metric must be block_spectral_norm or max_abs_entry");
    }
  }
  run.resolved["reference"] = to_json(reference);
  run.resolved["probe"] = to_json(probe);
  run.resolved["metric"] = metric_name;
  if (group_tol) run.resolved["group_tol"] = *group_tol;

  const LocalHamiltonian ref_h = build(reference);
  const LocalHamiltonian probe_h = build(probe);
  const auto map = transition_map(ref_h, probe_h, group_tol, metric);

  std::string csv = "Ea,Eb,value\n";
  const auto n_groups = map.group_energies.size();
  for (std::size_t a = 0; a < n_groups; ++a) {
    for (std::size_t b = 0; b < n_groups; ++b) {
      csv += format_number(map.group_energies[a]) + ',' + format_number(map.group_energies[b]) +
             ',' +
             format_number(map.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) +
             '\n';
    }
  }
  run.write("transition_map.csv", csv);

  json sidecar;
  sidecar["group_energies"] = map.group_energies;
  sidecar["group_dims"] = map.group_dims;
  sidecar["metric"] = metric_name;
  const bool commuting = is_commuting(ref_h);
  sidecar["reference_commuting"] = commuting;
  if (commuting) {
    sidecar["commuting_window"] = commuting_window(extensivity(ref_h).g, locality(probe_h));
    sidecar["g_reference"] = extensivity(ref_h).g;
    sidecar["q_probe"] = locality(probe_h);
  } else {
    sidecar["commuting_window"] = nullptr;
  }
  run.write("transition_map.json", sidecar.dump(2) + "\n");
  out << "groups=" << n_groups << " commuting_reference=" << (commuting ? "yes" : "no") << "\n";
}

// --- evolve / sweep --------------------------------------------------------

QuenchExperiment experiment_from_json(const json& config, Run& run) {
  QuenchExperiment e;
  e.battery = model_spec_from_json(require(config, "battery"), true);
  e.charger = model_spec_from_json(require(config, "charger"), true);
  if (config.contains("initial")) {
    e.initial = initial_state_from_json(config["initial"]);
  } else {
    e.initial.kind = has_central_site(e.battery.family) ? InitialKind::CentralProduct
                                                        : InitialKind::BatteryGround;
  }
  e.options.t_max = get_number(config, "t_max", 10.0);
  e.options.n_steps = get_count(config, "n_steps", 2000);
  run.resolved["battery"] = to_json(e.battery);
  run.resolved["charger"] = to_json(e.charger);
  run.resolved["initial"] = to_json(e.initial);
  return e;
}

void cmd_evolve(const json& config, Run& run, std::ostream& out, const Overrides& ov) {
  reject_unknown_keys(config,
                      {"command", "output_dir", "dense_cap", "battery", "charger", "initial",
                       "t_max", "n_steps", "bipartition", "entropy_base", "spectral_weights",
                       "entropy", "sie_constant"},
                      "evolve config");
  QuenchExperiment e = experiment_from_json(config, run);
  if (ov.t_max > 0.0) e.options.t_max = ov.t_max;
  if (ov.n_steps >= 0) e.options.n_steps = static_cast<std::size_t>(ov.n_steps);
  if (config.contains("bipartition")) e.options.bipartition = get_sizes(config, "bipartition");
  if (config.contains("bipartition") && e.options.bipartition->empty()) {
    throw DomainError("bipartition must be nonempty");
  }
  if (config.contains("entropy_base")) e.options.entropy_base = entropy_base_from_json(config["entropy_base"]);
  e.options.track_spectral_weights = get_bool(config, "spectral_weights", true);
  e.options.track_entropy = get_bool(config, "entropy", true);
  const double sie_c = get_number(config, "sie_constant", 1.0);

  const DynamicsTrace trace = evolve(e);
  const LocalHamiltonian battery = build(e.battery);
  const LocalHamiltonian charger = build(e.charger);
  const double bound = power_bound(battery, charger);

  run.resolved["t_max"] = e.options.t_max;
  run.resolved["n_steps"] = e.options.n_steps;
  run.resolved["entropy_base"] = entropy_base_name(e.options.entropy_base);
  run.resolved["spectral_weights"] = e.options.track_spectral_weights;
  run.resolved["entropy"] = e.options.track_entropy;
  run.resolved["bipartition"] = trace.bipartition;
  run.resolved["sie_constant"] = sie_c;

  run.write("dynamics.csv", dynamics_csv(trace));
  if (e.options.track_spectral_weights) run.write("spectral_weights.csv", spectral_weights_csv(trace));

  double norm_dev = 0.0;
  double charger_dev = 0.0;
  double max_abs_power = 0.0;
  const double e_c0 = trace.charger_energy.front();
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    norm_dev = std::max(norm_dev, std::abs(trace.state_norm[k] - 1.0));
    charger_dev = std::max(charger_dev, std::abs(trace.charger_energy[k] - e_c0) /
                                            std::max(1.0, std::abs(e_c0)));
    max_abs_power = std::max(max_abs_power, std::abs(trace.power_analytic[k]));
  }
  if (norm_dev > 1e-8) run.fail_check(relative_difference_note("norm deviation", norm_dev, 1e-8));
  if (charger_dev > 1e-8) {
    run.fail_check(relative_difference_note("charger energy drift", charger_dev, 1e-8));
  }
  if (max_abs_power > bound + 1e-8) {
    run.fail_check(relative_difference_note("max |P(t)|", max_abs_power, bound));
  }

  json summary;
  summary["n_total"] = battery.n_sites();
  summary["max_power"] = trace.max_power;
  summary["t_star"] = trace.t_star;
  summary["power_bound"] = bound;
  summary["max_abs_power"] = max_abs_power;
  summary["max_norm_deviation"] = norm_dev;
  summary["max_charger_energy_drift"] = charger_dev;
  summary["energy_initial"] = trace.energy.front();
  if (e.initial.kind == InitialKind::BatteryGround) summary["ground_degeneracy"] = trace.ground_degeneracy;
  if (!trace.entropy.empty()) {
    const double g = extensivity(charger).g;
    double max_rate = 0.0;
    for (double r : trace.entropy_rate) max_rate = std::max(max_rate, std::abs(r));
    const double sie = sie_rate_bound(g, 2, sie_c, e.options.entropy_base);
    summary["entropy"] = {{"bipartition", trace.bipartition},
                          {"base", entropy_base_name(e.options.entropy_base)},
                          {"initial", trace.entropy.front()},
                          {"max", *std::max_element(trace.entropy.begin(), trace.entropy.end())},
                          {"max_rate", max_rate},
                          {"sie_rate_bound", sie},
                          {"rate_to_bound_ratio", sie > 0.0 ? max_rate / sie : 0.0}};
  } else {
    summary["entropy"] = nullptr;
  }
  summary["validation_errors"] = run.validation_errors;
  run.write("summary.json", summary.dump(2) + "\n");
  out << "max_power=" << format_number(trace.max_power) << " t_star=" << format_number(trace.t_star)
      << " power_bound=" << format_number(bound) << "\n";
}

void cmd_sweep(const json& config, Run& run, std::ostream& out, const Overrides& ov) {
  reject_unknown_keys(config,
                      {"command", "output_dir", "dense_cap", "battery", "charger", "initial",
                       "t_max", "n_steps", "sizes", "observable", "min_size", "max_parallel"},
                      "sweep config");
  QuenchExperiment e = experiment_from_json(config, run);
  if (ov.t_max > 0.0) e.options.t_max = ov.t_max;
  if (ov.n_steps >= 0) e.options.n_steps = static_cast<std::size_t>(ov.n_steps);
  std::vector<std::size_t> sizes = get_sizes(config, "sizes");
  if (sizes.empty()) sizes = {5, 6, 7, 8, 9, 10};
  if (!config.contains("observable") || !config["observable"].is_string()) {
    throw ConfigError("sweep needs an observable string");
  }
  const Observable observable = observable_from_name(config["observable"].get<std::string>());
  SweepOptions options;
  if (config.contains("min_size")) options.min_size = get_count(config, "min_size", 0);
  options.max_parallel = get_count(config, "max_parallel", 0);

  run.resolved["t_max"] = e.options.t_max;
  run.resolved["n_steps"] = e.options.n_steps;
  run.resolved["sizes"] = sizes;
  run.resolved["observable"] = std::string(observable_name(observable));
  if (options.min_size) run.resolved["min_size"] = *options.min_size;

  const SweepResult result = sweep(e, sizes, observable, options);
  run.write("sweep.csv", sweep_csv(result));
  run.write("fit.json", fit_summary_json(result).dump(2) + "\n");
  if (result.series) {
    out << "exponent=" << format_number(result.series->exponent)
        << " r_squared=" << format_number(result.series->r_squared) << "\n";
  }
  if (!result.complete) {
    throw ResourceError("sweep stopped at n_total=" + std::to_string(*result.failed_size) + ": " +
                        result.failure);
  }
}

int dispatch(const json& config, const Overrides& ov, std::ostream& out, std::ostream& err) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  const std::string command = require(config, "command").get<std::string>();

  Run run;
  run.resolved = json::object();
  run.resolved["command"] = command;
  std::string dir = "out";
  if (config.contains("output_dir")) {
    if (!config["output_dir"].is_string()) throw ConfigError("output_dir must be a string");
    dir = config["output_dir"].get<std::string>();
  }
  if (!ov.output_dir.empty()) dir = ov.output_dir;
  run.output_dir = dir;

  std::size_t cap = kDefaultDenseCap;
  if (config.contains("dense_cap")) cap = get_count(config, "dense_cap", kDefaultDenseCap);
  if (const char* env = std::getenv("QB_DENSE_CAP")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw ConfigError("QB_DENSE_CAP must be a positive integer");
    cap = v;
  }
  if (ov.dense_cap > 0) cap = static_cast<std::size_t>(ov.dense_cap);
  set_dense_cap(cap);
  run.resolved["output_dir"] = dir;
  run.resolved["dense_cap"] = cap;

  int code = kSuccess;
  std::string failure;
  try {
    if (command == "analyze") {
      cmd_analyze(config, run, out);
    } else if (command == "bounds") {
      cmd_bounds(config, run, out);
    } else if (command == "heatmap") {
      cmd_heatmap(config, run, out);
    } else if (command == "evolve") {
      cmd_evolve(config, run, out, ov);
    } else if (command == "sweep") {
      cmd_sweep(config, run, out, ov);
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
  } catch (const ResourceError& ex) {
    // Partial outputs are kept and labeled in the manifest.
    if (run.outputs.empty()) throw;
    code = kResourceError;
    failure = ex.what();
    err << "error: " << ex.what() << "\n";
  }

  if (!run.validation_errors.empty() && code == kSuccess) {
    code = kValidationFailure;
    for (const auto& m : run.validation_errors) err << "validation: " << m << "\n";
  }

  json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["command"] = command;
  manifest["config"] = run.resolved;
  manifest["outputs"] = run.outputs;
  manifest["status"] = code == kSuccess ? "ok" : (code == kResourceError ? "partial" : "validation_failed");
  if (!failure.empty()) manifest["error"] = failure;
  manifest["validation_errors"] = run.validation_errors;
  write_file_atomic(run.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return code;
}

}  // namespace

int run_config(const json& config, const Overrides& overrides, std::ostream& out,
               std::ostream& err) {
  try {
    return dispatch(config, overrides, out, err);
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const DomainError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const StructuralError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const json::exception& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  } catch (const ResourceError& ex) {
    err << "resource error: " << ex.what() << "\n";
    return kResourceError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kInternalError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-lattice quantum battery charging toolkit", kToolName};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(0, 1);

  std::string config_path;
  Overrides ov;
  app.add_option("-c,--config", config_path, "JSON run config");
  app.add_option("-o,--output-dir", ov.output_dir, "Directory for CSV/JSON artifacts");
  app.add_option("--dense-cap", ov.dense_cap, "Maximum site count for dense matrices");
  app.add_option("--t-max", ov.t_max, "Override t_max (evolve, sweep)");
  app.add_option("--n-steps", ov.n_steps, "Override n_steps (evolve, sweep)");

  for (const char* name : {"analyze", "bounds", "heatmap", "evolve", "sweep"}) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " command");
    sub->fallthrough();
    sub->add_option("-c,--config", config_path, "JSON run config");
  }

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kToolName << " " << kToolVersion << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n" << app.help();
    return kConfigError;
  }

  if (config_path.empty()) {
    err << "config error: --config is required\n";
    return kConfigError;
  }
  json config;
  try {
    std::ifstream in(config_path);
    if (!in) {
      err << "config error: cannot read " << config_path << "\n";
      return kConfigError;
    }
    config = json::parse(in);
  } catch (const json::exception& ex) {
    err << "config error: " << ex.what() << "\n";
    return kConfigError;
  }

  const auto subs = app.get_subcommands();
  if (!subs.empty()) {
    const std::string name = subs.front()->get_name();
    if (!config.is_object()) {
      err << "config error: config must be a JSON object\n";
      return kConfigError;
    }
    if (config.contains("command") && config["command"] != name) {
      err << "config error: config command '" << config["command"].dump()
          << "' does not match subcommand '" << name << "'\n";
      return kConfigError;
    }
    config["command"] = name;
  }
  return run_config(config, ov, out, err);
}

}  // namespace qbat::cli

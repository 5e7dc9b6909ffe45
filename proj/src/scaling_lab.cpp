#include "qbat/scaling_lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "qbat/bounds.hpp"
#include "qbat/error.hpp"
#include "qbat/io.hpp"

namespace qbat {

ScalingSeries fit_power_law(std::span<const double> sizes, std::span<const double> values) {
  if (sizes.size() != values.size()) throw StructuralError("sizes and values differ in length");
  if (sizes.size() < 3) throw DomainError("power-law fit needs at least 3 points");
  const auto n = static_cast<double>(sizes.size());
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0)) throw DomainError("sizes must be positive");
    if (!(values[i] > 0.0)) throw DomainError("power-law fit needs positive values");
    lx.push_back(std::log(sizes[i]));
    ly.push_back(std::log(values[i]));
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("power-law fit needs at least two distinct sizes");

  ScalingSeries s;
  s.sizes.assign(sizes.begin(), sizes.end());
  s.values.assign(values.begin(), values.end());
  s.exponent = sxy / sxx;
  s.intercept = my - s.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (s.intercept + s.exponent * lx[i]);
    ss_res += r * r;
    s.max_abs_residual = std::max(s.max_abs_residual, std::abs(r));
  }
  // A flat series has syy = 0 and is fitted exactly.
  s.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return s;
}

std::string_view observable_name(Observable o) {
  switch (o) {
    case Observable::MaxPower: return "max_power";
    case Observable::CommutatorNorm: return "commutator_norm";
    case Observable::GValue: return "g_value";
  }
  return "";
}

Observable observable_from_name(std::string_view name) {
  for (auto o : {Observable::MaxPower, Observable::CommutatorNorm, Observable::GValue}) {
    if (observable_name(o) == name) return o;
  }
  throw ConfigError("unknown observable '" + std::string(name) + "'");
}

SweepRow measure(const QuenchExperiment& experiment, Observable observable) {
  SweepRow row;
  row.n_total = total_sites(experiment.battery);
  switch (observable) {
    case Observable::GValue:
      row.value = extensivity(build(experiment.battery)).g;
      break;
    case Observable::CommutatorNorm:
      if (total_sites(experiment.charger) != row.n_total) {
        throw StructuralError("battery and charger specs have different site counts");
      }
      row.value = power_bound(build(experiment.battery), build(experiment.charger));
      break;
    case Observable::MaxPower: {
      QuenchExperiment e = experiment;
      e.options.track_entropy = false;
      e.options.track_spectral_weights = false;
      const DynamicsTrace trace = evolve(e);
      row.value = trace.max_power;
      if (experiment.initial.kind == InitialKind::BatteryGround) {
        row.ground_degeneracy = trace.ground_degeneracy;
      }
      break;
    }
  }
  return row;
}

SweepResult sweep(const QuenchExperiment& templ, std::span<const std::size_t> sizes,
                  Observable observable, const SweepOptions& options) {
  std::vector<std::size_t> ordered(sizes.begin(), sizes.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  SweepResult result;
  result.observable = observable;
  std::size_t workers = options.max_parallel;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  auto run_one = [&templ, observable](std::size_t n_total) {
    QuenchExperiment e = templ;
    e.battery = with_total_sites(e.battery, n_total);
    if (observable != Observable::GValue) e.charger = with_total_sites(e.charger, n_total);
    return measure(e, observable);
  };

  for (std::size_t start = 0; start < ordered.size() && result.complete; start += workers) {
    const std::size_t stop = std::min(ordered.size(), start + workers);
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_one,
                                 ordered[i]));
    }
    for (std::size_t i = start; i < stop; ++i) {
      try {
        SweepRow row = batch[i - start].get();
        if (result.complete) result.rows.push_back(row);
      } catch (const std::exception& ex) {
        if (result.complete) {
          result.complete = false;
          result.failed_size = ordered[i];
          result.failure = ex.what();
        }
      }
    }
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& row : result.rows) {
    if (options.min_size && row.n_total < *options.min_size) continue;
    xs.push_back(static_cast<double>(row.n_total));
    ys.push_back(row.value);
  }
  if (xs.size() >= 3) result.series = fit_power_law(xs, ys);
  return result;
}

std::string sweep_csv(const SweepResult& result) {
  const bool with_degeneracy =
      std::any_of(result.rows.begin(), result.rows.end(),
                  [](const SweepRow& r) { return r.ground_degeneracy.has_value(); });
  std::string out = with_degeneracy ? "n_total,value,gs_degeneracy\n" : "n_total,value\n";
  for (const auto& row : result.rows) {
    out += std::to_string(row.n_total) + ',' + format_number(row.value);
    if (with_degeneracy) out += ',' + std::to_string(row.ground_degeneracy.value_or(0));
    out += '\n';
  }
  return out;
}

nlohmann::json fit_summary_json(const SweepResult& result) {
  nlohmann::json j;
  j["observable"] = std::string(observable_name(result.observable));
  std::vector<std::size_t> sizes;
  for (const auto& r : result.rows) sizes.push_back(r.n_total);
  if (result.series) {
    j["exponent"] = result.series->exponent;
    j["intercept"] = result.series->intercept;
    j["r_squared"] = result.series->r_squared;
    std::vector<std::size_t> fit_sizes;
    for (double x : result.series->sizes) fit_sizes.push_back(static_cast<std::size_t>(x));
    j["sizes"] = fit_sizes;
  } else {
    j["exponent"] = nullptr;
    j["intercept"] = nullptr;
    j["r_squared"] = nullptr;
    j["sizes"] = sizes;
  }
  j["complete"] = result.complete;
  if (!result.complete) {
    j["failed_size"] = *result.failed_size;
    j["error"] = result.failure;
  }
  return j;
}

}  // namespace qbat

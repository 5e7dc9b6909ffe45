#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbat/dynamics.hpp"

namespace qbat {

/// (size, value) pairs with an OLS fit of log value against log size.
struct ScalingSeries {
  std::vector<double> sizes;
  std::vector<double> values;
  double exponent = 0.0;
  double intercept = 0.0;  ///< natural-log intercept: value ≈ e^intercept · size^exponent
  double r_squared = 0.0;
  double max_abs_residual = 0.0;
};

ScalingSeries fit_power_law(std::span<const double> sizes, std::span<const double> values);

enum class Observable { MaxPower, CommutatorNorm, GValue };

std::string_view observable_name(Observable o);
Observable observable_from_name(std::string_view name);

struct SweepOptions {
  std::optional<std::size_t> min_size;  ///< fit only sizes ≥ this
  std::size_t max_parallel = 0;         ///< 0 means hardware concurrency
};

struct SweepRow {
  std::size_t n_total = 0;
  double value = 0.0;
  std::optional<std::size_t> ground_degeneracy;
};

struct SweepResult {
  Observable observable = Observable::CommutatorNorm;
  std::vector<SweepRow> rows;              ///< completed sizes, ascending
  std::optional<ScalingSeries> series;     ///< absent with fewer than 3 fit points
  bool complete = true;
  std::optional<std::size_t> failed_size;
  std::string failure;
};

/// Value of `observable` for one experiment at the template's own size.
SweepRow measure(const QuenchExperiment& experiment, Observable observable);

/**
 * Runs `observable` at every total site count in `sizes`, resizing both
 * models of the template. A failing size stops the sweep; rows finished
 * before it are kept and the result is marked incomplete.
 */
SweepResult sweep(const QuenchExperiment& templ, std::span<const std::size_t> sizes,
                  Observable observable, const SweepOptions& options = {});

std::string sweep_csv(const SweepResult& result);
nlohmann::json fit_summary_json(const SweepResult& result);

}  // namespace qbat

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qbat/models.hpp"
#include "qbat/operator_backend.hpp"

namespace qbat {

struct EvolveOptions {
  double t_max = 10.0;
  std::size_t n_steps = 2000;  ///< grid has n_steps + 1 points, t_k = k·t_max/n_steps
  std::optional<std::vector<std::size_t>> bipartition;  ///< default_bipartition() when unset
  bool track_entropy = true;
  bool track_spectral_weights = true;
  EntropyBase entropy_base = EntropyBase::Natural;
};

struct QuenchExperiment {
  ModelSpec battery;
  ModelSpec charger;
  InitialStateSpec initial;
  EvolveOptions options;
};

struct DynamicsTrace {
  std::vector<double> times;
  std::vector<double> energy;          ///< ⟨H_B⟩(t)
  std::vector<double> charger_energy;  ///< ⟨H_C⟩(t), conserved
  std::vector<double> state_norm;
  std::vector<double> power_analytic;  ///< ⟨i[H_C, H_B]⟩(t)
  std::vector<double> power_fd;        ///< finite-difference dE/dt

  std::vector<double> group_energies;               ///< battery energy groups
  std::vector<std::vector<double>> spectral_weights;  ///< [time][group]

  std::vector<std::size_t> bipartition;
  std::vector<double> entropy;       ///< S_A(t), empty when not tracked
  std::vector<double> entropy_rate;  ///< dS_A/dt
  EntropyBase entropy_base = EntropyBase::Natural;

  double max_power = 0.0;
  double t_star = 0.0;
  std::size_t ground_degeneracy = 0;

  double time_step() const;
};

/// {i*} ∪ {odd sites}: the charger's maximal-g site plus alternating sites.
/// For a central site at 0 and seven sites this is {0, 1, 3, 5}.
std::vector<std::size_t> default_bipartition(std::size_t n_sites, std::size_t max_g_site);

/// Sudden quench: ψ(t) = exp(−i H_C t) ψ(0) through the charger eigenbasis.
DynamicsTrace evolve(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                     const Vector& initial_state, const EvolveOptions& options = {});

DynamicsTrace evolve(const QuenchExperiment& experiment);

/// ⟨H²⟩ − ⟨H⟩² on a normalized state.
double variance(const LocalHamiltonian& h, const Vector& state);

/// Centered differences inside, second-order one-sided stencils at the ends.
std::vector<double> finite_difference(std::span<const double> values, double dt);

std::vector<double> entropy_rate(const DynamicsTrace& trace);

std::string dynamics_csv(const DynamicsTrace& trace);
std::string spectral_weights_csv(const DynamicsTrace& trace);

}  // namespace qbat

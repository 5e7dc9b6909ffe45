#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbat/operator_backend.hpp"
#include "qbat/pauli_algebra.hpp"

namespace qbat {

/**
 * Hamiltonian families. Central-spin families and the all-site rings use
 * sites 0..N with site 0 the central spin; tfim and long_range_chain use
 * sites 0..N−1 with no central spin.
 *
 *  - tfim:                    J Σ Z_i Z_{i+1} + alpha Σ X_i, ring of N
 *  - ising_ring_z:            J Σ_{j=0}^{N} Z_j Z_{j+1}, N+1 ≡ 0
 *  - ising_ring_xx_all_sites: J Σ_{j=0}^{N} X_j X_{j+1}, N+1 ≡ 0
 *  - central_spin_battery:    g Σ Y_0 X_j + J Σ Z_j Z_{j+1}, N+1 ≡ 1
 *  - mcs_battery:             g Σ X_0 X_j + J Σ Z_j Z_{j+1}, N+1 ≡ 1
 *  - mcs_charger:             g Σ Y_0 X_j + J Σ Z_j Z_{j+1}, N+1 ≡ 1
 *  - long_range_chain:        B Σ Z_i − Σ_{i<j} g_ij [Z_i Z_j + alpha (X_i X_j + Y_i Y_j)],
 *                             open chain, g_ij = g/|i−j|^p, p = ∞ meaning g δ_{j,i+1}
 *  - custom:                  an explicit term list
 */
enum class Family {
  Tfim,
  IsingRingZ,
  IsingRingXXAllSites,
  CentralSpinBattery,
  McsBattery,
  McsCharger,
  LongRangeChain,
  Custom,
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

/// Parameter names understood by `f`, with their defaults.
const std::map<std::string, double>& default_parameters(Family f);

struct ModelSpec {
  Family family = Family::Tfim;
  std::size_t n_peripheral = 3;
  std::map<std::string, double> parameters;
  bool normalize_extensive = false;
  std::optional<LocalHamiltonian> custom;  ///< required iff family == Custom

  /// Parameter value with the family default filled in.
  double parameter(const std::string& name) const;
};

bool has_central_site(Family f);
std::size_t total_sites(const ModelSpec& spec);

/// Same family resized so that total_sites() == n_total.
ModelSpec with_total_sites(ModelSpec spec, std::size_t n_total);

/// Throws DomainError/ConfigError when the spec is not buildable.
void validate(const ModelSpec& spec);

LocalHamiltonian build(const ModelSpec& spec);

/// Rescales so that ‖H‖ = n_sites.
LocalHamiltonian normalize_extensive(const LocalHamiltonian& h);

enum class InitialKind { BatteryGround, CentralProduct };
enum class DegeneratePolicy { LowestIndex, UniformSuperposition };

struct InitialStateSpec {
  InitialKind kind = InitialKind::CentralProduct;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::LowestIndex;
};

struct InitialState {
  Vector vector;
  std::size_t ground_degeneracy = 0;  ///< lowest group dimension, battery_ground only
};

/// |+z⟩₀ ⊗ |+x⟩^⊗(n_sites−1).
Vector central_product_state(std::size_t n_sites);

/**
 * Initial state for a quench. battery_ground picks from the lowest energy
 * group of `battery` using canonical_group_basis(), so the choice is stable
 * across eigensolvers. central_product needs a central site.
 */
InitialState prepare_initial_state(const InitialStateSpec& spec, const LocalHamiltonian& battery,
                                   bool has_central_site);

Vector build_initial_state(const InitialStateSpec& spec, const LocalHamiltonian& battery,
                           bool has_central_site);

}  // namespace qbat

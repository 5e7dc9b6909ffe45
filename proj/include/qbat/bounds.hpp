#pragma once

#include <cstddef>
#include <string>

#include "qbat/operator_backend.hpp"
#include "qbat/pauli_algebra.hpp"

namespace qbat {

/// ‖[H_B, H_C]‖, the ceiling on instantaneous charging power.
double power_bound(const LocalHamiltonian& battery, const LocalHamiltonian& charger);

/// 6·g·k·‖H_other‖. Valid when the g-side Hamiltonian is commuting.
double bound_6gk(double g, std::size_t k, double norm_other);

/// 2·n_total·g_B·g_C from pairwise overlapping supports.
double bound_pairwise(double g_battery, double g_charger, std::size_t n_total);

/// Largest admissible light-cone radius for a term on `support_size` sites.
inline double aklh_radius(double g, std::size_t support_size) {
  return g * static_cast<double>(support_size);
}

/**
 * ‖Π_{>E'} h_X Π_{<E}‖ ≤ ‖h_X‖ exp[−(E'−E−2R)/(2gk)].
 *
 * Clamped to h_norm when E'−E < 2R. With g = 0 the reference is a constant
 * and the bound collapses to 0 beyond the window, h_norm inside it.
 */
double aklh_bound(double h_norm, double energy_gap, double radius, double g, std::size_t k);

/// Gap 2·g_ref·q beyond which a q-local probe has no matrix elements
/// between eigenspaces of a commuting reference.
double commuting_window(double g_ref, std::size_t q_probe);

/// |⟨ψ|[H_B, H_C]|ψ⟩|, a lower bound on ‖[H_B, H_C]‖.
double product_state_witness(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                             const Vector& state);

/// c·g·log(local_dim), in the entropy base in use.
double sie_rate_bound(double g, std::size_t local_dim, double c,
                      EntropyBase base = EntropyBase::Natural);

struct BoundReport {
  std::size_t n_total = 0;
  double exact_commutator_norm = 0.0;
  double bound_6gBkC_HC = 0.0;  ///< 6 g_B k_C ‖H_C‖, needs H_B commuting
  double bound_6gCkB_HB = 0.0;  ///< 6 g_C k_B ‖H_B‖, needs H_C commuting
  double bound_2N_gB_gC = 0.0;
  double bound_2_HB_HC = 0.0;
  double witness_lower_bound = 0.0;
  bool hypothesis_BC = false;
  bool hypothesis_CB = false;

  /// Smallest upper bound whose hypotheses hold.
  double tightest_valid_bound() const;
};

BoundReport bound_report(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                         const Vector& witness_state);

std::string bound_report_csv_header();
std::string to_csv_row(const BoundReport& r);

}  // namespace qbat

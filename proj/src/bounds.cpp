#include "qbat/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "qbat/error.hpp"
#include "qbat/io.hpp"

namespace qbat {

double power_bound(const LocalHamiltonian& battery, const LocalHamiltonian& charger) {
  const auto comm = commutator(battery, charger);
  if (comm.empty()) return 0.0;
  return spectral_norm(materialize(comm));
}

double bound_6gk(double g, std::size_t k, double norm_other) {
  if (g < 0.0 || norm_other < 0.0) throw DomainError("bound_6gk needs nonnegative g and norm");
  return 6.0 * g * static_cast<double>(k) * norm_other;
}

double bound_pairwise(double g_battery, double g_charger, std::size_t n_total) {
  if (g_battery < 0.0 || g_charger < 0.0) throw DomainError("extensivities must be nonnegative");
  return 2.0 * static_cast<double>(n_total) * g_battery * g_charger;
}

double aklh_bound(double h_norm, double energy_gap, double radius, double g, std::size_t k) {
  if (k == 0) throw DomainError("aklh_bound needs locality k >= 1");
  if (g < 0.0) throw DomainError("aklh_bound needs g >= 0");
  const double excess = energy_gap - 2.0 * radius;
  if (excess <= 0.0) return h_norm;
  if (g == 0.0) return 0.0;
  return h_norm * std::exp(-excess / (2.0 * g * static_cast<double>(k)));
}

double commuting_window(double g_ref, std::size_t q_probe) {
  if (g_ref < 0.0) throw DomainError("commuting_window needs g >= 0");
  return 2.0 * g_ref * static_cast<double>(q_probe);
}

double product_state_witness(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                             const Vector& state) {
  if (std::abs(state.norm() - 1.0) > 1e-10) throw DomainError("witness state is not normalized");
  return std::abs(expectation(commutator(battery, charger), state));
}

double sie_rate_bound(double g, std::size_t local_dim, double c, EntropyBase base) {
  if (local_dim < 2) throw DomainError("local dimension must be at least 2");
  if (c <= 0.0) throw DomainError("SIE constant must be positive");
  return c * g * log_in_base(static_cast<double>(local_dim), base);
}

double BoundReport::tightest_valid_bound() const {
  double best = std::min(bound_2N_gB_gC, bound_2_HB_HC);
  if (hypothesis_BC) best = std::min(best, bound_6gBkC_HC);
  if (hypothesis_CB) best = std::min(best, bound_6gCkB_HB);
  return best;
}

BoundReport bound_report(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                         const Vector& witness_state) {
  if (battery.n_sites() != charger.n_sites()) {
    throw StructuralError("battery and charger act on different site counts");
  }
  const double norm_b = spectral_norm(battery);
  const double norm_c = spectral_norm(charger);
  const auto ext_b = extensivity(battery);
  const auto ext_c = extensivity(charger);
  const std::size_t k_b = locality(battery);
  const std::size_t k_c = locality(charger);

  BoundReport r;
  r.n_total = battery.n_sites();
  r.exact_commutator_norm = power_bound(battery, charger);
  r.bound_6gBkC_HC = bound_6gk(ext_b.g, k_c, norm_c);
  r.bound_6gCkB_HB = bound_6gk(ext_c.g, k_b, norm_b);
  r.bound_2N_gB_gC = bound_pairwise(ext_b.g, ext_c.g, r.n_total);
  r.bound_2_HB_HC = 2.0 * norm_b * norm_c;
  r.witness_lower_bound = product_state_witness(battery, charger, witness_state);
  r.hypothesis_BC = is_commuting(battery);
  r.hypothesis_CB = is_commuting(charger);
  return r;
}

std::string bound_report_csv_header() {
  return "n_total,exact,b6_BC,b6_CB,b2NgBgC,b2HBHC,witness,hyp_BC,hyp_CB";
}

std::string to_csv_row(const BoundReport& r) {
  std::string row = std::to_string(r.n_total);
  for (double v : {r.exact_commutator_norm, r.bound_6gBkC_HC, r.bound_6gCkB_HB, r.bound_2N_gB_gC,
                   r.bound_2_HB_HC, r.witness_lower_bound}) {
    row += ',';
    row += format_number(v);
  }
  row += r.hypothesis_BC ? ",yes" : ",no";
  row += r.hypothesis_CB ? ",yes" : ",no";
  return row;
}

}  // namespace qbat

#include "qbat/models.hpp"

#include <cmath>
#include <limits>

#include "qbat/error.hpp"

namespace qbat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyInfo {
  Family family;
  std::string_view name;
  bool central;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::Tfim, "tfim", false},
    {Family::IsingRingZ, "ising_ring_z", true},
    {Family::IsingRingXXAllSites, "ising_ring_xx_all_sites", true},
    {Family::CentralSpinBattery, "central_spin_battery", true},
    {Family::McsBattery, "mcs_battery", true},
    {Family::McsCharger, "mcs_charger", true},
    {Family::LongRangeChain, "long_range_chain", false},
    {Family::Custom, "custom", true},
};

const FamilyInfo& info(Family f) {
  for (const auto& i : kFamilies) {
    if (i.family == f) return i;
  }
  throw ConfigError("unknown model family");
}

PauliTerm two_site(std::size_t n, std::size_t a, Pauli pa, std::size_t b, Pauli pb, double c) {
  return {Complex(c, 0.0), PauliString::on_sites(n, {{a, pa}, {b, pb}})};
}

PauliTerm one_site(std::size_t n, std::size_t a, Pauli pa, double c) {
  return {Complex(c, 0.0), PauliString::on_sites(n, {{a, pa}})};
}

// Peripheral Ising ring on sites 1..N with N+1 ≡ 1.
void add_peripheral_ring(std::vector<PauliTerm>& terms, std::size_t n_tot, std::size_t n,
                         double j) {
  for (std::size_t site = 1; site <= n; ++site) {
    const std::size_t next = site == n ? 1 : site + 1;
    terms.push_back(two_site(n_tot, site, Pauli::Z, next, Pauli::Z, j));
  }
}

// Ring over sites 0..N with N+1 ≡ 0.
void add_all_site_ring(std::vector<PauliTerm>& terms, std::size_t n_tot, Pauli p, double j) {
  for (std::size_t site = 0; site < n_tot; ++site) {
    terms.push_back(two_site(n_tot, site, p, (site + 1) % n_tot, p, j));
  }
}

void add_central_coupling(std::vector<PauliTerm>& terms, std::size_t n_tot, std::size_t n,
                          Pauli central, double g) {
  for (std::size_t site = 1; site <= n; ++site) {
    terms.push_back(two_site(n_tot, 0, central, site, Pauli::X, g));
  }
}

}  // namespace

std::string_view family_name(Family f) { return info(f).name; }

Family family_from_name(std::string_view name) {
  for (const auto& i : kFamilies) {
    if (i.name == name) return i.family;
  }
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

const std::map<std::string, double>& default_parameters(Family f) {
  static const std::map<std::string, double> tfim{{"J", 1.0}, {"alpha", 1.0}};
  static const std::map<std::string, double> ring{{"J", 1.0}};
  static const std::map<std::string, double> central{{"g", 1.0}, {"J", 1.0}};
  static const std::map<std::string, double> long_range{
      {"B", 1.0}, {"g", 1.0}, {"alpha", 0.5}, {"p", kInf}};
  static const std::map<std::string, double> none{};
  switch (f) {
    case Family::Tfim: return tfim;
    case Family::IsingRingZ:
    case Family::IsingRingXXAllSites: return ring;
    case Family::CentralSpinBattery:
    case Family::McsBattery:
    case Family::McsCharger: return central;
    case Family::LongRangeChain: return long_range;
    case Family::Custom: return none;
  }
  return none;
}

double ModelSpec::parameter(const std::string& name) const {
  if (auto it = parameters.find(name); it != parameters.end()) return it->second;
  const auto& defaults = default_parameters(family);
  if (auto it = defaults.find(name); it != defaults.end()) return it->second;
  throw ConfigError("family " + std::string(family_name(family)) + " has no parameter '" + name +
                    "'");
}

bool has_central_site(Family f) { return info(f).central; }

std::size_t total_sites(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::Tfim:
    case Family::LongRangeChain: return spec.n_peripheral;
    case Family::Custom: return spec.custom ? spec.custom->n_sites() : 0;
    default: return spec.n_peripheral + 1;
  }
}

ModelSpec with_total_sites(ModelSpec spec, std::size_t n_total) {
  switch (spec.family) {
    case Family::Tfim:
    case Family::LongRangeChain: spec.n_peripheral = n_total; break;
    case Family::Custom:
      throw DomainError("custom Hamiltonians cannot be resized");
    default:
      if (n_total == 0) throw DomainError("central-spin layouts need at least one site");
      spec.n_peripheral = n_total - 1;
  }
  return spec;
}

void validate(const ModelSpec& spec) {
  const auto& defaults = default_parameters(spec.family);
  for (const auto& [name, value] : spec.parameters) {
    if (!defaults.contains(name)) {
      throw ConfigError("family " + std::string(family_name(spec.family)) +
                        " has no parameter '" + name + "'");
    }
    if (std::isnan(value)) throw ConfigError("parameter '" + name + "' is NaN");
  }
  if (spec.family == Family::Custom) {
    if (!spec.custom) throw ConfigError("custom family requires an explicit Hamiltonian");
    if (spec.custom->n_sites() == 0) throw DomainError("custom Hamiltonian has no sites");
    return;
  }
  if (spec.n_peripheral < 3) {
    throw DomainError("family " + std::string(family_name(spec.family)) +
                      " needs N >= 3, got " + std::to_string(spec.n_peripheral));
  }
  if (spec.family == Family::LongRangeChain && spec.parameter("p") < 0.0) {
    throw DomainError("long_range_chain requires p >= 0");
  }
}

LocalHamiltonian build(const ModelSpec& spec) {
  validate(spec);
  const std::size_t n_tot = total_sites(spec);
  const std::size_t n = spec.n_peripheral;
  std::vector<PauliTerm> terms;

  switch (spec.family) {
    case Family::Tfim: {
      const double j = spec.parameter("J");
      const double alpha = spec.parameter("alpha");
      for (std::size_t i = 0; i < n; ++i) {
        terms.push_back(two_site(n, i, Pauli::Z, (i + 1) % n, Pauli::Z, j));
      }
      for (std::size_t i = 0; i < n; ++i) terms.push_back(one_site(n, i, Pauli::X, alpha));
      break;
    }
    case Family::IsingRingZ:
      add_all_site_ring(terms, n_tot, Pauli::Z, spec.parameter("J"));
      break;
    case Family::IsingRingXXAllSites:
      add_all_site_ring(terms, n_tot, Pauli::X, spec.parameter("J"));
      break;
    case Family::CentralSpinBattery:
    case Family::McsCharger:
      add_central_coupling(terms, n_tot, n, Pauli::Y, spec.parameter("g"));
      add_peripheral_ring(terms, n_tot, n, spec.parameter("J"));
      break;
    case Family::McsBattery:
      add_central_coupling(terms, n_tot, n, Pauli::X, spec.parameter("g"));
      add_peripheral_ring(terms, n_tot, n, spec.parameter("J"));
      break;
    case Family::LongRangeChain: {
      const double field = spec.parameter("B");
      const double g = spec.parameter("g");
      const double alpha = spec.parameter("alpha");
      const double p = spec.parameter("p");
      for (std::size_t i = 0; i < n; ++i) terms.push_back(one_site(n, i, Pauli::Z, field));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double distance = static_cast<double>(j - i);
          double coupling = 0.0;
          if (std::isinf(p)) {
            coupling = (j == i + 1) ? g : 0.0;
          } else {
            coupling = g / std::pow(distance, p);
          }
          if (coupling == 0.0) continue;
          terms.push_back(two_site(n, i, Pauli::Z, j, Pauli::Z, -coupling));
          terms.push_back(two_site(n, i, Pauli::X, j, Pauli::X, -coupling * alpha));
          terms.push_back(two_site(n, i, Pauli::Y, j, Pauli::Y, -coupling * alpha));
        }
      }
      break;
    }
    case Family::Custom:
      terms = spec.custom->terms();
      break;
  }

  LocalHamiltonian h(n_tot, std::move(terms));
  if (spec.normalize_extensive) return normalize_extensive(h);
  return h;
}

LocalHamiltonian normalize_extensive(const LocalHamiltonian& h) {
  const double norm = spectral_norm(h);
  if (norm == 0.0) throw DomainError("cannot normalize a Hamiltonian with zero norm");
  return h.scaled(static_cast<double>(h.n_sites()) / norm);
}

Vector central_product_state(std::size_t n_sites) {
  if (n_sites == 0) throw DomainError("product state needs at least one site");
  const Eigen::Index dim = Eigen::Index{1} << n_sites;
  // Central spin in |0⟩ means the most significant bit is 0: the first half.
  Vector psi = Vector::Zero(dim);
  const Eigen::Index half = dim / 2;
  const double amp = 1.0 / std::sqrt(static_cast<double>(half));
  psi.head(half).setConstant(Complex(amp, 0.0));
  return psi;
}

InitialState prepare_initial_state(const InitialStateSpec& spec, const LocalHamiltonian& battery,
                                   bool has_central) {
  InitialState out;
  if (spec.kind == InitialKind::CentralProduct) {
    if (!has_central) throw DomainError("central_product requires a layout with site 0 central");
    out.vector = central_product_state(battery.n_sites());
    return out;
  }
  const Spectrum spectrum = diagonalize(materialize(battery));
  const auto basis = canonical_group_basis(spectrum, 0);
  out.ground_degeneracy = basis.size();
  if (spec.degenerate_policy == DegeneratePolicy::LowestIndex) {
    out.vector = basis.front();
  } else {
    Vector sum = Vector::Zero(basis.front().size());
    for (const auto& b : basis) sum += b;
    out.vector = sum / sum.norm();
  }
  return out;
}

Vector build_initial_state(const InitialStateSpec& spec, const LocalHamiltonian& battery,
                           bool has_central) {
  return prepare_initial_state(spec, battery, has_central).vector;
}

}  // namespace qbat

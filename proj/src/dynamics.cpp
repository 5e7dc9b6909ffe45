#include "qbat/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qbat/error.hpp"
#include "qbat/io.hpp"

namespace qbat {

namespace {

constexpr Eigen::Index kTimeChunk = 64;
constexpr std::size_t kMaxRefinedPeaks = 64;

// Evolution in the charger eigenbasis: ψ(t) = U diag(e^{−iwt}) U† ψ(0).
class Propagator {
 public:
  Propagator(const LocalHamiltonian& charger, const Vector& initial) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(materialize(charger).matrix());
    if (es.info() != Eigen::Success) throw Error("charger diagonalization failed");
    energies_ = es.eigenvalues();
    basis_ = es.eigenvectors();
    coeffs_ = basis_.adjoint() * initial;
  }

  Matrix states(std::span<const double> times) const {
    Matrix phased(coeffs_.size(), static_cast<Eigen::Index>(times.size()));
    for (Eigen::Index c = 0; c < phased.cols(); ++c) {
      const double t = times[static_cast<std::size_t>(c)];
      for (Eigen::Index i = 0; i < phased.rows(); ++i) {
        phased(i, c) = std::polar(1.0, -energies_(i) * t) * coeffs_(i);
      }
    }
    return basis_ * phased;
  }

  Vector state(double t) const {
    const double times[] = {t};
    return states(times).col(0);
  }

 private:
  Eigen::VectorXd energies_;
  Matrix basis_;
  Vector coeffs_;
};

double real_dot(const Matrix& a, const Matrix& b, Eigen::Index col) {
  return a.col(col).dot(b.col(col)).real();
}

void validate_bipartition(const std::vector<std::size_t>& part, const LocalHamiltonian& charger) {
  const auto n = charger.n_sites();
  std::vector<bool> in(n, false);
  for (std::size_t s : part) {
    if (s >= n) throw DomainError("bipartition site index out of range");
    in[s] = true;
  }
  const auto count = static_cast<std::size_t>(std::count(in.begin(), in.end(), true));
  if (count == 0 || count == n) throw DomainError("bipartition must be a proper nonempty subset");
  const auto ext = extensivity(charger);
  bool has_max_site = false;
  for (std::size_t s = 0; s < n; ++s) {
    if (in[s] && ext.per_site[s] >= ext.g - 1e-12 * std::max(1.0, ext.g)) has_max_site = true;
  }
  if (!has_max_site) throw DomainError("bipartition must contain a maximal-g site of the charger");
}

}  // namespace

double DynamicsTrace::time_step() const {
  return times.size() < 2 ? 0.0 : times[1] - times[0];
}

std::vector<std::size_t> default_bipartition(std::size_t n_sites, std::size_t max_g_site) {
  std::vector<std::size_t> part{max_g_site};
  for (std::size_t s = 1; s < n_sites; s += 2) {
    if (s != max_g_site) part.push_back(s);
  }
  std::sort(part.begin(), part.end());
  return part;
}

std::vector<double> finite_difference(std::span<const double> values, double dt) {
  if (values.size() < 3) throw DomainError("finite differences need at least 3 points");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const std::size_t n = values.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
  return d;
}

std::vector<double> entropy_rate(const DynamicsTrace& trace) {
  if (trace.entropy.size() != trace.times.size()) {
    throw DomainError("trace has no entropy on its time grid");
  }
  return finite_difference(trace.entropy, trace.time_step());
}

double variance(const LocalHamiltonian& h, const Vector& state) {
  if (std::abs(state.norm() - 1.0) > 1e-10) throw DomainError("state is not normalized");
  if (!h.hermitian()) throw UnsupportedError("variance requires a Hermitian operator");
  const Vector hv = apply(h, state);
  const double mean = state.dot(hv).real();
  return std::max(hv.squaredNorm() - mean * mean, 0.0);
}

DynamicsTrace evolve(const LocalHamiltonian& battery, const LocalHamiltonian& charger,
                     const Vector& initial_state, const EvolveOptions& options) {
  if (battery.n_sites() != charger.n_sites()) {
    throw StructuralError("battery and charger act on different site counts");
  }
  const std::size_t n = battery.n_sites();
  if (static_cast<Eigen::Index>(std::size_t{1} << n) != initial_state.size()) {
    throw StructuralError("initial state dimension does not match the Hamiltonians");
  }
  if (!(options.t_max > 0.0)) throw DomainError("t_max must be positive");
  if (options.n_steps < 2) throw DomainError("n_steps must be at least 2");
  if (std::abs(initial_state.norm() - 1.0) > 1e-10) throw DomainError("initial state is not normalized");

  DynamicsTrace trace;
  trace.entropy_base = options.entropy_base;
  const std::size_t n_points = options.n_steps + 1;
  const double dt = options.t_max / static_cast<double>(options.n_steps);
  trace.times.resize(n_points);
  for (std::size_t k = 0; k < n_points; ++k) trace.times[k] = static_cast<double>(k) * dt;

  bool track_entropy = options.track_entropy;
  if (track_entropy) {
    if (options.bipartition) {
      validate_bipartition(*options.bipartition, charger);
      trace.bipartition = *options.bipartition;
    } else {
      trace.bipartition = default_bipartition(n, extensivity(charger).argmax_site);
      track_entropy = trace.bipartition.size() < n;  // no proper cut on one or two sites
      if (!track_entropy) trace.bipartition.clear();
    }
  }

  const Propagator propagator(charger, initial_state);
  const LocalHamiltonian power_op = commutator(charger, battery).scaled(Complex(0.0, 1.0));

  std::optional<Spectrum> battery_spectrum;
  if (options.track_spectral_weights) {
    battery_spectrum = diagonalize(materialize(battery));
    for (const auto& g : battery_spectrum->groups) trace.group_energies.push_back(g.energy);
    trace.spectral_weights.reserve(n_points);
  }

  trace.energy.reserve(n_points);
  trace.charger_energy.reserve(n_points);
  trace.state_norm.reserve(n_points);
  trace.power_analytic.reserve(n_points);

  for (std::size_t start = 0; start < n_points; start += kTimeChunk) {
    const std::size_t count = std::min<std::size_t>(kTimeChunk, n_points - start);
    const std::span<const double> chunk(trace.times.data() + start, count);
    const Matrix psi = propagator.states(chunk);
    const Matrix hb_psi = apply(battery, psi);
    const Matrix hc_psi = apply(charger, psi);
    const Matrix p_psi = apply(power_op, psi);
    Matrix beta;
    if (battery_spectrum) beta = battery_spectrum->eigenvectors.adjoint() * psi;

    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(count); ++c) {
      trace.state_norm.push_back(psi.col(c).norm());
      trace.energy.push_back(real_dot(psi, hb_psi, c));
      trace.charger_energy.push_back(real_dot(psi, hc_psi, c));
      trace.power_analytic.push_back(real_dot(psi, p_psi, c));
      if (battery_spectrum) {
        std::vector<double> weights;
        weights.reserve(battery_spectrum->groups.size());
        for (const auto& g : battery_spectrum->groups) {
          weights.push_back(beta.col(c)
                                .segment(static_cast<Eigen::Index>(g.begin),
                                         static_cast<Eigen::Index>(g.size))
                                .squaredNorm());
        }
        trace.spectral_weights.push_back(std::move(weights));
      }
      if (track_entropy) {
        const Vector col = psi.col(c) / psi.col(c).norm();
        trace.entropy.push_back(entanglement_entropy(
            reduced_density_matrix(col, trace.bipartition), options.entropy_base));
      }
    }
  }

  trace.power_fd = finite_difference(trace.energy, dt);
  if (track_entropy) trace.entropy_rate = entropy_rate(trace);

  // Grid maximum, then every competitive interior peak is refined: the
  // parabola through its neighbours gives t*, where the power is re-evaluated
  // exactly. The earliest peak wins ties.
  const auto& p = trace.power_analytic;
  const auto grid_max = std::max_element(p.begin(), p.end());
  const auto grid_index = static_cast<std::size_t>(grid_max - p.begin());
  trace.max_power = *grid_max;
  trace.t_star = trace.times[grid_index];

  std::vector<std::size_t> peaks;
  for (std::size_t k = 1; k + 1 < n_points; ++k) {
    if (p[k] >= p[k - 1] && p[k] >= p[k + 1]) peaks.push_back(k);
  }
  if (peaks.size() > kMaxRefinedPeaks) {
    std::stable_sort(peaks.begin(), peaks.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] > p[b]; });
    peaks.resize(kMaxRefinedPeaks);
    std::sort(peaks.begin(), peaks.end());
  }
  struct Candidate {
    double value;
    double time;
  };
  std::vector<Candidate> candidates{{trace.max_power, trace.t_star}};
  for (std::size_t k : peaks) {
    const double curvature = p[k - 1] - 2.0 * p[k] + p[k + 1];
    if (!(curvature < 0.0)) continue;
    const double offset = 0.5 * (p[k - 1] - p[k + 1]) / curvature;
    const double t = trace.times[k] + offset * dt;
    const Vector psi_t = propagator.state(t);
    const double value = expectation(power_op, psi_t).real();
    candidates.push_back({std::max(value, p[k]), value >= p[k] ? t : trace.times[k]});
  }
  double best = candidates.front().value;
  for (const auto& c : candidates) best = std::max(best, c.value);
  const double tie = 1e-10 * std::max(1.0, std::abs(best));
  double best_time = trace.times.back() + 1.0;
  for (const auto& c : candidates) {
    if (c.value >= best - tie && c.time < best_time) {
      best_time = c.time;
      trace.max_power = c.value;
    }
  }
  trace.t_star = best_time;
  return trace;
}

DynamicsTrace evolve(const QuenchExperiment& experiment) {
  if (total_sites(experiment.battery) != total_sites(experiment.charger)) {
    throw StructuralError("battery and charger specs have different site counts");
  }
  const LocalHamiltonian battery = build(experiment.battery);
  const LocalHamiltonian charger = build(experiment.charger);
  const InitialState init = prepare_initial_state(experiment.initial, battery,
                                                  has_central_site(experiment.battery.family));
  DynamicsTrace trace = evolve(battery, charger, init.vector, experiment.options);
  trace.ground_degeneracy = init.ground_degeneracy;
  return trace;
}

std::string dynamics_csv(const DynamicsTrace& trace) {
  std::string out = "t,energy,power,power_fd,entropy,entropy_rate\n";
  const bool has_entropy = !trace.entropy.empty();
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    out += format_number(trace.times[k]);
    out += ',' + format_number(trace.energy[k]);
    out += ',' + format_number(trace.power_analytic[k]);
    out += ',' + format_number(trace.power_fd[k]);
    out += ',' + (has_entropy ? format_number(trace.entropy[k]) : std::string("nan"));
    out += ',' + (has_entropy ? format_number(trace.entropy_rate[k]) : std::string("nan"));
    out += '\n';
  }
  return out;
}

std::string spectral_weights_csv(const DynamicsTrace& trace) {
  std::string out = "t,group_index,group_energy,weight\n";
  for (std::size_t k = 0; k < trace.spectral_weights.size(); ++k) {
    const auto& row = trace.spectral_weights[k];
    for (std::size_t g = 0; g < row.size(); ++g) {
      out += format_number(trace.times[k]) + ',' + std::to_string(g) + ',' +
             format_number(trace.group_energies[g]) + ',' + format_number(row[g]) + '\n';
    }
  }
  return out;
}

}  // namespace qbat

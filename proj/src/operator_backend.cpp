#include "qbat/operator_backend.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qbat/error.hpp"

namespace qbat {

namespace {

std::size_t initial_dense_cap() {
  if (const char* env = std::getenv("QB_DENSE_CAP")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDenseCap;
}

std::atomic<std::size_t>& cap_storage() {
  static std::atomic<std::size_t> cap{initial_dense_cap()};
  return cap;
}

void check_cap(std::size_t n_sites, std::size_t cap) {
  if (n_sites > cap) {
    throw ResourceError("dense backend capped at " + std::to_string(cap) + " sites, requested " +
                        std::to_string(n_sites));
  }
  if (n_sites >= 31) throw ResourceError("dense dimension overflows the index type");
}

// A Pauli string in basis-bit coordinates: P|r⟩ = phase(r)|r ⊕ flip⟩.
struct BitPauli {
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  Complex prefactor;  // coeff · i^{#Y}
};

BitPauli to_bits(const PauliTerm& t, std::size_t n_sites) {
  BitPauli b;
  int n_y = 0;
  for (std::size_t s = 0; s < n_sites; ++s) {
    const Pauli p = t.ops.at(s);
    const std::uint64_t bit = std::uint64_t{1} << site_bit(n_sites, s);
    if (p == Pauli::X || p == Pauli::Y) b.flip |= bit;
    if (p == Pauli::Z || p == Pauli::Y) b.sign |= bit;
    if (p == Pauli::Y) ++n_y;
  }
  b.prefactor = t.coeff * i_power(n_y);
  return b;
}

double odd_sign(std::uint64_t r, std::uint64_t mask) {
  return (std::popcount(r & mask) & 1) ? -1.0 : 1.0;
}

// Largest singular value of a dense block.
double block_norm(const Matrix& block) {
  if (block.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(block);
  return svd.singularValues()(0);
}

}  // namespace

std::size_t dense_cap() { return cap_storage().load(); }
void set_dense_cap(std::size_t cap) { cap_storage().store(cap); }

DenseOperator::DenseOperator(std::size_t n_sites, Matrix entries)
    : n_sites_(n_sites), entries_(std::move(entries)) {
  const Eigen::Index expected = Eigen::Index{1} << n_sites;
  if (entries_.rows() != expected || entries_.cols() != expected) {
    throw StructuralError("dense operator on " + std::to_string(n_sites) +
                          " sites must be 2^n square");
  }
}

bool DenseOperator::is_hermitian(double tol) const {
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool DenseOperator::is_anti_hermitian(double tol) const {
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return (entries_ + entries_.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

DenseOperator materialize(const LocalHamiltonian& h, std::size_t cap) {
  const std::size_t n = h.n_sites();
  check_cap(n, cap);
  const std::uint64_t dim = std::uint64_t{1} << n;
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& t : h.terms()) {
    const BitPauli b = to_bits(t, n);
    for (std::uint64_t r = 0; r < dim; ++r) {
      m(static_cast<Eigen::Index>(r ^ b.flip), static_cast<Eigen::Index>(r)) +=
          b.prefactor * odd_sign(r, b.sign);
    }
  }
  return DenseOperator(n, std::move(m));
}

Vector apply(const LocalHamiltonian& h, const Vector& v) {
  const std::size_t n = h.n_sites();
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (static_cast<std::uint64_t>(v.size()) != dim) {
    throw StructuralError("state dimension does not match Hamiltonian");
  }
  Vector out = Vector::Zero(v.size());
  for (const auto& t : h.terms()) {
    const BitPauli b = to_bits(t, n);
    for (std::uint64_t r = 0; r < dim; ++r) {
      out(static_cast<Eigen::Index>(r ^ b.flip)) +=
          b.prefactor * odd_sign(r, b.sign) * v(static_cast<Eigen::Index>(r));
    }
  }
  return out;
}

Matrix apply(const LocalHamiltonian& h, const Matrix& columns) {
  const std::size_t n = h.n_sites();
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (static_cast<std::uint64_t>(columns.rows()) != dim) {
    throw StructuralError("state dimension does not match Hamiltonian");
  }
  Matrix out = Matrix::Zero(columns.rows(), columns.cols());
  for (const auto& t : h.terms()) {
    const BitPauli b = to_bits(t, n);
    for (std::uint64_t r = 0; r < dim; ++r) {
      const Complex factor = b.prefactor * odd_sign(r, b.sign);
      out.row(static_cast<Eigen::Index>(r ^ b.flip)) +=
          factor * columns.row(static_cast<Eigen::Index>(r));
    }
  }
  return out;
}

Complex expectation(const LocalHamiltonian& h, const Vector& state) {
  return state.dot(apply(h, state));
}

double spectral_norm(const DenseOperator& op) {
  if (op.is_hermitian()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (op.is_anti_hermitian()) {
    const Matrix herm = Complex(0.0, 1.0) * op.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  throw UnsupportedError("spectral_norm requires a Hermitian or anti-Hermitian operator");
}

double spectral_norm(const LocalHamiltonian& h, std::size_t cap) {
  if (h.empty()) return 0.0;
  return spectral_norm(materialize(h, cap));
}

double default_group_tol(double operator_norm) { return 1e-8 * std::max(1.0, operator_norm); }

double Spectrum::norm() const {
  if (eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(eigenvalues.size() - 1)));
}

Spectrum diagonalize(const DenseOperator& op, std::optional<double> group_tol) {
  if (!op.is_hermitian()) throw UnsupportedError("diagonalize requires a Hermitian operator");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  Spectrum s;
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  const double tol = group_tol.value_or(default_group_tol(s.norm()));
  const std::size_t dim = s.dim();
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (i == dim || s.eigenvalues(static_cast<Eigen::Index>(i)) -
                            s.eigenvalues(static_cast<Eigen::Index>(i - 1)) >=
                        tol) {
      EnergyGroup g{begin, i - begin, 0.0};
      g.energy = s.eigenvalues.segment(static_cast<Eigen::Index>(begin),
                                       static_cast<Eigen::Index>(g.size))
                     .mean();
      s.groups.push_back(g);
      begin = i;
    }
  }
  return s;
}

std::vector<Vector> canonical_group_basis(const Spectrum& spectrum, std::size_t group) {
  if (group >= spectrum.groups.size()) throw DomainError("energy group index out of range");
  const EnergyGroup& g = spectrum.groups[group];
  const Matrix block = spectrum.eigenvectors.middleCols(static_cast<Eigen::Index>(g.begin),
                                                        static_cast<Eigen::Index>(g.size));
  std::vector<Vector> basis;
  basis.reserve(g.size);
  for (Eigen::Index k = 0; k < block.rows() && basis.size() < g.size; ++k) {
    // P e_k = V V† e_k
    Vector v = block * block.row(k).adjoint();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    const double norm = v.norm();
    if (norm > 1e-6) basis.push_back(v / norm);
  }
  if (basis.size() != g.size) throw Error("failed to build a canonical group basis");
  return basis;
}

TransitionMap transition_map(const Spectrum& reference, const DenseOperator& probe,
                             TransitionMetric metric) {
  if (static_cast<std::size_t>(probe.dim()) != reference.dim()) {
    throw StructuralError("probe and reference dimensions differ");
  }
  const Matrix rotated = reference.eigenvectors.adjoint() * probe.matrix() *
                         reference.eigenvectors;
  const std::size_t n_groups = reference.groups.size();
  TransitionMap map;
  map.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_groups),
                                     static_cast<Eigen::Index>(n_groups));
  for (const auto& g : reference.groups) {
    map.group_energies.push_back(g.energy);
    map.group_dims.push_back(g.size);
  }
  for (std::size_t a = 0; a < n_groups; ++a) {
    const auto& ga = reference.groups[a];
    for (std::size_t b = 0; b < n_groups; ++b) {
      const auto& gb = reference.groups[b];
      const Matrix block = rotated.block(
          static_cast<Eigen::Index>(ga.begin), static_cast<Eigen::Index>(gb.begin),
          static_cast<Eigen::Index>(ga.size), static_cast<Eigen::Index>(gb.size));
      map.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          metric == TransitionMetric::BlockSpectralNorm ? block_norm(block)
                                                        : block.cwiseAbs().maxCoeff();
    }
  }
  return map;
}

TransitionMap transition_map(const LocalHamiltonian& reference, const LocalHamiltonian& probe,
                             std::optional<double> group_tol, TransitionMetric metric) {
  if (reference.n_sites() != probe.n_sites()) {
    throw StructuralError("reference and probe act on different site counts");
  }
  const auto ref_dense = materialize(reference);
  const auto probe_dense = materialize(probe);
  return transition_map(diagonalize(ref_dense, group_tol), probe_dense, metric);
}

DenseOperator reduced_density_matrix(const Vector& state, std::span<const std::size_t> subset) {
  const auto dim = static_cast<std::uint64_t>(state.size());
  if (dim == 0 || !std::has_single_bit(dim)) throw StructuralError("state dimension is not 2^n");
  const auto n = static_cast<std::size_t>(std::countr_zero(dim));
  if (std::abs(state.norm() - 1.0) > 1e-10) throw DomainError("state is not normalized");

  std::vector<std::size_t> kept(subset.begin(), subset.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (kept.empty() || kept.size() >= n) {
    throw DomainError("bipartition must be a nonempty proper subset of the sites");
  }
  if (kept.back() >= n) throw DomainError("bipartition site index out of range");

  std::vector<std::size_t> traced;
  for (std::size_t s = 0, j = 0; s < n; ++s) {
    if (j < kept.size() && kept[j] == s) {
      ++j;
    } else {
      traced.push_back(s);
    }
  }
  const Eigen::Index dim_a = Eigen::Index{1} << kept.size();
  const Eigen::Index dim_b = Eigen::Index{1} << traced.size();

  // Rows index the kept register, columns the traced one; kept[0] is the most
  // significant bit of the row index.
  Matrix amplitudes(dim_a, dim_b);
  for (std::uint64_t r = 0; r < dim; ++r) {
    Eigen::Index a = 0;
    Eigen::Index b = 0;
    for (std::size_t s : kept) a = (a << 1) | static_cast<Eigen::Index>((r >> site_bit(n, s)) & 1u);
    for (std::size_t s : traced) b = (b << 1) | static_cast<Eigen::Index>((r >> site_bit(n, s)) & 1u);
    amplitudes(a, b) = state(static_cast<Eigen::Index>(r));
  }
  Matrix rho = amplitudes * amplitudes.adjoint();
  return DenseOperator(kept.size(), std::move(rho));
}

double log_in_base(double x, EntropyBase base) {
  return base == EntropyBase::Two ? std::log2(x) : std::log(x);
}

double entanglement_entropy(const DenseOperator& rho, EntropyBase base) {
  const Complex trace = rho.matrix().trace();
  if (std::abs(trace - Complex(1.0, 0.0)) > 1e-8) {
    throw DomainError("density matrix trace differs from 1");
  }
  // Symmetrize away roundoff before the Hermitian solver.
  const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()(i);
    if (lambda > 1e-14) entropy -= lambda * log_in_base(lambda, base);
  }
  return std::max(entropy, 0.0);
}

}  // namespace qbat

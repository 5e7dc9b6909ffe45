#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbat/pauli_algebra.hpp"

namespace qbat {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest site count the dense backend materializes unless overridden.
inline constexpr std::size_t kDefaultDenseCap = 13;

/// Process-wide dense cap. Initialized from QB_DENSE_CAP when set.
std::size_t dense_cap();
void set_dense_cap(std::size_t cap);

/**
 * Dense 2^n × 2^n operator on n qubits.
 *
 * Qubit ordering: site 0 is the leftmost Kronecker factor, so it maps to the
 * most significant bit of the basis index. Basis state |0⟩ is σz = +1.
 */
class DenseOperator {
 public:
  DenseOperator(std::size_t n_sites, Matrix entries);

  std::size_t n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  bool is_hermitian(double tol = 1e-10) const;
  bool is_anti_hermitian(double tol = 1e-10) const;

 private:
  std::size_t n_sites_;
  Matrix entries_;
};

/// Basis-index bit that holds `site` in an n-site register.
inline std::size_t site_bit(std::size_t n_sites, std::size_t site) { return n_sites - 1 - site; }

DenseOperator materialize(const LocalHamiltonian& h, std::size_t cap = dense_cap());

/// Matrix-free H·v using the Pauli-string permutation structure.
Vector apply(const LocalHamiltonian& h, const Vector& v);
/// Column-wise H·V.
Matrix apply(const LocalHamiltonian& h, const Matrix& columns);

/// ⟨ψ|H|ψ⟩ without materializing H.
Complex expectation(const LocalHamiltonian& h, const Vector& state);

/// Operator norm of a Hermitian or anti-Hermitian operator.
double spectral_norm(const DenseOperator& op);
double spectral_norm(const LocalHamiltonian& h, std::size_t cap = dense_cap());

/// Default degeneracy tolerance 1e−8·max(1, ‖H‖).
double default_group_tol(double operator_norm);

struct EnergyGroup {
  std::size_t begin = 0;  ///< first eigenvalue index
  std::size_t size = 0;
  double energy = 0.0;    ///< mean eigenvalue of the group
};

/// Hermitian eigendecomposition with eigenvalues in ascending order.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Matrix eigenvectors;  ///< orthonormal columns
  std::vector<EnergyGroup> groups;

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  double norm() const;
};

/// Diagonalizes `op`; consecutive eigenvalues closer than `group_tol` share a
/// group. Without a tolerance, default_group_tol(‖op‖) is used.
Spectrum diagonalize(const DenseOperator& op, std::optional<double> group_tol = std::nullopt);

/**
 * Deterministic orthonormal basis of one energy group.
 *
 * Computational basis vectors are projected onto the group in ascending
 * index order and Gram-Schmidt orthogonalized; the result depends only on
 * the subspace, not on which eigenvectors the solver returned for it. Each
 * vector's component at its generating basis index is real and positive.
 */
std::vector<Vector> canonical_group_basis(const Spectrum& spectrum, std::size_t group);

enum class TransitionMetric { BlockSpectralNorm, MaxAbsEntry };

/// values(a, b) = ‖P[E_a] O P[E_b]‖ over the reference operator's energy groups.
struct TransitionMap {
  std::vector<double> group_energies;
  std::vector<std::size_t> group_dims;
  Eigen::MatrixXd values;
};

TransitionMap transition_map(const LocalHamiltonian& reference, const LocalHamiltonian& probe,
                             std::optional<double> group_tol = std::nullopt,
                             TransitionMetric metric = TransitionMetric::BlockSpectralNorm);

/// Same map for an already diagonalized reference.
TransitionMap transition_map(const Spectrum& reference, const DenseOperator& probe,
                             TransitionMetric metric = TransitionMetric::BlockSpectralNorm);

/// Partial trace of |ψ⟩⟨ψ| over the sites not in `subset`. The reduced
/// operator orders the kept sites by ascending index.
DenseOperator reduced_density_matrix(const Vector& state, std::span<const std::size_t> subset);

enum class EntropyBase { Natural, Two };

double log_in_base(double x, EntropyBase base);

/// Von Neumann entropy −Σ λ log λ over eigenvalues λ > 1e−14.
double entanglement_entropy(const DenseOperator& rho, EntropyBase base = EntropyBase::Natural);

}  // namespace qbat

#pragma once

// Independent dense reference built from explicit Kronecker products.

#include <random>

#include <Eigen/Dense>

#include "qbat/pauli_algebra.hpp"

namespace qbat::oracle {

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

inline Eigen::MatrixXcd string_matrix(const PauliString& s) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t site = 0; site < s.size(); ++site) m = kron(m, pauli_matrix(s.at(site)));
  return m;
}

inline Eigen::MatrixXcd dense(const LocalHamiltonian& h) {
  const Eigen::Index dim = Eigen::Index{1} << h.n_sites();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) m += t.coeff * string_matrix(t.ops);
  return m;
}

inline Eigen::VectorXcd kron_state(const std::vector<Eigen::Vector2cd>& factors) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (const auto& f : factors) {
    Eigen::VectorXcd next(v.size() * 2);
    for (Eigen::Index k = 0; k < v.size(); ++k) next.segment(2 * k, 2) = v(k) * f;
    v = next;
  }
  return v;
}

inline PauliString random_string(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> op(0, 3);
  PauliString s(n);
  for (std::size_t site = 0; site < n; ++site) s.set(site, static_cast<Pauli>(op(rng)));
  return s;
}

inline LocalHamiltonian random_hamiltonian(std::mt19937_64& rng, std::size_t n, std::size_t max_terms,
                                           bool hermitian = false) {
  std::uniform_int_distribution<std::size_t> count(1, max_terms);
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::vector<PauliTerm> terms;
  const std::size_t m = count(rng);
  for (std::size_t k = 0; k < m; ++k) {
    const Complex c = hermitian ? Complex(coeff(rng), 0.0) : Complex(coeff(rng), coeff(rng));
    terms.push_back({c, random_string(rng, n)});
  }
  return LocalHamiltonian(n, std::move(terms));
}

}  // namespace qbat::oracle

#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qbat {

using Complex = std::complex<double>;

/// Single-site Pauli operator. The low bit is the X part, the high bit the Z
/// part, so Y = X|Z.
enum class Pauli : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/**
 * Tensor product of single-site Pauli operators stored as two bit-vectors
 * (X part, Z part). A site with both bits set carries a proper Y, not XZ;
 * the phase bookkeeping for that lives in multiply().
 *
 * Ordering compares site by site from site 0 with I < X < Y < Z, which is
 * the order terms appear in a canonical LocalHamiltonian.
 */
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_sites);

  /// Parses an "IXYZ" string; character i is site i.
  static PauliString parse(std::string_view ops);

  /// Identity on `n_sites` except for the listed (site, operator) pairs.
  static PauliString on_sites(std::size_t n_sites,
                              std::initializer_list<std::pair<std::size_t, Pauli>> ops);

  std::size_t size() const { return n_sites_; }
  Pauli at(std::size_t site) const;
  void set(std::size_t site, Pauli p);

  /// Number of non-identity sites, i.e. |support|.
  std::size_t weight() const;
  std::vector<std::size_t> support() const;
  bool is_identity() const;
  bool overlaps(const PauliString& other) const;
  bool commutes_with(const PauliString& other) const;

  std::string to_string() const;

  /// Packed masks for strings of at most 64 sites; bit b holds site b.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

  /// Builds a string from packed words (64 sites per word, low bit first).
  static PauliString from_words(std::size_t n_sites, std::vector<std::uint64_t> x,
                                std::vector<std::uint64_t> z);

  friend bool operator==(const PauliString& a, const PauliString& b) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b);

 private:
  std::size_t n_sites_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

/// a·b = i^phase · string, phase in {0,1,2,3}.
struct PauliProduct {
  int phase = 0;
  PauliString string;
};

PauliProduct multiply(const PauliString& a, const PauliString& b);

/// i^k for integer k.
Complex i_power(int k);

/// coeff × Pauli string: one local term h_X with X = support(ops).
struct PauliTerm {
  Complex coeff{1.0, 0.0};
  PauliString ops;

  std::vector<std::size_t> support() const { return ops.support(); }
};

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b);

/// Operator norm of a single term, |coeff| exactly.
inline double term_norm(const PauliTerm& t) { return std::abs(t.coeff); }

/// Coefficients below this magnitude are dropped during canonicalization.
inline constexpr double kCanonicalDropTol = 1e-14;

/**
 * Sum of Pauli terms on a fixed number of sites. Always canonical: like
 * strings are merged, near-zero coefficients dropped, terms sorted.
 */
class LocalHamiltonian {
 public:
  LocalHamiltonian() = default;
  explicit LocalHamiltonian(std::size_t n_sites);
  LocalHamiltonian(std::size_t n_sites, std::vector<PauliTerm> terms);

  std::size_t n_sites() const { return n_sites_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool hermitian() const { return hermitian_; }

  /// Coefficient of `ops`, zero when absent.
  Complex coefficient(const PauliString& ops) const;

  LocalHamiltonian scaled(Complex factor) const;

  friend LocalHamiltonian operator+(const LocalHamiltonian& a, const LocalHamiltonian& b);
  friend LocalHamiltonian operator-(const LocalHamiltonian& a, const LocalHamiltonian& b);

 private:
  std::size_t n_sites_ = 0;
  std::vector<PauliTerm> terms_;
  bool hermitian_ = true;
};

/// Operator product A·B, expanded term by term.
LocalHamiltonian multiply(const LocalHamiltonian& a, const LocalHamiltonian& b);

/// [A, B] = AB − BA; only anticommuting term pairs contribute.
LocalHamiltonian commutator(const LocalHamiltonian& a, const LocalHamiltonian& b);

/// max over terms of |support|; 0 for the empty Hamiltonian.
std::size_t locality(const LocalHamiltonian& h);

/// True when every pair of terms commutes.
bool is_commuting(const LocalHamiltonian& h);

struct ExtensivityProfile {
  std::vector<double> per_site;  ///< g_i = Σ_{t : i ∈ support(t)} |coeff(t)|
  double g = 0.0;                ///< max_i g_i
  std::size_t argmax_site = 0;   ///< lowest index attaining g
};

ExtensivityProfile extensivity(const LocalHamiltonian& h);

/// Moves the operator on site i to site perm[i].
LocalHamiltonian relabel_sites(const LocalHamiltonian& h, std::span<const std::size_t> perm);

}  // namespace qbat

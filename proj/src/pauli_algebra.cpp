#include "qbat/pauli_algebra.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "qbat/error.hpp"

namespace qbat {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n_sites) { return (n_sites + kWordBits - 1) / kWordBits; }

int popcount_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  int total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) total += std::popcount(a[w] & b[w]);
  return total;
}

// Site-order key used for sorting: I < X < Y < Z.
int sort_key(Pauli p) {
  switch (p) {
    case Pauli::I: return 0;
    case Pauli::X: return 1;
    case Pauli::Y: return 2;
    case Pauli::Z: return 3;
  }
  return 0;
}

void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw StructuralError("Pauli strings act on " + std::to_string(a.size()) + " and " +
                          std::to_string(b.size()) + " sites");
  }
}

void require_same_size(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  if (a.n_sites() != b.n_sites()) {
    throw StructuralError("Hamiltonians act on " + std::to_string(a.n_sites()) + " and " +
                          std::to_string(b.n_sites()) + " sites");
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw ConfigError(std::string("invalid Pauli character '") + c + "'");
  }
}

PauliString::PauliString(std::size_t n_sites)
    : n_sites_(n_sites), x_(word_count(n_sites), 0), z_(word_count(n_sites), 0) {}

PauliString PauliString::parse(std::string_view ops) {
  PauliString s(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) s.set(i, pauli_from_char(ops[i]));
  return s;
}

PauliString PauliString::on_sites(std::size_t n_sites,
                                  std::initializer_list<std::pair<std::size_t, Pauli>> ops) {
  PauliString s(n_sites);
  for (const auto& [site, p] : ops) s.set(site, p);
  return s;
}

PauliString PauliString::from_words(std::size_t n_sites, std::vector<std::uint64_t> x,
                                    std::vector<std::uint64_t> z) {
  if (x.size() != word_count(n_sites) || z.size() != word_count(n_sites)) {
    throw StructuralError("word count does not match site count");
  }
  PauliString s;
  s.n_sites_ = n_sites;
  s.x_ = std::move(x);
  s.z_ = std::move(z);
  return s;
}

Pauli PauliString::at(std::size_t site) const {
  if (site >= n_sites_) throw StructuralError("site index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (site % kWordBits);
  const std::size_t w = site / kWordBits;
  const unsigned code = ((x_[w] & bit) ? 1u : 0u) | ((z_[w] & bit) ? 2u : 0u);
  return static_cast<Pauli>(code);
}

void PauliString::set(std::size_t site, Pauli p) {
  if (site >= n_sites_) throw StructuralError("site index out of range");
  const std::uint64_t bit = std::uint64_t{1} << (site % kWordBits);
  const std::size_t w = site / kWordBits;
  const auto code = static_cast<unsigned>(p);
  x_[w] = (code & 1u) ? (x_[w] | bit) : (x_[w] & ~bit);
  z_[w] = (code & 2u) ? (z_[w] | bit) : (z_[w] & ~bit);
}

std::size_t PauliString::weight() const {
  std::size_t total = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) total += std::popcount(x_[w] | z_[w]);
  return total;
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i < n_sites_; ++i) {
    if (at(i) != Pauli::I) sites.push_back(i);
  }
  return sites;
}

bool PauliString::is_identity() const { return weight() == 0; }

bool PauliString::overlaps(const PauliString& other) const {
  require_same_size(*this, other);
  for (std::size_t w = 0; w < x_.size(); ++w) {
    if ((x_[w] | z_[w]) & (other.x_[w] | other.z_[w])) return true;
  }
  return false;
}

bool PauliString::commutes_with(const PauliString& other) const {
  require_same_size(*this, other);
  const int anti = popcount_and(x_, other.z_) + popcount_and(z_, other.x_);
  return anti % 2 == 0;
}

std::string PauliString::to_string() const {
  std::string out(n_sites_, 'I');
  for (std::size_t i = 0; i < n_sites_; ++i) out[i] = to_char(at(i));
  return out;
}

std::uint64_t PauliString::x_mask() const {
  if (n_sites_ > kWordBits) throw ResourceError("packed mask requires at most 64 sites");
  return x_.empty() ? 0 : x_[0];
}

std::uint64_t PauliString::z_mask() const {
  if (n_sites_ > kWordBits) throw ResourceError("packed mask requires at most 64 sites");
  return z_.empty() ? 0 : z_[0];
}

std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
  if (auto c = a.n_sites_ <=> b.n_sites_; c != 0) return c;
  for (std::size_t i = 0; i < a.n_sites_; ++i) {
    if (auto c = sort_key(a.at(i)) <=> sort_key(b.at(i)); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// With P = i^{|x&z|} X^x Z^z per string, moving Z^{z_a} past X^{x_b} costs
// (−1)^{|z_a & x_b|}, and the Y count of the result is removed again.
PauliProduct multiply(const PauliString& a, const PauliString& b) {
  require_same_size(a, b);
  std::vector<std::uint64_t> x(a.x_words().size());
  std::vector<std::uint64_t> z(a.z_words().size());
  for (std::size_t w = 0; w < x.size(); ++w) {
    x[w] = a.x_words()[w] ^ b.x_words()[w];
    z[w] = a.z_words()[w] ^ b.z_words()[w];
  }
  int phase = popcount_and(a.x_words(), a.z_words()) + popcount_and(b.x_words(), b.z_words()) -
              popcount_and(x, z) + 2 * popcount_and(a.z_words(), b.x_words());
  phase = ((phase % 4) + 4) % 4;
  return {phase, PauliString::from_words(a.size(), std::move(x), std::move(z))};
}

PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
  auto product = multiply(a.ops, b.ops);
  return {a.coeff * b.coeff * i_power(product.phase), std::move(product.string)};
}

LocalHamiltonian::LocalHamiltonian(std::size_t n_sites) : n_sites_(n_sites) {}

LocalHamiltonian::LocalHamiltonian(std::size_t n_sites, std::vector<PauliTerm> terms)
    : n_sites_(n_sites) {
  std::map<PauliString, Complex> merged;
  for (auto& t : terms) {
    if (t.ops.size() != n_sites) {
      throw StructuralError("term " + t.ops.to_string() + " does not act on " +
                            std::to_string(n_sites) + " sites");
    }
    merged[std::move(t.ops)] += t.coeff;
  }
  terms_.reserve(merged.size());
  for (auto& [ops, coeff] : merged) {
    if (std::abs(coeff) < kCanonicalDropTol) continue;
    if (std::abs(coeff.imag()) > 1e-12 * std::max(1.0, std::abs(coeff))) hermitian_ = false;
    terms_.push_back({coeff, ops});
  }
}

Complex LocalHamiltonian::coefficient(const PauliString& ops) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), ops,
                             [](const PauliTerm& t, const PauliString& s) { return t.ops < s; });
  if (it != terms_.end() && it->ops == ops) return it->coeff;
  return {0.0, 0.0};
}

LocalHamiltonian LocalHamiltonian::scaled(Complex factor) const {
  std::vector<PauliTerm> out = terms_;
  for (auto& t : out) t.coeff *= factor;
  return LocalHamiltonian(n_sites_, std::move(out));
}

LocalHamiltonian operator+(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  require_same_size(a, b);
  std::vector<PauliTerm> all = a.terms_;
  all.insert(all.end(), b.terms_.begin(), b.terms_.end());
  return LocalHamiltonian(a.n_sites_, std::move(all));
}

LocalHamiltonian operator-(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  return a + b.scaled(-1.0);
}

LocalHamiltonian multiply(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  require_same_size(a, b);
  std::vector<PauliTerm> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) out.push_back(multiply(ta, tb));
  }
  return LocalHamiltonian(a.n_sites(), std::move(out));
}

// Commuting Pauli strings give AB − BA = 0; anticommuting ones give 2AB.
LocalHamiltonian commutator(const LocalHamiltonian& a, const LocalHamiltonian& b) {
  require_same_size(a, b);
  std::vector<PauliTerm> out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (ta.ops.commutes_with(tb.ops)) continue;
      auto prod = multiply(ta, tb);
      prod.coeff *= 2.0;
      out.push_back(std::move(prod));
    }
  }
  return LocalHamiltonian(a.n_sites(), std::move(out));
}

std::size_t locality(const LocalHamiltonian& h) {
  std::size_t k = 0;
  for (const auto& t : h.terms()) k = std::max(k, t.ops.weight());
  return k;
}

bool is_commuting(const LocalHamiltonian& h) {
  const auto& terms = h.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (!terms[i].ops.commutes_with(terms[j].ops)) return false;
    }
  }
  return true;
}

ExtensivityProfile extensivity(const LocalHamiltonian& h) {
  ExtensivityProfile profile;
  profile.per_site.assign(h.n_sites(), 0.0);
  for (const auto& t : h.terms()) {
    const double norm = term_norm(t);
    for (std::size_t site : t.support()) profile.per_site[site] += norm;
  }
  for (std::size_t i = 0; i < profile.per_site.size(); ++i) {
    if (profile.per_site[i] > profile.g) {
      profile.g = profile.per_site[i];
      profile.argmax_site = i;
    }
  }
  return profile;
}

LocalHamiltonian relabel_sites(const LocalHamiltonian& h, std::span<const std::size_t> perm) {
  if (perm.size() != h.n_sites()) throw StructuralError("permutation length mismatch");
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t p : perm) {
    if (p >= perm.size() || seen[p]) throw DomainError("relabeling is not a permutation");
    seen[p] = true;
  }
  std::vector<PauliTerm> out;
  out.reserve(h.terms().size());
  for (const auto& t : h.terms()) {
    PauliString s(h.n_sites());
    for (std::size_t i = 0; i < h.n_sites(); ++i) s.set(perm[i], t.ops.at(i));
    out.push_back({t.coeff, std::move(s)});
  }
  return LocalHamiltonian(h.n_sites(), std::move(out));
}

}  // namespace qbat

#include <gtest/gtest.h>

#include "qbat/error.hpp"
#include "qbat/models.hpp"
#include "qbat/pauli_algebra.hpp"
#include "support/oracle.hpp"

namespace qbat {
namespace {

const Complex kI(0.0, 1.0);

PauliTerm term(Complex c, const char* ops) { return {c, PauliString::parse(ops)}; }

TEST(PauliString, ParseAndPrint) {
  const auto s = PauliString::parse("IXYZ");
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.at(0), Pauli::I);
  EXPECT_EQ(s.at(2), Pauli::Y);
  EXPECT_EQ(s.to_string(), "IXYZ");
  EXPECT_EQ(s.weight(), 3u);
  EXPECT_EQ(s.support(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_THROW(PauliString::parse("IXQ"), ConfigError);
}

TEST(PauliString, WideStringsSpanWords) {
  PauliString s(130);
  s.set(0, Pauli::X);
  s.set(64, Pauli::Y);
  s.set(129, Pauli::Z);
  EXPECT_EQ(s.weight(), 3u);
  EXPECT_EQ(s.support(), (std::vector<std::size_t>{0, 64, 129}));
  PauliString t(130);
  t.set(64, Pauli::Z);
  EXPECT_FALSE(s.commutes_with(t));
  const auto p = multiply(s, t);
  EXPECT_EQ(p.string.at(64), Pauli::X);
  EXPECT_EQ(i_power(p.phase), kI);  // YZ = iX
}

TEST(PauliString, OrderingIsSiteBySite) {
  EXPECT_LT(PauliString::parse("IZ"), PauliString::parse("XI"));
  EXPECT_LT(PauliString::parse("XZ"), PauliString::parse("YI"));
  EXPECT_LT(PauliString::parse("YZ"), PauliString::parse("ZI"));
}

TEST(Multiply, SingleSiteTable) {
  const auto xy = multiply(term(1.0, "X"), term(1.0, "Y"));
  EXPECT_EQ(xy.ops.to_string(), "Z");
  EXPECT_EQ(xy.coeff, kI);
  const auto xx = multiply(term(1.0, "X"), term(1.0, "X"));
  EXPECT_EQ(xx.ops.to_string(), "I");
  EXPECT_EQ(xx.coeff, Complex(1.0));
  EXPECT_EQ(multiply(term(1.0, "Y"), term(1.0, "X")).coeff, -kI);
  EXPECT_EQ(multiply(term(1.0, "Z"), term(1.0, "X")).coeff, kI);
  EXPECT_EQ(multiply(term(1.0, "Y"), term(1.0, "Z")).coeff, kI);
}

TEST(Multiply, TwoSiteAgainstDenseOracle) {
  const auto a = term(2.0, "XZ");
  const auto b = term(3.0, "YZ");
  const auto c = multiply(a, b);
  EXPECT_EQ(c.ops.to_string(), "ZI");
  EXPECT_NEAR(std::abs(c.coeff - 6.0 * kI), 0.0, 1e-15);
  const Eigen::MatrixXcd lhs = 2.0 * oracle::string_matrix(a.ops) * 3.0 * oracle::string_matrix(b.ops);
  const Eigen::MatrixXcd rhs = c.coeff * oracle::string_matrix(c.ops);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Multiply, LengthMismatchIsStructural) {
  EXPECT_THROW(multiply(PauliString::parse("X"), PauliString::parse("XX")), StructuralError);
  LocalHamiltonian a(1, {term(1.0, "X")});
  LocalHamiltonian b(2, {term(1.0, "XX")});
  EXPECT_THROW(commutator(a, b), StructuralError);
  EXPECT_THROW(LocalHamiltonian(2, {term(1.0, "X")}), StructuralError);
}

TEST(LocalHamiltonian, Canonicalizes) {
  LocalHamiltonian h(2, {term(1.0, "ZI"), term(2.0, "XX"), term(-1.0, "ZI"), term(0.5, "XX")});
  ASSERT_EQ(h.terms().size(), 1u);
  EXPECT_EQ(h.terms()[0].ops.to_string(), "XX");
  EXPECT_EQ(h.terms()[0].coeff, Complex(2.5));
  EXPECT_EQ(h.coefficient(PauliString::parse("ZI")), Complex(0.0));
  EXPECT_TRUE(h.hermitian());
  EXPECT_FALSE(LocalHamiltonian(1, {term(kI, "X")}).hermitian());
}

TEST(Commutator, OneSiteExample) {
  LocalHamiltonian z(1, {term(1.0, "Z")});
  LocalHamiltonian x(1, {term(1.0, "X")});
  const auto c = commutator(z, x);
  ASSERT_EQ(c.terms().size(), 1u);
  EXPECT_EQ(c.terms()[0].ops.to_string(), "Y");
  EXPECT_EQ(c.terms()[0].coeff, 2.0 * kI);
}

TEST(Commutator, DisjointSupportsVanish) {
  LocalHamiltonian a(4, {term(1.0, "XXII")});
  LocalHamiltonian b(4, {term(1.0, "IIZZ")});
  EXPECT_TRUE(commutator(a, b).empty());
}

TEST(Commutator, McsPairMatchesDenseOracle) {
  ModelSpec b{Family::McsBattery, 3};
  ModelSpec c{Family::McsCharger, 3};
  const auto hb = build(b);
  const auto hc = build(c);
  const Eigen::MatrixXcd db = oracle::dense(hb);
  const Eigen::MatrixXcd dc = oracle::dense(hc);
  const Eigen::MatrixXcd expected = db * dc - dc * db;
  const Eigen::MatrixXcd got = oracle::dense(commutator(hb, hc));
  EXPECT_LT((expected - got).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Extensivity, TfimUniform) {
  ModelSpec spec{Family::Tfim, 4, {{"J", 1.0}, {"alpha", 0.5}}};
  const auto p = extensivity(build(spec));
  for (double gi : p.per_site) EXPECT_NEAR(gi, 2.5, 1e-12);
  EXPECT_NEAR(p.g, 2.5, 1e-12);
  EXPECT_EQ(p.argmax_site, 0u);
}

TEST(Extensivity, McsBatteryCentralSite) {
  const auto p = extensivity(build(ModelSpec{Family::McsBattery, 5}));
  ASSERT_EQ(p.per_site.size(), 6u);
  EXPECT_DOUBLE_EQ(p.per_site[0], 5.0);
  for (std::size_t j = 1; j < 6; ++j) EXPECT_DOUBLE_EQ(p.per_site[j], 3.0);
  EXPECT_DOUBLE_EQ(p.g, 5.0);
  EXPECT_EQ(p.argmax_site, 0u);
}

TEST(Extensivity, EmptyHamiltonian) {
  const auto p = extensivity(LocalHamiltonian(3));
  EXPECT_EQ(p.per_site, (std::vector<double>{0.0, 0.0, 0.0}));
  EXPECT_EQ(p.g, 0.0);
}

TEST(Extensivity, TiesGoToLowestIndex) {
  LocalHamiltonian h(3, {term(1.0, "IZI"), term(1.0, "IIZ")});
  EXPECT_EQ(extensivity(h).argmax_site, 1u);
}

TEST(Locality, Examples) {
  EXPECT_EQ(locality(build(ModelSpec{Family::Tfim, 4})), 2u);
  LocalHamiltonian field(3, {term(1.0, "XII"), term(1.0, "IXI"), term(1.0, "IIX")});
  EXPECT_EQ(locality(field), 1u);
  EXPECT_EQ(locality(LocalHamiltonian(3)), 0u);
}

TEST(IsCommuting, Examples) {
  EXPECT_TRUE(is_commuting(build(ModelSpec{Family::IsingRingZ, 4})));
  EXPECT_FALSE(is_commuting(build(ModelSpec{Family::Tfim, 4})));
  EXPECT_TRUE(is_commuting(LocalHamiltonian(2)));
}

TEST(RelabelSites, MovesOperators) {
  LocalHamiltonian h(3, {term(1.0, "XZI")});
  const std::vector<std::size_t> perm{2, 0, 1};
  const auto r = relabel_sites(h, perm);
  EXPECT_EQ(r.terms()[0].ops.to_string(), "ZIX");
  const std::vector<std::size_t> bad{0, 0, 1};
  EXPECT_THROW(relabel_sites(h, bad), DomainError);
}

}  // namespace
}  // namespace qbat

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qbat/bounds.hpp"
#include "qbat/dynamics.hpp"
#include "qbat/error.hpp"
#include "qbat/models.hpp"

namespace qbat {
namespace {

LocalHamiltonian one_site(const char* ops) { return LocalHamiltonian(1, {{1.0, PauliString::parse(ops)}}); }

Vector basis_state(Eigen::Index dim, Eigen::Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return v;
}

TEST(Evolve, TwoLevelClosedForm) {
  EvolveOptions opts;
  opts.t_max = 3.0;
  opts.n_steps = 600;
  const auto tr = evolve(one_site("Z"), one_site("X"), basis_state(2, 1), opts);
  ASSERT_EQ(tr.times.size(), 601u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 3.0);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    EXPECT_NEAR(tr.energy[k], -std::cos(2 * t), 1e-10);
    EXPECT_NEAR(tr.power_analytic[k], 2 * std::sin(2 * t), 1e-10);
    EXPECT_NEAR(tr.state_norm[k], 1.0, 1e-12);
    EXPECT_NEAR(tr.charger_energy[k], 0.0, 1e-12);
  }
  EXPECT_NEAR(tr.max_power, 2.0, 1e-10);
  EXPECT_NEAR(tr.t_star, std::numbers::pi / 4, 1e-5);
  // One site cannot be split, so no entropy is tracked.
  EXPECT_TRUE(tr.entropy.empty());
}

TEST(Evolve, FiniteDifferenceConvergesAtSecondOrder) {
  auto max_err = [](std::size_t steps) {
    EvolveOptions opts;
    opts.t_max = 2.0;
    opts.n_steps = steps;
    const auto tr = evolve(one_site("Z"), one_site("X"), basis_state(2, 1), opts);
    double e = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      e = std::max(e, std::abs(tr.power_fd[k] - tr.power_analytic[k]));
    }
    return e;
  };
  const double e1 = max_err(200), e2 = max_err(400);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.15);
}

TEST(Evolve, CommutingPairHasNoPower) {
  const auto b = build(ModelSpec{Family::IsingRingZ, 3});
  const auto c = build(ModelSpec{Family::IsingRingZ, 3, {{"J", 0.4}}});
  Vector psi = Vector::Constant(16, 0.25);
  EvolveOptions opts;
  opts.n_steps = 100;
  const auto tr = evolve(b, c, psi, opts);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    EXPECT_LT(std::abs(tr.power_analytic[k]), 1e-10);
    EXPECT_NEAR(tr.energy[k], tr.energy[0], 1e-10);
  }
}

TEST(Evolve, McsConservationAndWeights) {
  QuenchExperiment e;
  e.battery = ModelSpec{Family::McsBattery, 4, {}, true};
  e.charger = ModelSpec{Family::McsCharger, 4, {}, true};
  e.options.n_steps = 400;
  e.options.t_max = 4.0;
  const auto tr = evolve(e);
  const double bound = power_bound(build(e.battery), build(e.charger));
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    EXPECT_NEAR(tr.state_norm[k], 1.0, 1e-8);
    EXPECT_NEAR(tr.charger_energy[k], tr.charger_energy[0], 1e-8);
    EXPECT_LE(std::abs(tr.power_analytic[k]), bound + 1e-8);
    double total = 0.0;
    for (double w : tr.spectral_weights[k]) total += w;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
  ASSERT_FALSE(tr.entropy.empty());
  EXPECT_LT(tr.entropy.front(), 1e-10);
  EXPECT_EQ(tr.bipartition, (std::vector<std::size_t>{0, 1, 3}));
}

TEST(Evolve, InputChecks) {
  EXPECT_THROW(evolve(one_site("Z"), LocalHamiltonian(2), basis_state(2, 0)), StructuralError);
  EXPECT_THROW(evolve(one_site("Z"), one_site("X"), basis_state(4, 0)), StructuralError);
  EXPECT_THROW(evolve(one_site("Z"), one_site("X"), 2.0 * basis_state(2, 0)), DomainError);
  EvolveOptions opts;
  opts.t_max = 0.0;
  EXPECT_THROW(evolve(one_site("Z"), one_site("X"), basis_state(2, 0), opts), DomainError);
}

TEST(Bipartition, DefaultRule) {
  EXPECT_EQ(default_bipartition(7, 0), (std::vector<std::size_t>{0, 1, 3, 5}));
  EXPECT_EQ(default_bipartition(6, 2), (std::vector<std::size_t>{1, 2, 3, 5}));
}

TEST(Bipartition, MustContainMaxSite) {
  const auto b = build(ModelSpec{Family::McsBattery, 4});
  const auto c = build(ModelSpec{Family::McsCharger, 4});
  EvolveOptions opts;
  opts.n_steps = 10;
  opts.bipartition = std::vector<std::size_t>{1, 2};
  EXPECT_THROW(evolve(b, c, central_product_state(5), opts), DomainError);
  opts.bipartition = std::vector<std::size_t>{0, 2};
  EXPECT_NO_THROW(evolve(b, c, central_product_state(5), opts));
}

TEST(Variance, Examples) {
  const LocalHamiltonian sz = one_site("Z");
  EXPECT_NEAR(variance(sz, basis_state(2, 0)), 0.0, 1e-14);
  const auto b3 = build(ModelSpec{Family::McsBattery, 3});
  EXPECT_NEAR(variance(b3, central_product_state(4)), 12.0, 1e-9);
  const auto c5 = build(ModelSpec{Family::McsCharger, 5});
  EXPECT_NEAR(variance(c5, central_product_state(6)), 30.0, 1e-9);
  EXPECT_THROW(variance(sz, 2.0 * basis_state(2, 0)), DomainError);
}

TEST(FiniteDifference, ConstantAndRamp) {
  const std::vector<double> flat(10, 3.0);
  for (double d : finite_difference(flat, 0.1)) EXPECT_EQ(d, 0.0);
  std::vector<double> ramp;
  for (int k = 0; k <= 20; ++k) ramp.push_back(0.3 * 0.05 * k);
  for (double d : finite_difference(ramp, 0.05)) EXPECT_NEAR(d, 0.3, 1e-9);
  EXPECT_THROW(finite_difference(std::vector<double>{1.0, 2.0}, 0.1), DomainError);
}

TEST(DynamicsCsv, Headers) {
  EvolveOptions opts;
  opts.n_steps = 4;
  opts.t_max = 1.0;
  const auto tr = evolve(one_site("Z"), one_site("X"), basis_state(2, 1), opts);
  const auto csv = dynamics_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,energy,power,power_fd,entropy,entropy_rate");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(csv.find("nan"), std::string::npos);
  const auto w = spectral_weights_csv(tr);
  EXPECT_EQ(w.substr(0, w.find('\n')), "t,group_index,group_energy,weight");
  EXPECT_EQ(std::count(w.begin(), w.end(), '\n'), 1 + 5 * 2);
}

}  // namespace
}  // namespace qbat

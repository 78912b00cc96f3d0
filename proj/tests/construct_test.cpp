#include <gtest/gtest.h>

#include <cmath>

#include "mereology/construct.hpp"
#include "mereology/optimizer.hpp"
#include "mereology/reference_cases.hpp"
#include "test_support.hpp"

namespace mereology {
namespace {

TEST(Verify, ReferenceDisentanglerPassesAndIdentityFails) {
  const SampledTrajectory s = sample_trig(cases::cnot_trajectory(), 100);
  const auto good = verify_disentangler(make_tps(cases::cnot_disentangler(), cases::kQubits), s, 1e-10);
  EXPECT_TRUE(good.pass);
  const auto bad = verify_disentangler(TPSpec::identity(cases::kQubits), s, 1e-10);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.max_sigma2, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Verify, AnyTpsDisentanglesItsOwnPulledBackProduct) {
  auto g = testing::rng(71);
  const TPSpec u = make_tps(random_unitary(4, g), cases::kQubits);
  SampledTrajectory s{cases::kQubits, {0.0, 1.0}, {}};
  VectorXcd e0 = VectorXcd::Zero(4);
  e0(0) = 1.0;
  for (int k = 0; k < 2; ++k) s.states.emplace_back(u.basis_change().adjoint() * e0, cases::kQubits);
  EXPECT_TRUE(verify_disentangler(u, s, 1e-10).pass);
}

TEST(Construct, CnotIsFoundAndVerified) {
  const ConstructionResult r = construct_disentangler(cases::cnot_trajectory());
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.stage, ConstructStage::kPolynomial);
  EXPECT_TRUE(verify_disentangler(*r.tps, sample_trig(cases::cnot_trajectory(), 100), 1e-8).pass);
  for (const cplx c : r.factorization) EXPECT_LT(std::abs(c), 1e-9);
  EXPECT_LT(r.unitarity_deviation, 1e-10);
  ASSERT_TRUE(r.pairing.has_value());
  EXPECT_LT(std::abs(r.pairing->leading_constraint()), 1e-9);
  EXPECT_EQ(r.span_dim, 3);
}

TEST(Construct, LocalGaugeOfTheResultStillVerifies) {
  auto g = testing::rng(72);
  const ConstructionResult r = construct_disentangler(cases::cnot_trajectory());
  ASSERT_TRUE(r.found());
  const SampledTrajectory s = sample_trig(cases::cnot_trajectory(), 100);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXcd local = kron(random_unitary(2, g), random_unitary(2, g));
    EXPECT_TRUE(verify_disentangler(make_tps(local * r.tps->basis_change(), cases::kQubits), s, 1e-8).pass);
  }
}

TEST(Construct, SeededAtReferencePairingReturnsIt) {
  ConstructConfig config;
  config.initial_guess = cases::cnot_pairing();
  const ConstructionResult r = construct_disentangler(cases::cnot_trajectory(), config);
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.restart, 0);
  // Leading coefficient 1/(2 sqrt 2) in a normalization where rows carry an
  // extra 1/sqrt 2, i.e. 1/4 here.
  for (const cplx k : r.pairing->kappa) EXPECT_LT(std::abs(k - 0.25), 1e-12);
  const double roots[4] = {1.0, -1.0, 1.0, -1.0};
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(r.pairing->roots[i] - roots[i]), 1e-12);
  EXPECT_TRUE(tps_equivalent_on_subspace(*r.tps, make_tps(cases::cnot_disentangler(), cases::kQubits), r.span_basis, 1e-6));
}

TEST(Construct, ReferencePairingReproducesTheReferenceRows) {
  // kappa_i (X - r)(X - s) must equal the polynomials of the reference TPS.
  const PolynomialSystem sys =
      trig_to_polynomials(cases::cnot_trajectory(), make_tps(cases::cnot_disentangler(), cases::kQubits));
  const RootPairing p = cases::cnot_pairing();
  for (int i = 0; i < 4; ++i) {
    const auto c = p.poly(i);
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(c[j] - sys.polys[i].coeffs[j]), 1e-15) << i << "," << j;
  }
}

TEST(Construct, ConstantProductUsesReferenceStage) {
  const ConstructionResult r = construct_disentangler(cases::constant_product_trajectory());
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.stage, ConstructStage::kReference);
  EXPECT_TRUE(tps_equivalent(*r.tps, TPSpec::identity(cases::kQubits), 1e-10));
}

TEST(Construct, LowDimensionalSpanIsFoundDirectly) {
  const ConstructionResult r = construct_disentangler(cases::lowdim_entangled_trajectory());
  ASSERT_TRUE(r.found());
  EXPECT_EQ(r.stage, ConstructStage::kLowDimension);
  EXPECT_EQ(r.span_dim, 2);
}

TEST(Construct, AdversarialFamilyHasNoDisentangler) {
  const ConstructionResult r = construct_disentangler(cases::adversarial_trajectory(0.8));
  EXPECT_FALSE(r.found());
  EXPECT_EQ(r.status, ConstructStatus::kNotFound);
  EXPECT_EQ(r.restarts_run, 64);
  // Cross-check with the optimizer: the best product distance stays bounded away from 0.
  OptimizerConfig oc;
  oc.restarts = 4;
  const auto best = optimize_tps(sample_trig(cases::adversarial_trajectory(0.8), 200), oc);
  EXPECT_GT(best.objective, 1e-3);
}

TEST(Construct, AdversarialFamilyBelowThresholdIsSolvable) {
  const ConstructionResult r = construct_disentangler(cases::adversarial_trajectory(0.3));
  EXPECT_TRUE(r.found());
}

TEST(Construct, RejectsUnsupportedForms) {
  EXPECT_ERROR_KIND(construct_disentangler(cases::multifrequency_trajectory()), ErrorKind::kUnsupportedForm);
  const HilbertDims d = HilbertDims::make(2, 3);
  TrigTrajectory qutrit{d, VectorXcd::Zero(6), {}, 1.0};
  qutrit.constant(0) = 1.0;
  EXPECT_ERROR_KIND(construct_disentangler(qutrit), ErrorKind::kUnsupportedForm);
}

TEST(Construct, RejectsBadConfig) {
  ConstructConfig config;
  config.restarts = 0;
  EXPECT_ERROR_KIND(construct_disentangler(cases::cnot_trajectory(), config), ErrorKind::kInvalidArgument);
}

TEST(Construct, DeterministicAcrossThreadCounts) {
  ConstructConfig one;
  one.threads = 1;
  ConstructConfig four;
  four.threads = 4;
  const ConstructionResult a = construct_disentangler(cases::cnot_trajectory(), one);
  const ConstructionResult b = construct_disentangler(cases::cnot_trajectory(), four);
  ASSERT_TRUE(a.found() && b.found());
  EXPECT_EQ(a.restart, b.restart);
  EXPECT_EQ(a.tps->basis_change(), b.tps->basis_change());
}

TEST(Properties, FoundTpsHasVanishingProductCondition) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ConstructConfig config;
    config.seed = seed;
    const ConstructionResult r = construct_disentangler(cases::cnot_trajectory(), config);
    ASSERT_TRUE(r.found());
    const PolynomialSystem sys = trig_to_polynomials(cases::cnot_trajectory(), *r.tps);
    // Independent expansion of P1 P4 - P2 P3 as a quartic.
    for (int deg = 0; deg <= 4; ++deg) {
      cplx c = 0.0;
      for (int i = 0; i <= 2; ++i) {
        const int j = deg - i;
        if (j < 0 || j > 2) continue;
        // coeffs are stored highest first: index 2 - power.
        c += sys.polys[0].coeffs[2 - i] * sys.polys[3].coeffs[2 - j] - sys.polys[1].coeffs[2 - i] * sys.polys[2].coeffs[2 - j];
      }
      EXPECT_LT(std::abs(c), 1e-9) << "seed " << seed << " degree " << deg;
    }
  }
}

}  // namespace
}  // namespace mereology

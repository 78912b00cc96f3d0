#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "mereology/entanglement.hpp"
#include "mereology/reference_cases.hpp"
#include "test_support.hpp"

namespace mereology {
namespace {

using testing::max_abs_diff;

VectorXcd vec4(cplx a, cplx b, cplx c, cplx d) {
  VectorXcd v(4);
  v << a, b, c, d;
  return v;
}

// Entropy through the reduced density matrix, a route independent of the SVD.
double entropy_via_reduced_state(const VectorXcd& v, HilbertDims d) {
  const MatrixXcd m = reshape_coefficients(v, d).entries;
  const MatrixXcd rho = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(rho);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double p = eig.eigenvalues()(k);
    if (p > 1e-300) s -= p * std::log(p);
  }
  return s;
}

TEST(Schmidt, ProductAndBell) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto product = schmidt_decompose(vec4(1, 0, 0, 0), cases::kQubits);
  EXPECT_NEAR(product.coefficients(0), 1.0, 1e-15);
  EXPECT_NEAR(product.coefficients(1), 0.0, 1e-15);
  const auto bell = schmidt_decompose(vec4(r, 0, 0, r), cases::kQubits);
  EXPECT_NEAR(bell.coefficients(0), r, 1e-15);
  EXPECT_NEAR(bell.coefficients(1), r, 1e-15);
}

TEST(Schmidt, RebasedEndpointIsProduct) {
  const auto sd = schmidt_decompose(vec4(-0.5, 0.5 * kI, 0.5 * kI, 0.5), cases::kQubits);
  EXPECT_NEAR(sd.coefficients(0), 1.0, 1e-15);
  EXPECT_LT(sd.coefficients(1), 1e-15);
}

TEST(Entropy, ReferenceValues) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(entanglement_entropy(StateVector(vec4(1, 0, 0, 0), cases::kQubits)), 0.0, 1e-15);
  EXPECT_NEAR(entanglement_entropy(StateVector(vec4(r, 0, 0, r), cases::kQubits)), std::log(2.0), 1e-14);
  const VectorXcd skew = vec4(std::sqrt(0.9), 0, 0, std::sqrt(0.1));
  EXPECT_NEAR(entanglement_entropy(StateVector(skew, cases::kQubits)), -0.9 * std::log(0.9) - 0.1 * std::log(0.1), 1e-14);
}

TEST(ProductDistance, ReferenceValues) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(product_distance(StateVector(vec4(1, 0, 0, 0), cases::kQubits)), 0.0, 1e-15);
  EXPECT_NEAR(product_distance(StateVector(vec4(r, 0, 0, r), cases::kQubits)), std::sqrt(2.0 - std::sqrt(2.0)), 1e-14);
}

TEST(ProductTest, CnotRebasedIsProductAtEverySample) {
  const TPSpec u = make_tps(cases::cnot_disentangler(), cases::kQubits);
  const SampledTrajectory s = sample_trig(cases::cnot_trajectory(), 100);
  for (const auto& psi : s.states) EXPECT_TRUE(is_product_state(rebase_state(u, psi), 1e-10));
}

TEST(ProductTest, BellAndNearProduct) {
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_FALSE(is_product_state(StateVector(vec4(r, 0, 0, r), cases::kQubits), 1e-10));
  const double eps = 1e-6;
  const StateVector near = StateVector::normalized(vec4(1, 0, 0, eps), cases::kQubits);
  EXPECT_FALSE(is_product_state(near, 1e-10));
  EXPECT_NEAR(max_minor_modulus(reshape_coefficients(near)), eps / (1.0 + eps * eps), 1e-18);
}

TEST(Profile, IdentityAndDisentanglerOnCnot) {
  const SampledTrajectory s = sample_trig(cases::cnot_trajectory(), 101);
  const auto before = entanglement_profile(s, TPSpec::identity(cases::kQubits));
  EXPECT_NEAR(before.max_entropy, std::log(2.0), 1e-12);
  EXPECT_NEAR(before.entropy.back(), std::log(2.0), 1e-12);
  EXPECT_NEAR(before.entropy.front(), 0.0, 1e-12);

  const auto after = entanglement_profile(s, make_tps(cases::cnot_disentangler(), cases::kQubits));
  EXPECT_LT(after.max_entropy, 1e-10);
  EXPECT_LT(after.max_distance, 1e-10);
  EXPECT_LT(after.max_sigma2, 1e-10);
}

TEST(Profile, ConstantProductIsIdenticallyZero) {
  const auto p = entanglement_profile(sample_trig(cases::constant_product_trajectory(), 11), TPSpec::identity(cases::kQubits));
  for (double e : p.entropy) EXPECT_EQ(e, 0.0);
  for (double d : p.product_distance) EXPECT_EQ(d, 0.0);
}

TEST(Profile, CsvHeaderAndRows) {
  const auto p = entanglement_profile(sample_trig(cases::cnot_trajectory(), 4), TPSpec::identity(cases::kQubits));
  std::ostringstream os;
  write_profile_csv(os, p);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,entropy,product_distance");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Properties, SchmidtReconstructsAndEntropyMatchesReducedState) {
  auto g = testing::rng(41);
  for (const HilbertDims d : {HilbertDims::make(2, 2), HilbertDims::make(2, 3), HilbertDims::make(3, 4)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const VectorXcd v = random_unit_vector(d.n(), g);
      const auto sd = schmidt_decompose(v, d);
      EXPECT_LT(max_abs_diff(sd.reconstruct(), v), 1e-12);
      const double s = entanglement_entropy(StateVector(v, d));
      EXPECT_NEAR(s, entropy_via_reduced_state(v, d), 1e-10);
      EXPECT_GE(s, -1e-15);
      EXPECT_LE(s, std::log(std::min(d.n1, d.n2)) + 1e-12);
    }
  }
}

TEST(Properties, LocalUnitariesPreserveEntanglement) {
  auto g = testing::rng(42);
  const HilbertDims d = HilbertDims::make(2, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector psi(random_unit_vector(d.n(), g), d);
    const MatrixXcd local = kron(random_unitary(2, g), random_unitary(3, g));
    const StateVector moved(local * psi.amplitudes(), d);
    EXPECT_NEAR(entanglement_entropy(psi), entanglement_entropy(moved), 1e-12);
    EXPECT_NEAR(product_distance(psi), product_distance(moved), 1e-12);
  }
}

TEST(Properties, ProductDistanceMatchesBestProductOverlap) {
  // d^2 = 2 - 2 sigma_1 where sigma_1 is the best overlap with a product state.
  auto g = testing::rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector psi(random_unit_vector(4, g), cases::kQubits);
    const MatrixXcd m = reshape_coefficients(psi).entries;
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXcd best = kron(VectorXcd(svd.matrixU().col(0)), VectorXcd(svd.matrixV().col(0).conjugate()));
    const double direct = (psi.amplitudes() - best * (best.dot(psi.amplitudes()))).norm();
    const double dist = product_distance(psi);
    EXPECT_NEAR(dist, std::sqrt(2.0 - 2.0 * svd.singularValues()(0)), 1e-10);
    EXPECT_GE(dist + 1e-12, direct);  // distance to the nearest unit product state bounds the projection residual
  }
}

TEST(Properties, MinorBoundAgreesWithSigma2) {
  auto g = testing::rng(44);
  const HilbertDims d = HilbertDims::make(3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const StateVector psi(random_unit_vector(d.n(), g), d);
    const auto sd = schmidt_decompose(psi);
    const double minor = max_minor_modulus(reshape_coefficients(psi));
    const double prod = sd.coefficients(0) * sd.coefficients(1);
    EXPECT_LE(minor, prod + 1e-12);
    EXPECT_LE(prod, 3.0 * minor + 1e-12);  // sqrt(#2x2 minors) = sqrt(9)
  }
}

}  // namespace
}  // namespace mereology

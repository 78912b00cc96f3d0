#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mereology/reference_cases.hpp"
#include "mereology/trajectory.hpp"
#include "test_support.hpp"

namespace mereology {
namespace {

using testing::max_abs_diff;
constexpr double kHalfPi = std::numbers::pi / 2.0;

TEST(SampleTrig, CnotAtThreePoints) {
  const TrigTrajectory traj = cases::cnot_trajectory();
  const SampledTrajectory s = sample_trig(traj, 3);
  ASSERT_EQ(s.size(), 3u);
  const double r = 1.0 / std::sqrt(2.0);
  const double expected[3][4] = {{r, 0, r, 0}, {r, 0, 0.5, 0.5}, {r, 0, 0, r}};
  for (int k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(s.times[k], kHalfPi * k / 2.0);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(s.states[k][i] - expected[k][i]), 0.0, 1e-15);
  }
}

TEST(SampleTrig, ConstantTrajectoryIsConstant) {
  const SampledTrajectory s = sample_trig(cases::constant_product_trajectory(), 5);
  for (const auto& state : s.states) EXPECT_EQ(state.amplitudes(), s.states.front().amplitudes());
}

TEST(Validate, RejectsUnnormalizedTrig) {
  TrigTrajectory t = cases::constant_product_trajectory();
  t.constant(1) = 1.0;
  EXPECT_ERROR_KIND(validate(t), ErrorKind::kNotNormalizable);
  EXPECT_ERROR_KIND(sample_trig(t, 10), ErrorKind::kNotNormalizable);
}

TEST(Validate, RejectsWrongLengthAndBadSamples) {
  TrigTrajectory t = cases::constant_product_trajectory();
  t.constant = VectorXcd::Zero(3);
  EXPECT_ERROR_KIND(validate(t), ErrorKind::kDimensionMismatch);
  EXPECT_ERROR_KIND(sample_trig(cases::cnot_trajectory(), 1), ErrorKind::kInvalidArgument);

  SampledTrajectory s = sample_trig(cases::cnot_trajectory(), 4);
  std::swap(s.times[1], s.times[2]);
  EXPECT_ERROR_KIND(validate(s), ErrorKind::kInvalidArgument);
}

TEST(Evolve, CnotHamiltonianReachesBellState) {
  const SampledTrajectory s = evolve_under_hamiltonian(cases::cnot_hamiltonian_trajectory(), 3);
  const double r = 1.0 / std::sqrt(2.0);
  VectorXcd expected(4);
  expected << r, 0.0, 0.0, r;
  EXPECT_LT(max_abs_diff(s.states.back().amplitudes(), expected), 1e-14);
}

TEST(Evolve, ZeroAndIdentityHamiltonians) {
  HamiltonianTrajectory h = cases::cnot_hamiltonian_trajectory();
  h.hamiltonian = MatrixXcd::Zero(4, 4);
  const SampledTrajectory still = evolve_under_hamiltonian(h, 7);
  for (const auto& s : still.states) EXPECT_LT(max_abs_diff(s.amplitudes(), h.initial.amplitudes()), 1e-15);

  h.hamiltonian = MatrixXcd::Identity(4, 4);
  const SampledTrajectory phased = evolve_under_hamiltonian(h, 7);
  for (std::size_t k = 0; k < phased.size(); ++k) {
    const VectorXcd expected = std::exp(kI * phased.times[k]) * h.initial.amplitudes();
    EXPECT_LT(max_abs_diff(phased.states[k].amplitudes(), expected), 1e-14);
  }
}

TEST(Evolve, RejectsNonHermitian) {
  HamiltonianTrajectory h = cases::cnot_hamiltonian_trajectory();
  h.hamiltonian(0, 1) = 1.0;
  EXPECT_ERROR_KIND(evolve_under_hamiltonian(h, 5), ErrorKind::kNotHermitian);
}

TEST(Evolve, ForwardThenBackwardIsIdentity) {
  auto g = testing::rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXcd h = random_hermitian(4, g);
    const StateVector psi0(random_unit_vector(4, g), cases::kQubits);
    const SampledTrajectory fwd = evolve_under_hamiltonian({cases::kQubits, h, psi0, 2.0}, 9);
    for (std::size_t k = 0; k < fwd.size(); ++k) {
      const VectorXcd undone = expm_i_hermitian(-h, fwd.times[k]) * fwd.states[k].amplitudes();
      EXPECT_LT(max_abs_diff(undone, psi0.amplitudes()), 1e-12);
    }
  }
}

TEST(Polynomial, IdentityTpsOnCnot) {
  const PolynomialSystem sys = trig_to_polynomials(cases::cnot_trajectory(), TPSpec::identity(cases::kQubits));
  const double q = 1.0 / (2.0 * std::sqrt(2.0));
  const cplx expected[4][3] = {{0.0, 2.0 * q, 0.0}, {0.0, 0.0, 0.0}, {q, 0.0, q}, {-kI * q, 0.0, kI * q}};
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 3; ++c) EXPECT_LT(std::abs(sys.polys[i].coeffs[c] - expected[i][c]), 1e-15) << i << "," << c;
}

TEST(Polynomial, ReferenceDisentanglerGivesDoubleRoot) {
  const TPSpec u = make_tps(cases::cnot_disentangler(), cases::kQubits);
  const PolynomialSystem sys = trig_to_polynomials(cases::cnot_trajectory(), u);
  // First row: (X - 1)^2 / 4.
  EXPECT_LT(std::abs(sys.polys[0].coeffs[0] - 0.25), 1e-15);
  EXPECT_LT(std::abs(sys.polys[0].coeffs[1] + 0.5), 1e-15);
  EXPECT_LT(std::abs(sys.polys[0].coeffs[2] - 0.25), 1e-15);
  EXPECT_LT(std::abs(sys.polys[0](1.0)), 1e-15);
}

TEST(Polynomial, RejectsUnsupportedForms) {
  EXPECT_ERROR_KIND(trig_to_polynomials(cases::multifrequency_trajectory(), TPSpec::identity(cases::kQubits)),
                    ErrorKind::kUnsupportedForm);
  TrigTrajectory two_harmonics = cases::cnot_trajectory();
  two_harmonics.harmonics.push_back(two_harmonics.harmonics.front());
  EXPECT_ERROR_KIND(require_single_frequency(two_harmonics), ErrorKind::kUnsupportedForm);
  const HilbertDims d = HilbertDims::make(2, 3);
  TrigTrajectory qutrit{d, VectorXcd::Zero(6), {}, 1.0};
  qutrit.constant(0) = 1.0;
  EXPECT_ERROR_KIND(trig_to_polynomials(qutrit, TPSpec::identity(d)), ErrorKind::kUnsupportedForm);
}

TEST(Properties, PolynomialFormReproducesRebasedTrajectory) {
  auto g = testing::rng(31);
  const TrigTrajectory traj = cases::cnot_trajectory();
  for (int trial = 0; trial < 20; ++trial) {
    const TPSpec u = make_tps(random_unitary(4, g), cases::kQubits);
    const PolynomialSystem sys = trig_to_polynomials(traj, u);
    for (double t : uniform_grid(traj.t_max, 50)) {
      const VectorXcd direct = rebase_state(u, StateVector(traj.evaluate(t), cases::kQubits)).amplitudes();
      for (std::size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(sys.component(i, t) - direct(i)), 1e-12);
    }
  }
}

TEST(Properties, TrigAndHamiltonianRoutesAgree) {
  const SampledTrajectory a = sample_trig(cases::cnot_trajectory(), 200);
  const SampledTrajectory b = evolve_under_hamiltonian(cases::cnot_hamiltonian_trajectory(), 200);
  for (std::size_t k = 0; k < a.size(); ++k)
    EXPECT_LT(max_abs_diff(a.states[k].amplitudes(), b.states[k].amplitudes()), 1e-12);
}

}  // namespace
}  // namespace mereology

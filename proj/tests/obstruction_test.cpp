#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mereology/obstruction.hpp"
#include "mereology/reference_cases.hpp"
#include "test_support.hpp"

namespace mereology {
namespace {

TEST(ProductGram, CnotHasFourZeroRowsForTheUnusedComponent) {
  const ProductGram pg = build_product_gram(sample_trig(cases::cnot_trajectory(), 400));
  ASSERT_EQ(pg.gram.rows(), 10);
  int zero_rows = 0;
  for (std::size_t r = 0; r < pg.pair_index.size(); ++r) {
    const bool touches_01 = pg.pair_index[r].p == 1 || pg.pair_index[r].q == 1;
    const double row_norm = pg.gram.row(static_cast<Eigen::Index>(r)).norm();
    EXPECT_EQ(row_norm == 0.0, touches_01) << r;
    if (row_norm == 0.0) ++zero_rows;
  }
  EXPECT_EQ(zero_rows, 4);
}

TEST(ProductGram, ConstantStateHasSingleEntry) {
  const ProductGram pg = build_product_gram(sample_trig(cases::constant_product_trajectory(), 40));
  for (Eigen::Index r = 0; r < pg.gram.rows(); ++r)
    for (Eigen::Index s = 0; s < pg.gram.cols(); ++s) {
      if (r == 0 && s == 0) {
        EXPECT_NEAR(pg.gram(r, s).real(), 1.0, 1e-14);  // t_max = 1
      } else {
        EXPECT_EQ(pg.gram(r, s), cplx(0.0));
      }
    }
}

TEST(ProductGram, SidonGramIsScaledIdentity) {
  // Components are 0.5 e^{i f t} with f in {0, 1, 3, 7}; all pair sums differ, so
  // the products are orthogonal over a full period and each has |f|^2 = 1/16.
  const ProductGram pg = build_product_gram(sample_trig(cases::sidon_trajectory(), 400));
  const MatrixXcd expected = (2.0 * std::numbers::pi / 16.0) * MatrixXcd::Identity(10, 10);
  EXPECT_LT(testing::max_abs_diff(pg.gram, expected), 1e-12);
}

TEST(ProductGram, TooFewSamples) {
  EXPECT_EQ(required_samples(cases::kQubits), 40u);
  EXPECT_ERROR_KIND(build_product_gram(sample_trig(cases::cnot_trajectory(), 39)), ErrorKind::kTooFewSamples);
  EXPECT_NO_THROW(build_product_gram(sample_trig(cases::cnot_trajectory(), 40)));
}

TEST(Certify, ReferenceVerdicts) {
  const Certificate sidon = certify_no_disentangling(sample_trig(cases::sidon_trajectory(), 400));
  EXPECT_EQ(sidon.verdict, Verdict::kCertifiedNoDisentanglingTPS);
  EXPECT_EQ(sidon.numerical_rank, 10);
  EXPECT_GT(sidon.min_max_eig_ratio, 0.99);

  const Certificate cnot = certify_no_disentangling(sample_trig(cases::cnot_trajectory(), 400));
  EXPECT_EQ(cnot.verdict, Verdict::kInconclusive);
  EXPECT_EQ(cnot.numerical_rank, 5);
  EXPECT_EQ(cnot.trajectory_span_dim, 3);

  const Certificate low = certify_no_disentangling(sample_trig(cases::lowdim_trajectory(), 400));
  EXPECT_EQ(low.verdict, Verdict::kExistsByLowDimension);
  EXPECT_EQ(low.trajectory_span_dim, 2);
}

TEST(Certify, RejectsBadTolerance) {
  const SampledTrajectory s = sample_trig(cases::sidon_trajectory(), 100);
  EXPECT_ERROR_KIND(certify_no_disentangling(s, 0.0), ErrorKind::kInvalidArgument);
  EXPECT_ERROR_KIND(certify_no_disentangling(s, 1.5), ErrorKind::kInvalidArgument);
}

TEST(Certify, VerdictNames) {
  EXPECT_EQ(to_string(Verdict::kCertifiedNoDisentanglingTPS), "CertifiedNoDisentanglingTPS");
  EXPECT_EQ(to_string(Verdict::kInconclusive), "Inconclusive");
  EXPECT_EQ(to_string(Verdict::kExistsByLowDimension), "ExistsByLowDimension");
}

std::vector<TrigTrajectory> reference_trajectories() {
  return {cases::sidon_trajectory(), cases::cnot_trajectory(), cases::lowdim_trajectory()};
}

TEST(Properties, GlobalPhaseDoesNotChangeRank) {
  for (const auto& traj : reference_trajectories()) {
    const SampledTrajectory s = sample_trig(traj, 400);
    SampledTrajectory phased = s;
    for (std::size_t k = 0; k < s.size(); ++k)
      phased.states[k] = StateVector(std::exp(kI * (0.3 + 2.0 * s.times[k])) * s.states[k].amplitudes(), s.dims);
    const Certificate a = certify_no_disentangling(s);
    const Certificate b = certify_no_disentangling(phased);
    EXPECT_EQ(a.numerical_rank, b.numerical_rank);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(Properties, ReparameterizationDoesNotChangeRank) {
  for (const auto& traj : reference_trajectories()) {
    // Samples at t = T (s/T)^2 with s uniform, i.e. a smooth monotone reparameterization.
    SampledTrajectory warped{traj.dims, {}, {}};
    const int n = 800;
    for (int k = 0; k < n; ++k) {
      const double u = static_cast<double>(k) / (n - 1);
      const double t = traj.t_max * (0.5 * u + 0.5 * u * u);
      warped.times.push_back(t);
      warped.states.emplace_back(traj.evaluate(t), traj.dims);
    }
    const Certificate a = certify_no_disentangling(sample_trig(traj, 400));
    const Certificate b = certify_no_disentangling(warped);
    EXPECT_EQ(a.numerical_rank, b.numerical_rank);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(Properties, RefiningTheGridKeepsVerdicts) {
  for (const auto& traj : reference_trajectories()) {
    const Certificate a = certify_no_disentangling(sample_trig(traj, 400));
    const Certificate b = certify_no_disentangling(sample_trig(traj, 800));
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.numerical_rank, b.numerical_rank);
  }
}

TEST(Properties, TrapezoidGramIsHermitianPsd) {
  auto g = testing::rng(51);
  const auto times = uniform_grid(1.0, 30);
  MatrixXcd f(30, 5);
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    for (Eigen::Index j = 0; j < f.cols(); ++j) f(i, j) = random_unit_vector(1, g)(0) * (1.0 + i * j);
  const MatrixXcd gram = trapezoid_gram(times, f);
  EXPECT_LT((gram - gram.adjoint()).norm(), 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(gram);
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
}

}  // namespace
}  // namespace mereology

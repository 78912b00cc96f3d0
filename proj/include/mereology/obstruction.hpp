#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"
#include "mereology/trajectory.hpp"

namespace mereology {

inline constexpr double kDefaultRankTol = 1e-8;

/// Unordered pair of flat component indices (p <= q), f = a_p * a_q.
struct ComponentPair {
  int p = 0;
  int q = 0;
};

struct ProductGram {
  std::vector<ComponentPair> pair_index;
  MatrixXcd gram;  // G[r][s] = int f_r conj(f_s) dt, trapezoid rule on the sample grid
  int quadrature_nodes = 0;
};

/// L2 Gram of arbitrary sampled functions (one column per function).
inline MatrixXcd trapezoid_gram(const std::vector<double>& times, const MatrixXcd& values) {
  const Eigen::Index k = static_cast<Eigen::Index>(times.size());
  VectorXd w = VectorXd::Zero(k);
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    const double h = times[static_cast<std::size_t>(i + 1)] - times[static_cast<std::size_t>(i)];
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  // G = F^T W conj(F) so that G(r,s) = sum_t w_t f_r(t) conj(f_s(t)).
  const MatrixXcd g = values.transpose() * w.asDiagonal() * values.conjugate();
  return 0.5 * (g + g.adjoint());
}

inline std::size_t required_samples(HilbertDims dims) {
  const std::size_t n = static_cast<std::size_t>(dims.n());
  return 4 * n * (n + 1) / 2;
}

inline ProductGram build_product_gram(const SampledTrajectory& traj) {
  const int n = traj.dims.n();
  const std::size_t needed = required_samples(traj.dims);
  if (traj.size() < needed) {
    fail(ErrorKind::kTooFewSamples, "product Gram needs at least " + std::to_string(needed) + " samples, got " +
                                        std::to_string(traj.size()));
  }
  ProductGram out;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) out.pair_index.push_back({p, q});
  const Eigen::Index samples = static_cast<Eigen::Index>(traj.size());
  MatrixXcd f(samples, static_cast<Eigen::Index>(out.pair_index.size()));
  for (Eigen::Index t = 0; t < samples; ++t) {
    const VectorXcd& a = traj.states[static_cast<std::size_t>(t)].amplitudes();
    for (std::size_t r = 0; r < out.pair_index.size(); ++r) {
      f(t, static_cast<Eigen::Index>(r)) = a(out.pair_index[r].p) * a(out.pair_index[r].q);
    }
  }
  out.gram = trapezoid_gram(traj.times, f);
  out.quadrature_nodes = static_cast<int>(samples);
  return out;
}

enum class Verdict { kCertifiedNoDisentanglingTPS, kInconclusive, kExistsByLowDimension };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kCertifiedNoDisentanglingTPS: return "CertifiedNoDisentanglingTPS";
    case Verdict::kInconclusive: return "Inconclusive";
    case Verdict::kExistsByLowDimension: return "ExistsByLowDimension";
  }
  return "Unknown";
}

struct Certificate {
  Verdict verdict = Verdict::kInconclusive;
  int numerical_rank = 0;
  int full_rank = 0;
  double min_max_eig_ratio = 0.0;
  int trajectory_span_dim = 0;
  VectorXd eigenvalues;  // of the product Gram, descending
  double rank_tol = kDefaultRankTol;
  int quadrature_nodes = 0;
};

namespace detail {

inline VectorXd descending_eigenvalues(const MatrixXcd& g) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(g, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

inline int relative_rank(const VectorXd& descending, double rank_tol) {
  if (descending.size() == 0 || !(descending(0) > 0.0)) return 0;
  int r = 0;
  for (Eigen::Index k = 0; k < descending.size(); ++k)
    if (descending(k) > rank_tol * descending(0)) ++r;
  return r;
}

}  // namespace detail

/// Numerical rank of the component Gram, i.e. dim span{Psi(t)}.
inline int trajectory_span_dim(const SampledTrajectory& traj, double rank_tol) {
  const Eigen::Index samples = static_cast<Eigen::Index>(traj.size());
  MatrixXcd f(samples, traj.dims.n());
  for (Eigen::Index t = 0; t < samples; ++t) f.row(t) = traj.states[static_cast<std::size_t>(t)].amplitudes().transpose();
  return detail::relative_rank(detail::descending_eigenvalues(trapezoid_gram(traj.times, f)), rank_tol);
}

/// Verdict precedence: low-dimensional span (existence) first, then full product
/// rank (non-existence), otherwise Inconclusive. Inconclusive is never upgraded.
inline Certificate certify_no_disentangling(const SampledTrajectory& traj, double rank_tol = kDefaultRankTol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) fail(ErrorKind::kInvalidArgument, "rank_tol must lie in (0, 1)");
  const ProductGram pg = build_product_gram(traj);
  Certificate c;
  c.rank_tol = rank_tol;
  c.quadrature_nodes = pg.quadrature_nodes;
  c.eigenvalues = detail::descending_eigenvalues(pg.gram);
  c.full_rank = static_cast<int>(pg.pair_index.size());
  c.numerical_rank = detail::relative_rank(c.eigenvalues, rank_tol);
  const double top = c.eigenvalues(0);
  c.min_max_eig_ratio = top > 0.0 ? c.eigenvalues(c.eigenvalues.size() - 1) / top : 0.0;
  c.trajectory_span_dim = trajectory_span_dim(traj, rank_tol);
  if (c.trajectory_span_dim <= std::max(traj.dims.n1, traj.dims.n2)) {
    c.verdict = Verdict::kExistsByLowDimension;
  } else if (c.numerical_rank == c.full_rank) {
    c.verdict = Verdict::kCertifiedNoDisentanglingTPS;
  } else {
    c.verdict = Verdict::kInconclusive;
  }
  return c;
}

}  // namespace mereology

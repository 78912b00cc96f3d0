#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mereology/detail/lbfgs.hpp"
#include "mereology/detail/parallel.hpp"
#include "mereology/entanglement.hpp"
#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

namespace mereology {

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 500;  // stage 1, per restart
  int polish_iterations = 200;  // stage 2, per annealing round
  std::uint64_t seed = 0;
  int time_samples = 200;
  /// Softmax temperatures of the polish stage, relative to the current hard max.
  std::vector<double> temperatures{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double convergence_tol = 1e-14;  // gradient norm
  unsigned threads = 0;

  void validate() const {
    if (restarts < 1) fail(ErrorKind::kInvalidArgument, "restarts must be >= 1");
    if (max_iterations < 1) fail(ErrorKind::kInvalidArgument, "max_iterations must be >= 1");
    if (polish_iterations < 1) fail(ErrorKind::kInvalidArgument, "polish_iterations must be >= 1");
    if (time_samples < 2) fail(ErrorKind::kInvalidArgument, "time_samples must be >= 2");
    if (!(convergence_tol > 0.0)) fail(ErrorKind::kInvalidArgument, "convergence_tol must be positive");
    for (double t : temperatures)
      if (!(t > 0.0)) fail(ErrorKind::kInvalidArgument, "temperatures must be positive");
  }
};

enum class OptimizerStage { kSurrogate, kPolish };

struct TracePoint {
  OptimizerStage stage = OptimizerStage::kSurrogate;
  int iteration = 0;
  double value = 0.0;  // surrogate in stage 1, hard max distance in stage 2
};

struct RestartSummary {
  int index = 0;
  double initial_objective = 0.0;
  double surrogate = 0.0;
  double objective = 0.0;  // hard max on the descent samples
  int iterations = 0;
};

struct OptimizationResult {
  TPSpec best_tps = TPSpec::identity(HilbertDims{});
  double objective = 0.0;  // max product_distance over the full trajectory grid
  int restart_index = 0;
  std::vector<TracePoint> surrogate_trace;
  std::vector<RestartSummary> restarts;
};

// ---------------------------------------------------------------------------
// Objectives in left-trivialized coordinates: U(s) = exp(sum_j s_j E_j) U with
// {E_j} an orthonormal basis of u(n). For phi = U psi with top Schmidt pair
// (u1, v1), sigma_1 = <chi, phi> with chi = u1 (x) conj(v1), hence
// d sigma_1 / d s_j = Re <chi, E_j phi>.

namespace detail {

struct SampleTerms {
  double sigma1 = 0.0;
  double tail = 0.0;
  VectorXcd phi;
  VectorXcd chi;
};

inline SampleTerms sample_terms(const MatrixXcd& u, const VectorXcd& psi, HilbertDims dims, bool need_vectors) {
  SampleTerms s;
  s.phi = u * psi;
  s.phi /= s.phi.norm();
  const CoefficientMatrix m = reshape_coefficients(s.phi, dims);
  if (!need_vectors) {
    Eigen::JacobiSVD<MatrixXcd> svd(m.entries);
    const VectorXd& sv = svd.singularValues();
    s.sigma1 = sv(0);
    s.tail = sv.tail(sv.size() - 1).squaredNorm();
    return s;
  }
  Eigen::JacobiSVD<MatrixXcd> svd(m.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  s.sigma1 = sv(0);
  s.tail = sv.tail(sv.size() - 1).squaredNorm();
  s.chi = kron(VectorXcd(svd.matrixU().col(0)), VectorXcd(svd.matrixV().col(0).conjugate()));
  return s;
}

/// grad_j = Re tr(E_j A) for A = sum_t c_t phi_t chi_t^dag, since
/// Re <chi, E_j phi> = Re tr(E_j phi chi^dag).
inline VectorXd project_gradient(const std::vector<MatrixXcd>& basis, const MatrixXcd& acc) {
  VectorXd g(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    g(static_cast<Eigen::Index>(j)) = (basis[j].cwiseProduct(acc.transpose())).sum().real();
  }
  return g;
}

inline double hard_max_distance(const MatrixXcd& u, const std::vector<VectorXcd>& states, HilbertDims dims) {
  double worst = 0.0;
  for (const auto& psi : states) {
    const SampleTerms s = sample_terms(u, psi, dims, false);
    worst = std::max(worst, std::sqrt(2.0 * s.tail / (1.0 + s.sigma1)));
  }
  return worst;
}

}  // namespace detail

/// mean_t (1 - sigma_1(t)^2), evaluated as the mean Schmidt tail weight. Fills
/// `grad` (left-trivialized, in the anti_hermitian_basis(n) frame) when given.
inline double surrogate_objective(const MatrixXcd& u, const std::vector<VectorXcd>& states, HilbertDims dims,
                                  VectorXd* grad = nullptr) {
  const int n = dims.n();
  const double scale = 1.0 / static_cast<double>(states.size());
  double value = 0.0;
  MatrixXcd acc = MatrixXcd::Zero(n, n);
  for (const auto& psi : states) {
    const detail::SampleTerms s = detail::sample_terms(u, psi, dims, grad != nullptr);
    value += scale * s.tail;
    if (grad) acc += (-2.0 * scale * s.sigma1) * s.phi * s.chi.adjoint();
  }
  if (grad) *grad = detail::project_gradient(anti_hermitian_basis(n), acc);
  return value;
}

/// tau log sum_t exp(d_t / tau), an upper bound on max_t d_t within tau log K.
inline double smooth_max_distance(const MatrixXcd& u, const std::vector<VectorXcd>& states, HilbertDims dims,
                                  double tau, VectorXd* grad = nullptr) {
  const int n = dims.n();
  std::vector<detail::SampleTerms> terms;
  terms.reserve(states.size());
  std::vector<double> d;
  d.reserve(states.size());
  for (const auto& psi : states) {
    terms.push_back(detail::sample_terms(u, psi, dims, grad != nullptr));
    d.push_back(std::sqrt(2.0 * terms.back().tail / (1.0 + terms.back().sigma1)));
  }
  const double top = *std::max_element(d.begin(), d.end());
  double z = 0.0;
  for (double x : d) z += std::exp((x - top) / tau);
  const double value = top + tau * std::log(z);
  if (grad) {
    MatrixXcd acc = MatrixXcd::Zero(n, n);
    for (std::size_t t = 0; t < d.size(); ++t) {
      if (!(d[t] > 1e-300)) continue;
      const double w = std::exp((d[t] - top) / tau) / z;
      // d(d_t) = -d(sigma_1) / d_t
      acc += (-w / d[t]) * terms[t].phi * terms[t].chi.adjoint();
    }
    *grad = detail::project_gradient(anti_hermitian_basis(n), acc);
  }
  return value;
}

namespace detail {

inline std::vector<VectorXcd> descent_samples(const SampledTrajectory& traj, int time_samples) {
  std::vector<VectorXcd> out;
  const std::size_t k = traj.size();
  const std::size_t m = std::min<std::size_t>(k, static_cast<std::size_t>(time_samples));
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t idx = m == 1 ? 0 : (i * (k - 1)) / (m - 1);
    out.push_back(traj.states[idx].amplitudes());
  }
  return out;
}

struct RestartOutcome {
  MatrixXcd u;
  RestartSummary summary;
  std::vector<TracePoint> trace;
};

inline RestartOutcome run_restart(const MatrixXcd& start, const std::vector<VectorXcd>& states, HilbertDims dims,
                                  const OptimizerConfig& config) {
  const auto basis = anti_hermitian_basis(dims.n());
  auto retract = [&](const MatrixXcd& u, const VectorXd& step) -> MatrixXcd {
    return expm_anti_hermitian(combine(basis, step)) * u;
  };
  RestartOutcome out;
  out.summary.initial_objective = hard_max_distance(start, states, dims);

  // Stage 1: smooth surrogate.
  LbfgsOptions opt;
  opt.max_iterations = config.max_iterations;
  opt.gradient_tol = config.convergence_tol;
  auto surrogate_eval = [&](const MatrixXcd& u, VectorXd& g) { return surrogate_objective(u, states, dims, &g); };
  out.trace.push_back({OptimizerStage::kSurrogate, 0, surrogate_objective(start, states, dims)});
  auto stage1 = minimize_lbfgs(start, surrogate_eval, retract, opt, [&](int it, const MatrixXcd&, double v) {
    out.trace.push_back({OptimizerStage::kSurrogate, it, v});
  });
  MatrixXcd u = stage1.point;
  out.summary.surrogate = stage1.value;
  out.summary.iterations = stage1.iterations;

  // Stage 2: annealed softmax polish; a round's best iterate is kept only if it
  // lowers the hard max, so the recorded hard objective never increases.
  double hard = hard_max_distance(u, states, dims);
  int polish_it = 0;
  out.trace.push_back({OptimizerStage::kPolish, polish_it, hard});
  LbfgsOptions popt;
  popt.max_iterations = config.polish_iterations;
  popt.gradient_tol = config.convergence_tol;
  for (double rel : config.temperatures) {
    if (!(hard > 0.0)) break;
    const double tau = rel * hard;
    MatrixXcd round_best = u;
    double round_hard = hard;
    auto eval = [&](const MatrixXcd& x, VectorXd& g) { return smooth_max_distance(x, states, dims, tau, &g); };
    auto res = minimize_lbfgs(u, eval, retract, popt, [&](int, const MatrixXcd& x, double) {
      const double h = hard_max_distance(x, states, dims);
      if (h < round_hard) {
        round_hard = h;
        round_best = x;
      }
    });
    out.summary.iterations += res.iterations;
    if (round_hard < hard) {
      u = round_best;
      hard = round_hard;
      out.trace.push_back({OptimizerStage::kPolish, ++polish_it, hard});
    }
  }
  out.summary.objective = hard;
  // Strip accumulated rounding so the result passes the unitarity check.
  Eigen::JacobiSVD<MatrixXcd> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.u = svd.matrixU() * svd.matrixV().adjoint();
  return out;
}

}  // namespace detail

/// Searches U(n) for the TPS minimizing max_t product_distance. Restart 0 starts
/// at the reference TPS, restart r > 0 at a Haar-random unitary seeded by
/// (seed, r). The winner is the lowest hard objective on the full grid, ties
/// broken by index, so the result does not depend on thread scheduling.
inline OptimizationResult optimize_tps(const SampledTrajectory& traj, const OptimizerConfig& config = {}) {
  config.validate();
  validate(traj);
  const HilbertDims dims = traj.dims;
  const int n = dims.n();
  const std::vector<VectorXcd> states = detail::descent_samples(traj, config.time_samples);
  const auto restarts = static_cast<std::size_t>(config.restarts);
  std::vector<detail::RestartOutcome> outcomes(restarts);
  std::vector<double> full_objective(restarts, std::numeric_limits<double>::infinity());
  detail::parallel_for(0, restarts, config.threads, [&](std::size_t r) {
    MatrixXcd start = MatrixXcd::Identity(n, n);
    if (r > 0) {
      std::mt19937_64 rng(mix_seed(config.seed, r));
      start = random_unitary(n, rng);
    }
    outcomes[r] = detail::run_restart(start, states, dims, config);
    outcomes[r].summary.index = static_cast<int>(r);
    full_objective[r] = entanglement_profile(traj, make_tps(outcomes[r].u, dims)).max_distance;
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r)
    if (full_objective[r] < full_objective[best]) best = r;
  OptimizationResult result;
  result.best_tps = make_tps(outcomes[best].u, dims);
  result.objective = full_objective[best];
  result.restart_index = static_cast<int>(best);
  result.surrogate_trace = outcomes[best].trace;
  for (const auto& o : outcomes) result.restarts.push_back(o.summary);
  return result;
}

}  // namespace mereology

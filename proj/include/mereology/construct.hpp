#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mereology/detail/levenberg_marquardt.hpp"
#include "mereology/detail/parallel.hpp"
#include "mereology/entanglement.hpp"
#include "mereology/errors.hpp"
#include "mereology/linalg.hpp"
#include "mereology/obstruction.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

namespace mereology {

// ---------------------------------------------------------------------------
// Root pairings. With rebased components P_1..P_4 on (|00>,|01>,|10>,|11>), the
// state is a product for all t iff [[P1,P2],[P3,P4]] has rank one, i.e.
// P1 P4 = P2 P3. Writing P_i = kappa_i (X - r)(X - s), the intertwined patterns
// share one root between rows and one between columns; the leading coefficients
// must then satisfy kappa_1 kappa_4 = kappa_2 kappa_3.

/// Root labels a, b, c, d are indices 0..3.
struct RootPattern {
  std::string_view name;
  std::array<std::array<int, 2>, 4> roots;  // roots carried by P_1..P_4
};

inline constexpr std::array<RootPattern, 3> kIntertwinedPatterns{{
    {"AC,AD,BC,BD", {{{0, 2}, {0, 3}, {1, 2}, {1, 3}}}},
    {"AC,AB,CD,BD", {{{0, 2}, {0, 1}, {2, 3}, {1, 3}}}},
    {"AC,BC,AD,BD", {{{0, 2}, {1, 2}, {0, 3}, {1, 3}}}},
}};

inline constexpr double kMinLeadingCoeff = 1e-6;

struct RootPairing {
  std::array<cplx, 4> kappa{};  // leading coefficients of P_1..P_4
  std::array<cplx, 4> roots{};  // lambda_a, lambda_b, lambda_c, lambda_d
  int pattern = 0;              // index into kIntertwinedPatterns

  /// Coefficients (X^2, X, 1) of P_i implied by the pairing.
  std::array<cplx, 3> poly(int i) const {
    const auto& idx = kIntertwinedPatterns[static_cast<std::size_t>(pattern)].roots[static_cast<std::size_t>(i)];
    const cplx r = roots[static_cast<std::size_t>(idx[0])];
    const cplx s = roots[static_cast<std::size_t>(idx[1])];
    const cplx k = kappa[static_cast<std::size_t>(i)];
    return {k, -k * (r + s), k * r * s};
  }

  /// kappa_1 kappa_4 - kappa_2 kappa_3.
  cplx leading_constraint() const { return kappa[0] * kappa[3] - kappa[1] * kappa[2]; }

  VectorXd pack() const {
    VectorXd x(16);
    for (int i = 0; i < 4; ++i) {
      x(2 * i) = kappa[static_cast<std::size_t>(i)].real();
      x(2 * i + 1) = kappa[static_cast<std::size_t>(i)].imag();
      x(8 + 2 * i) = roots[static_cast<std::size_t>(i)].real();
      x(8 + 2 * i + 1) = roots[static_cast<std::size_t>(i)].imag();
    }
    return x;
  }

  static RootPairing unpack(const VectorXd& x, int pattern) {
    RootPairing p;
    p.pattern = pattern;
    for (std::size_t i = 0; i < 4; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      p.kappa[i] = cplx(x(2 * k), x(2 * k + 1));
      p.roots[i] = cplx(x(8 + 2 * k), x(8 + 2 * k + 1));
    }
    return p;
  }
};

struct ConstructConfig {
  int restarts = 64;
  double residual_bound = 1e-9;
  std::uint64_t seed = 0;
  std::optional<RootPairing> initial_guess;  // tried as restart 0 when present
  int verify_samples = 100;
  double verify_tol = 1e-8;
  unsigned threads = 0;

  void validate() const {
    if (restarts < 1) fail(ErrorKind::kInvalidArgument, "restarts must be >= 1");
    if (!(residual_bound > 0.0)) fail(ErrorKind::kInvalidArgument, "residual bound must be positive");
    if (verify_samples < 2) fail(ErrorKind::kInvalidArgument, "verify_samples must be >= 2");
    if (!(verify_tol > 0.0)) fail(ErrorKind::kInvalidArgument, "verify_tol must be positive");
  }
};

struct VerificationReport {
  double max_minor_modulus = 0.0;
  double max_sigma2 = 0.0;
  bool pass = false;
};

/// Rebases every sample; passes iff every sample is a product state at `tol`
/// (all minors and sigma_2 below tol).
inline VerificationReport verify_disentangler(const TPSpec& tps, const SampledTrajectory& traj, double tol) {
  require_same_dims(tps.dims(), traj.dims, "verify_disentangler");
  const EntanglementProfile p = entanglement_profile(traj, tps);
  return {p.max_minor_modulus, p.max_sigma2, p.max_minor_modulus < tol && p.max_sigma2 < tol};
}

enum class ConstructStatus { kFound, kNotFound };
enum class ConstructStage { kReference, kLowDimension, kPolynomial, kNone };

inline std::string_view to_string(ConstructStatus s) { return s == ConstructStatus::kFound ? "Found" : "NotFound"; }

inline std::string_view to_string(ConstructStage s) {
  switch (s) {
    case ConstructStage::kReference: return "reference";
    case ConstructStage::kLowDimension: return "low_dimension";
    case ConstructStage::kPolynomial: return "polynomial";
    case ConstructStage::kNone: return "none";
  }
  return "none";
}

struct ConstructionResult {
  ConstructStatus status = ConstructStatus::kNotFound;
  ConstructStage stage = ConstructStage::kNone;
  std::optional<TPSpec> tps;
  std::optional<RootPairing> pairing;
  int restart = -1;
  int restarts_run = 0;
  double orthonormality_residual = std::numeric_limits<double>::infinity();  // |W^dag W - V^dag V|_F
  double unitarity_deviation = std::numeric_limits<double>::infinity();
  VerificationReport verification;
  std::array<cplx, 5> factorization{};  // coefficients of P1 P4 - P2 P3 for the returned U
  int span_dim = 0;
  MatrixXcd span_basis;  // orthonormal basis of span{Psi(t)}
  std::vector<std::string> diagnostics;

  bool found() const { return status == ConstructStatus::kFound; }
};

namespace detail {

/// V = [(beta - i gamma)/2, alpha, (beta + i gamma)/2], so that
/// Psi(t) = e^{-it} V (z^2, z, 1)^T with z = e^{it}.
inline MatrixXcd coefficient_columns(const TrigTrajectory& traj) {
  const auto [alpha, beta, gamma] = trig_coefficients(traj);
  MatrixXcd v(traj.dims.n(), 3);
  v.col(0) = (beta - kI * gamma) / 2.0;
  v.col(1) = alpha;
  v.col(2) = (beta + kI * gamma) / 2.0;
  return v;
}

inline MatrixXcd pairing_rows(const RootPairing& p) {
  MatrixXcd w(4, 3);
  for (int i = 0; i < 4; ++i) {
    const auto c = p.poly(i);
    for (int j = 0; j < 3; ++j) w(i, j) = c[static_cast<std::size_t>(j)];
  }
  return w;
}

/// Residual of the reduced system: Gram matching (9 reals), the leading
/// coefficient constraint (2 reals), the degree-2 guard (4 reals).
inline VectorXd pairing_residual(const VectorXd& x, int pattern, const MatrixXcd& target_gram) {
  const RootPairing p = RootPairing::unpack(x, pattern);
  const MatrixXcd w = pairing_rows(p);
  const MatrixXcd d = w.adjoint() * w - target_gram;
  VectorXd r(15);
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    r(k++) = d(i, i).real();
    for (int j = i + 1; j < 3; ++j) {
      r(k++) = std::sqrt(2.0) * d(i, j).real();
      r(k++) = std::sqrt(2.0) * d(i, j).imag();
    }
  }
  const cplx lead = p.leading_constraint();
  r(k++) = lead.real();
  r(k++) = lead.imag();
  for (std::size_t i = 0; i < 4; ++i) r(k++) = std::max(0.0, kMinLeadingCoeff - std::abs(p.kappa[i]));
  return r;
}

inline double gram_mismatch(const RootPairing& p, const MatrixXcd& target_gram) {
  const MatrixXcd w = pairing_rows(p);
  return (w.adjoint() * w - target_gram).norm();
}

/// Unitary U with U V = W on the column space of V (orthogonal Procrustes).
inline MatrixXcd procrustes(const MatrixXcd& w, const MatrixXcd& v) {
  Eigen::JacobiSVD<MatrixXcd> svd(w * v.adjoint(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline std::array<cplx, 5> product_condition(const PolynomialSystem& sys) {
  auto mul = [](const QuadraticPoly& a, const QuadraticPoly& b) {
    std::array<cplx, 5> c{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(i + j)] += a.coeffs[static_cast<std::size_t>(i)] * b.coeffs[static_cast<std::size_t>(j)];
    return c;
  };
  const auto lhs = mul(sys.polys[0], sys.polys[3]);
  const auto rhs = mul(sys.polys[1], sys.polys[2]);
  std::array<cplx, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) out[i] = lhs[i] - rhs[i];
  return out;
}

template <class Rng>
RootPairing random_pairing(int pattern, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RootPairing p;
  p.pattern = pattern;
  for (auto& k : p.kappa) k = 0.3 * cplx(normal(rng), normal(rng));
  for (auto& r : p.roots) r = cplx(normal(rng), normal(rng));
  return p;
}

}  // namespace detail

/// Coefficients of P1 P4 - P2 P3 (degree 4, highest power first) for `tps`.
inline std::array<cplx, 5> factorization_residual(const TrigTrajectory& traj, const TPSpec& tps) {
  return detail::product_condition(trig_to_polynomials(traj, tps));
}

/// Builds a disentangling TPS for a two-qubit frequency-1 trigonometric
/// trajectory. Stages: (0) the reference TPS already disentangles; (1) the span
/// of the trajectory has dimension <= max(n1, n2) and is mapped onto
/// C^{n1} (x) |0>; (2) restarted local solves of the root-pairing system over the
/// intertwined patterns, then Procrustes for U on the span and the canonical
/// completion on its complement. NotFound is not a proof of non-existence.
inline ConstructionResult construct_disentangler(const TrigTrajectory& traj, const ConstructConfig& config = {}) {
  config.validate();
  validate(traj);
  require_single_frequency(traj);
  const HilbertDims dims = traj.dims;
  const int n = dims.n();
  const SampledTrajectory grid = sample_trig(traj, config.verify_samples);
  const MatrixXcd v = detail::coefficient_columns(traj);

  ConstructionResult result;
  const SubspaceSplit split = split_column_space(v, 1e-10);
  result.span_basis = split.span;
  result.span_dim = static_cast<int>(split.span.cols());

  auto finish = [&](const MatrixXcd& u, ConstructStage stage) {
    const TPSpec tps = make_tps(u, dims);
    result.verification = verify_disentangler(tps, grid, config.verify_tol);
    result.factorization = factorization_residual(traj, tps);
    result.unitarity_deviation = unitarity_deviation(u);
    result.stage = stage;
    result.tps = tps;
    result.status = result.verification.pass ? ConstructStatus::kFound : ConstructStatus::kNotFound;
    return result;
  };

  // (0) reference TPS
  const TPSpec reference = TPSpec::identity(dims);
  if (verify_disentangler(reference, grid, config.verify_tol).pass) {
    result.orthonormality_residual = 0.0;
    return finish(MatrixXcd::Identity(n, n), ConstructStage::kReference);
  }

  // (1) low-dimensional span: map its basis onto |k> (x) |0> (or |0> (x) |k>).
  if (result.span_dim <= std::max(dims.n1, dims.n2)) {
    const bool first = result.span_dim <= dims.n1;
    MatrixXcd targets = MatrixXcd::Zero(n, n);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int k = 0; k < result.span_dim; ++k) {
      const int f = first ? dims.index(k, 0) : dims.index(0, k);
      targets(f, k) = 1.0;
      used[static_cast<std::size_t>(f)] = true;
    }
    int col = result.span_dim;
    for (int f = 0; f < n; ++f)
      if (!used[static_cast<std::size_t>(f)]) targets(f, col++) = 1.0;
    MatrixXcd source(n, n);
    source << split.span, split.complement;
    result.orthonormality_residual = 0.0;
    return finish(targets * source.adjoint(), ConstructStage::kLowDimension);
  }

  // (2) root-pairing solve.
  const MatrixXcd target_gram = v.adjoint() * v;
  struct Attempt {
    bool ok = false;
    RootPairing pairing;
    double mismatch = std::numeric_limits<double>::infinity();
    bool degenerate = false;
  };
  const auto restarts = static_cast<std::size_t>(config.restarts);
  std::vector<Attempt> attempts(restarts);
  std::vector<char> ran(restarts, 0);
  std::atomic<std::size_t> first_success{restarts};
  detail::LmOptions lm;
  lm.residual_tol = 1e-14;
  detail::parallel_for(0, restarts, config.threads, [&](std::size_t r) {
    if (r > first_success.load()) return;
    ran[r] = 1;
    const int pattern = static_cast<int>(r % kIntertwinedPatterns.size());
    std::mt19937_64 rng(mix_seed(config.seed, r));
    RootPairing start = detail::random_pairing(pattern, rng);
    if (r == 0 && config.initial_guess) start = *config.initial_guess;
    auto residual = [&](const VectorXd& x) { return detail::pairing_residual(x, start.pattern, target_gram); };
    const detail::LmResult sol = detail::levenberg_marquardt(residual, start.pack(), lm);
    Attempt a;
    a.pairing = RootPairing::unpack(sol.x, start.pattern);
    a.mismatch = detail::gram_mismatch(a.pairing, target_gram);
    for (const cplx k : a.pairing.kappa) a.degenerate = a.degenerate || std::abs(k) <= kMinLeadingCoeff;
    a.ok = sol.residual_norm <= config.residual_bound && !a.degenerate;
    attempts[r] = a;
    if (a.ok) {
      std::size_t cur = first_success.load();
      while (r < cur && !first_success.compare_exchange_weak(cur, r)) {
      }
    }
  });
  for (char c : ran) result.restarts_run += c;

  // Lowest successful index; every index below it was run, so this does not
  // depend on the schedule.
  std::size_t winner = restarts;
  for (std::size_t r = 0; r < restarts; ++r) {
    if (ran[r] && attempts[r].ok) {
      winner = r;
      break;
    }
  }
  if (winner == restarts) {
    double best = std::numeric_limits<double>::infinity();
    int degenerate = 0;
    for (std::size_t r = 0; r < restarts; ++r) {
      best = std::min(best, attempts[r].mismatch);
      degenerate += attempts[r].degenerate ? 1 : 0;
    }
    result.orthonormality_residual = best;
    result.diagnostics.push_back("no restart reached residual bound " + std::to_string(config.residual_bound) +
                                 "; smallest Gram mismatch " + std::to_string(best));
    if (degenerate > 0) {
      result.diagnostics.push_back(std::to_string(degenerate) +
                                   " restarts converged to a leading coefficient below 1e-6 (degree drop)");
    }
    return result;
  }

  const Attempt& a = attempts[winner];
  result.restart = static_cast<int>(winner);
  result.pairing = a.pairing;
  result.orthonormality_residual = a.mismatch;
  MatrixXcd u = detail::procrustes(detail::pairing_rows(a.pairing), v);
  if (split.complement.cols() > 0) u = canonical_completion(u, split.complement, dims);
  // Re-orthonormalize away the last few ulps so make_tps accepts it.
  Eigen::JacobiSVD<MatrixXcd> polish(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  u = polish.matrixU() * polish.matrixV().adjoint();
  finish(u, ConstructStage::kPolynomial);
  if (!result.verification.pass) {
    result.diagnostics.push_back("pairing solved but verification failed: max sigma2 " +
                                 std::to_string(result.verification.max_sigma2));
  }
  return result;
}

}  // namespace mereology

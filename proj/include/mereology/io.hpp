#pragma once

#include <json.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mereology/construct.hpp"
#include "mereology/entanglement.hpp"
#include "mereology/errors.hpp"
#include "mereology/hamiltonian.hpp"
#include "mereology/linalg.hpp"
#include "mereology/obstruction.hpp"
#include "mereology/optimizer.hpp"
#include "mereology/tps.hpp"
#include "mereology/trajectory.hpp"

// Wire format: complex numbers are [re, im], vectors are arrays of complex
// numbers, matrices are row-major arrays of rows. Parse errors name the JSON
// path of the offending value, e.g. "$.trig.harmonics[0].cos[2]".
namespace mereology::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Parsing

[[noreturn]] inline void parse_fail(const std::string& path, const std::string& msg) {
  fail(ErrorKind::kParse, path + ": " + msg);
}

inline std::string field_path(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& require_field(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) parse_fail(field_path(path, key), "missing required field");
  return *it;
}

inline double parse_real(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

inline int parse_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer");
  return j.get<int>();
}

inline cplx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) parse_fail(path, "expected a complex number [re, im]");
  return {parse_real(j[0], index_path(path, 0)), parse_real(j[1], index_path(path, 1))};
}

inline VectorXcd parse_complex_vector(const json& j, const std::string& path, std::optional<int> length = {}) {
  if (!j.is_array()) parse_fail(path, "expected an array of complex numbers");
  if (length && static_cast<int>(j.size()) != *length) {
    fail(ErrorKind::kDimensionMismatch,
         path + ": expected " + std::to_string(*length) + " entries, got " + std::to_string(j.size()));
  }
  VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], index_path(path, i));
  return v;
}

inline MatrixXcd parse_complex_matrix(const json& j, const std::string& path, std::optional<int> size = {}) {
  if (!j.is_array() || j.empty()) parse_fail(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) parse_fail(index_path(path, 0), "expected a row array");
  const std::size_t cols = j[0].size();
  if (size && (static_cast<int>(rows) != *size || static_cast<int>(cols) != *size)) {
    fail(ErrorKind::kDimensionMismatch, path + ": expected " + std::to_string(*size) + "x" + std::to_string(*size) +
                                            ", got " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  MatrixXcd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = index_path(path, r);
    if (!j[r].is_array()) parse_fail(rp, "expected a row array");
    if (j[r].size() != cols) fail(ErrorKind::kDimensionMismatch, rp + ": ragged row");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c], index_path(rp, c));
    }
  }
  return m;
}

inline HilbertDims parse_dims(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) parse_fail(path, "expected [n1, n2]");
  const int n1 = parse_int(j[0], index_path(path, 0));
  const int n2 = parse_int(j[1], index_path(path, 1));
  return HilbertDims::make(n1, n2);
}

/// Accepts vectors within the trajectory tolerance of unit norm and rescales them.
inline StateVector parse_state(const json& j, const std::string& path, HilbertDims dims) {
  const VectorXcd v = parse_complex_vector(j, path, dims.n());
  const double dev = std::abs(v.norm() - 1.0);
  if (dev > kTrajectoryNormTolerance) {
    fail(ErrorKind::kNotNormalizable, path + ": norm deviates from 1 by " + std::to_string(dev));
  }
  return StateVector::normalized(v, dims);
}

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParse, source + ": $: malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParse, path + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

/// A trajectory file in any of the three forms.
struct TrajectoryInput {
  std::string form;
  HilbertDims dims;
  std::optional<TrigTrajectory> trig;
  std::optional<HamiltonianTrajectory> hamiltonian;
  std::optional<SampledTrajectory> samples;

  /// Uniform samples for trig/hamiltonian forms; the stored grid otherwise.
  SampledTrajectory sample(int num_samples) const {
    if (trig) return sample_trig(*trig, num_samples);
    if (hamiltonian) return evolve_under_hamiltonian(*hamiltonian, num_samples);
    return *samples;
  }
};

inline TrigTrajectory parse_trig(const json& j, const std::string& path, HilbertDims dims) {
  TrigTrajectory t;
  t.dims = dims;
  t.constant = parse_complex_vector(require_field(j, path, "constant"), field_path(path, "constant"), dims.n());
  const std::string hp = field_path(path, "harmonics");
  const json& hs = require_field(j, path, "harmonics");
  if (!hs.is_array()) parse_fail(hp, "expected an array");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const std::string p = index_path(hp, i);
    Harmonic h;
    h.frequency = parse_int(require_field(hs[i], p, "freq"), field_path(p, "freq"));
    h.cos_coeffs = parse_complex_vector(require_field(hs[i], p, "cos"), field_path(p, "cos"), dims.n());
    h.sin_coeffs = parse_complex_vector(require_field(hs[i], p, "sin"), field_path(p, "sin"), dims.n());
    t.harmonics.push_back(std::move(h));
  }
  t.t_max = parse_real(require_field(j, path, "t_max"), field_path(path, "t_max"));
  validate(t);
  return t;
}

inline TrajectoryInput parse_trajectory(const json& root) {
  const std::string path = "$";
  TrajectoryInput in;
  in.dims = parse_dims(require_field(root, path, "dims"), "$.dims");
  const json& form = require_field(root, path, "form");
  if (!form.is_string()) parse_fail("$.form", "expected a string");
  in.form = form.get<std::string>();
  if (in.form == "trig") {
    in.trig = parse_trig(require_field(root, path, "trig"), "$.trig", in.dims);
  } else if (in.form == "hamiltonian") {
    const std::string hp = "$.hamiltonian";
    const json& h = require_field(root, path, "hamiltonian");
    const MatrixXcd m = parse_complex_matrix(require_field(h, hp, "matrix"), field_path(hp, "matrix"), in.dims.n());
    require_hermitian(m, kHermitianTolerance, "$.hamiltonian.matrix");
    const StateVector init = parse_state(require_field(h, hp, "initial"), field_path(hp, "initial"), in.dims);
    const double t_max = parse_real(require_field(h, hp, "t_max"), field_path(hp, "t_max"));
    if (!(t_max > 0.0)) fail(ErrorKind::kInvalidArgument, "$.hamiltonian.t_max must be positive");
    in.hamiltonian = HamiltonianTrajectory{in.dims, m, init, t_max};
  } else if (in.form == "samples") {
    const std::string sp = "$.samples";
    const json& s = require_field(root, path, "samples");
    const json& times = require_field(s, sp, "times");
    const json& states = require_field(s, sp, "states");
    if (!times.is_array()) parse_fail(field_path(sp, "times"), "expected an array");
    if (!states.is_array()) parse_fail(field_path(sp, "states"), "expected an array");
    SampledTrajectory traj{in.dims, {}, {}};
    for (std::size_t i = 0; i < times.size(); ++i) traj.times.push_back(parse_real(times[i], index_path(field_path(sp, "times"), i)));
    for (std::size_t i = 0; i < states.size(); ++i) {
      traj.states.push_back(parse_state(states[i], index_path(field_path(sp, "states"), i), in.dims));
    }
    validate(traj);
    in.samples = std::move(traj);
  } else {
    parse_fail("$.form", "unknown form '" + in.form + "' (expected trig, hamiltonian or samples)");
  }
  return in;
}

struct OperatorInput {
  HilbertDims dims;
  MatrixXcd matrix;
};

inline OperatorInput parse_operator(const json& root) {
  OperatorInput op;
  op.dims = parse_dims(require_field(root, "$", "dims"), "$.dims");
  op.matrix = parse_complex_matrix(require_field(root, "$", "matrix"), "$.matrix");
  if (op.matrix.rows() != op.matrix.cols()) fail(ErrorKind::kDimensionMismatch, "$.matrix: not square");
  return op;
}

inline TPSpec parse_tps(const json& root) {
  const HilbertDims dims = parse_dims(require_field(root, "$", "dims"), "$.dims");
  const MatrixXcd u = parse_complex_matrix(require_field(root, "$", "unitary"), "$.unitary");
  return make_tps(u, dims);
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json to_json(const MatrixXcd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json to_json(HilbertDims d) { return json::array({d.n1, d.n2}); }

inline json trajectory_json(const TrigTrajectory& t) {
  json harmonics = json::array();
  for (const auto& h : t.harmonics) {
    harmonics.push_back({{"freq", h.frequency}, {"cos", to_json(h.cos_coeffs)}, {"sin", to_json(h.sin_coeffs)}});
  }
  return {{"dims", to_json(t.dims)},
          {"form", "trig"},
          {"trig", {{"constant", to_json(t.constant)}, {"harmonics", harmonics}, {"t_max", t.t_max}}}};
}

inline json trajectory_json(const HamiltonianTrajectory& t) {
  return {{"dims", to_json(t.dims)},
          {"form", "hamiltonian"},
          {"hamiltonian",
           {{"matrix", to_json(t.hamiltonian)}, {"initial", to_json(t.initial.amplitudes())}, {"t_max", t.t_max}}}};
}

inline json trajectory_json(const SampledTrajectory& t) {
  json states = json::array();
  for (const auto& s : t.states) states.push_back(to_json(s.amplitudes()));
  return {{"dims", to_json(t.dims)}, {"form", "samples"}, {"samples", {{"times", t.times}, {"states", states}}}};
}

inline json operator_json(const MatrixXcd& h, HilbertDims dims) {
  return {{"dims", to_json(dims)}, {"matrix", to_json(h)}};
}

inline json tps_json(const TPSpec& t) { return {{"dims", to_json(t.dims())}, {"unitary", to_json(t.basis_change())}}; }

inline json profile_json(const EntanglementProfile& p) {
  return {{"max_entropy", p.max_entropy},
          {"max_distance", p.max_distance},
          {"max_sigma2", p.max_sigma2},
          {"max_minor_modulus", p.max_minor_modulus},
          {"distance", "chordal sqrt(2 - 2 sigma_1)"},
          {"times", p.times},
          {"entropy", p.entropy},
          {"product_distance", p.product_distance}};
}

inline json certificate_json(const Certificate& c) {
  return {{"verdict", std::string(to_string(c.verdict))},
          {"numerical_rank", c.numerical_rank},
          {"full_rank", c.full_rank},
          {"min_max_eig_ratio", c.min_max_eig_ratio},
          {"trajectory_span_dim", c.trajectory_span_dim},
          {"rank_tol", c.rank_tol},
          {"quadrature_nodes", c.quadrature_nodes},
          {"gram_eigenvalues", to_json(c.eigenvalues)}};
}

inline json pairing_json(const RootPairing& p) {
  json kappa = json::array();
  json roots = json::array();
  for (const cplx k : p.kappa) kappa.push_back(to_json(k));
  for (const cplx r : p.roots) roots.push_back(to_json(r));
  return {{"pattern", std::string(kIntertwinedPatterns[static_cast<std::size_t>(p.pattern)].name)},
          {"kappa", kappa},
          {"kappa_convention", "component = e^{-it} P_i(e^{it})"},
          {"roots", roots},
          {"leading_constraint", to_json(p.leading_constraint())}};
}

inline json construction_json(const ConstructionResult& r) {
  json out = {{"status", std::string(to_string(r.status))},
              {"stage", std::string(to_string(r.stage))},
              {"restart", r.restart},
              {"restarts_run", r.restarts_run},
              {"span_dim", r.span_dim},
              {"orthonormality_residual", r.orthonormality_residual},
              {"diagnostics", r.diagnostics}};
  if (r.tps) {
    json fac = json::array();
    for (const cplx c : r.factorization) fac.push_back(to_json(c));
    out["unitary"] = to_json(r.tps->basis_change());
    out["unitarity_deviation"] = r.unitarity_deviation;
    out["verification"] = {{"max_minor_modulus", r.verification.max_minor_modulus},
                           {"max_sigma2", r.verification.max_sigma2},
                           {"pass", r.verification.pass}};
    out["factorization_residual"] = fac;
  }
  if (r.pairing) out["pairing"] = pairing_json(*r.pairing);
  return out;
}

inline json decomposition_json(const SeparableDecomposition& d, double gradient) {
  return {{"h1", to_json(d.h1)},
          {"h2", to_json(d.h2)},
          {"trace_part", d.trace_part},
          {"interaction_norm", d.interaction_norm},
          {"stationarity_gradient", gradient},
          {"interaction", to_json(d.interaction)}};
}

inline json optimization_json(const OptimizationResult& r) {
  json restarts = json::array();
  for (const auto& s : r.restarts) {
    restarts.push_back({{"index", s.index},
                        {"initial_objective", s.initial_objective},
                        {"surrogate", s.surrogate},
                        {"objective", s.objective},
                        {"iterations", s.iterations}});
  }
  json trace = json::array();
  for (const auto& p : r.surrogate_trace) {
    trace.push_back({{"stage", p.stage == OptimizerStage::kSurrogate ? "surrogate" : "polish"},
                     {"iteration", p.iteration},
                     {"value", p.value}});
  }
  return {{"objective", r.objective},
          {"restart_index", r.restart_index},
          {"unitary", to_json(r.best_tps.basis_change())},
          {"restarts", restarts},
          {"trace", trace}};
}

// ---------------------------------------------------------------------------
// Report envelope

inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline json versions_json() {
  return {{"mereology", kLibraryVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

/// `parameters` must hold everything needed to re-run the command.
inline json make_report(const std::string& command, const json& inputs, const json& parameters, const json& results,
                        double wall_time_seconds) {
  return {{"command", command},
          {"inputs", inputs},
          {"parameters", parameters},
          {"results", results},
          {"versions", versions_json()},
          {"wall_time_seconds", wall_time_seconds}};
}

}  // namespace mereology::io

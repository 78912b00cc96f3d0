// Command-line front end. Every subcommand turns its flags into a JSON
// parameter block and runs through `execute`, so a report can be replayed from
// its own "parameters" field.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "mereology/acceptance.hpp"
#include "mereology/io.hpp"
#include "mereology/mereology.hpp"

namespace {

using mereology::ErrorKind;
using mereology::io::json;

enum ExitCode : int {
  kOk = 0,
  kCheckFailure = 1,
  kInputError = 2,
  kValidityError = 3,
  kUnsupported = 4,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kInvalidArgument:
      return kInputError;
    case ErrorKind::kUnsupportedForm:
      return kUnsupported;
    case ErrorKind::kNotUnitary:
    case ErrorKind::kDimensionMismatch:
    case ErrorKind::kNotNormalizable:
    case ErrorKind::kNotHermitian:
    case ErrorKind::kTooFewSamples:
      return kValidityError;
  }
  return kInputError;
}

struct Outcome {
  json inputs = json::object();
  json results = json::object();
  int exit_code = kOk;
  std::string csv;  // profile only
};

template <class T>
T param(const json& p, const char* key) {
  const auto it = p.find(key);
  if (it == p.end()) mereology::fail(ErrorKind::kInvalidArgument, std::string("missing parameter ") + key);
  return it->get<T>();
}

void record_input(Outcome& out, const std::string& path) {
  out.inputs[path] = mereology::io::fnv1a64(mereology::io::read_file(path));
}

mereology::TPSpec load_tps(Outcome& out, const std::string& spec, mereology::HilbertDims dims) {
  if (spec == "identity") return mereology::TPSpec::identity(dims);
  record_input(out, spec);
  const mereology::TPSpec tps = mereology::io::parse_tps(mereology::io::load_json(spec));
  mereology::require_same_dims(tps.dims(), dims, "--tps");
  return tps;
}

mereology::io::TrajectoryInput load_trajectory(Outcome& out, const std::string& path) {
  record_input(out, path);
  return mereology::io::parse_trajectory(mereology::io::load_json(path));
}

Outcome run_profile(const json& p) {
  Outcome out;
  const auto traj = load_trajectory(out, param<std::string>(p, "input"));
  const auto tps = load_tps(out, param<std::string>(p, "tps"), traj.dims);
  const auto profile = mereology::entanglement_profile(traj.sample(param<int>(p, "samples")), tps);
  out.results = mereology::io::profile_json(profile);
  std::ostringstream csv;
  mereology::write_profile_csv(csv, profile);
  out.csv = csv.str();
  return out;
}

Outcome run_certify(const json& p) {
  Outcome out;
  const auto traj = load_trajectory(out, param<std::string>(p, "input"));
  const auto cert = mereology::certify_no_disentangling(traj.sample(param<int>(p, "samples")), param<double>(p, "rank_tol"));
  out.results = mereology::io::certificate_json(cert);
  return out;
}

Outcome run_construct(const json& p) {
  Outcome out;
  const auto traj = load_trajectory(out, param<std::string>(p, "input"));
  if (!traj.trig) {
    mereology::fail(ErrorKind::kUnsupportedForm, "construct needs a trig trajectory, got form '" + traj.form + "'");
  }
  mereology::ConstructConfig config;
  config.seed = param<std::uint64_t>(p, "seed");
  config.restarts = param<int>(p, "restarts");
  config.verify_tol = param<double>(p, "tol");
  config.verify_samples = param<int>(p, "samples");
  const auto result = mereology::construct_disentangler(*traj.trig, config);
  out.results = mereology::io::construction_json(result);
  return out;
}

Outcome run_hamiltonian(const json& p) {
  Outcome out;
  const std::string input = param<std::string>(p, "input");
  record_input(out, input);
  const auto op = mereology::io::parse_operator(mereology::io::load_json(input));
  mereology::HilbertDims dims = op.dims;
  if (p.contains("dims") && !p["dims"].is_null()) {
    dims = mereology::HilbertDims::make(p["dims"][0].get<int>(), p["dims"][1].get<int>());
  }
  mereology::require_operator(op.matrix, dims, "$.matrix");
  const auto tps = load_tps(out, param<std::string>(p, "tps"), dims);
  const auto rebased = mereology::rebase_operator(tps, op.matrix);
  const auto decomposition = mereology::separable_projection(rebased, dims);
  out.results = mereology::io::decomposition_json(decomposition, mereology::stationarity_gradient(rebased, dims));
  out.results["rebased_operator"] = mereology::io::to_json(rebased);
  out.results["reference_basis"] = {
      {"interaction_norm", mereology::interaction_norm(op.matrix, dims)},
      {"stationarity_gradient", mereology::stationarity_gradient(op.matrix, dims)}};
  return out;
}

Outcome run_optimize(const json& p) {
  Outcome out;
  const auto traj = load_trajectory(out, param<std::string>(p, "input"));
  mereology::OptimizerConfig config;
  config.seed = param<std::uint64_t>(p, "seed");
  config.restarts = param<int>(p, "restarts");
  config.max_iterations = param<int>(p, "max_iterations");
  config.time_samples = param<int>(p, "time_samples");
  const auto result = mereology::optimize_tps(traj.sample(param<int>(p, "samples")), config);
  out.results = mereology::io::optimization_json(result);
  return out;
}

Outcome run_reproduce(const json& p) {
  Outcome out;
  namespace acc = mereology::acceptance;
  acc::Options opt;
  opt.perturb_u = param<double>(p, "perturb_u");
  opt.seed = param<std::uint64_t>(p, "seed");
  json checks = json::array();
  bool all = true;
  for (const auto& check : acc::checks()) {
    const auto r = acc::run(check, opt);
    std::cerr << acc::summary_line(r) << '\n';
    all = all && r.pass;
    checks.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"details", r.details}});
  }
  out.results = {{"all_pass", all}, {"checks", checks}};
  out.exit_code = all ? kOk : kCheckFailure;
  return out;
}

Outcome execute(const std::string& command, const json& p) {
  if (command == "profile") return run_profile(p);
  if (command == "certify") return run_certify(p);
  if (command == "construct") return run_construct(p);
  if (command == "hamiltonian") return run_hamiltonian(p);
  if (command == "optimize") return run_optimize(p);
  if (command == "reproduce") return run_reproduce(p);
  mereology::fail(ErrorKind::kInvalidArgument, "unknown command '" + command + "'");
}

// Check details can carry time-budget flags, so only verdicts are compared.
json comparable(json results) {
  if (results.contains("checks")) {
    for (auto& c : results["checks"]) c.erase("details");
  }
  return results;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(output, std::ios::binary);
  if (!os) mereology::fail(ErrorKind::kInvalidArgument, "cannot write " + output);
  os << text;
}

int run_command(const std::string& command, const json& params, const std::string& format, const std::string& output) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = execute(command, params);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (format == "csv") {
    if (command != "profile") mereology::fail(ErrorKind::kInvalidArgument, "--format csv is only available for profile");
    emit(out.csv, output);
  } else {
    emit(mereology::io::make_report(command, out.inputs, params, out.results, seconds).dump(2) + "\n", output);
  }
  return out.exit_code;
}

int run_replay(const std::string& report_path) {
  const json report = mereology::io::load_json(report_path);
  for (const char* key : {"command", "parameters", "results"}) {
    if (!report.contains(key)) mereology::io::parse_fail(std::string("$.") + key, "missing required field");
  }
  const std::string command = report["command"].get<std::string>();
  const Outcome again = execute(command, report["parameters"]);
  const bool same = comparable(again.results) == comparable(report["results"]);
  std::cout << (same ? "replay: results reproduced\n" : "replay: results differ\n");
  return same ? kOk : kCheckFailure;
}

std::pair<int, int> parse_dims_flag(const std::string& s) {
  int a = 0, b = 0;
  char sep = 0;
  std::istringstream is(s);
  if (!(is >> a >> sep >> b) || (sep != ',' && sep != 'x') || !is.eof()) {
    mereology::fail(ErrorKind::kInvalidArgument, "--dims expects N1,N2 (got '" + s + "')");
  }
  return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor product structures and entanglement of trajectories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mereology::io::kLibraryVersion);

  std::string input, tps = "identity", dims, format = "json", output, report;
  int samples = 0, restarts = 0, max_iterations = 500, time_samples = 200;
  double tol = 1e-8, rank_tol = mereology::kDefaultRankTol, perturb_u = 0.0;
  std::uint64_t seed = 0;
  bool list = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", output, "write the report here instead of stdout");
  };

  auto* profile = app.add_subcommand("profile", "entanglement entropy and product distance along a trajectory");
  profile->add_option("--input,-i", input, "trajectory file")->required();
  profile->add_option("--tps", tps, "TPS file or 'identity'")->capture_default_str();
  profile->add_option("--samples", samples, "time samples (trig/hamiltonian forms), default 200");
  profile->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  add_common(profile);

  auto* certify = app.add_subcommand("certify", "certify that no disentangling TPS exists");
  certify->add_option("--input,-i", input, "trajectory file")->required();
  certify->add_option("--samples", samples, "time samples, default 400");
  certify->add_option("--rank-tol", rank_tol, "relative eigenvalue threshold")->capture_default_str();
  add_common(certify);

  auto* construct = app.add_subcommand("construct", "build a disentangling TPS for a two-qubit trig trajectory");
  construct->add_option("--input,-i", input, "trajectory file (trig form)")->required();
  construct->add_option("--seed", seed, "solver seed")->capture_default_str();
  construct->add_option("--restarts", restarts, "restart budget, default 64");
  construct->add_option("--tol", tol, "verification tolerance")->capture_default_str();
  construct->add_option("--samples", samples, "verification samples, default 100");
  add_common(construct);

  auto* hamiltonian = app.add_subcommand("hamiltonian", "separable projection and stationarity of an operator");
  hamiltonian->add_option("--input,-i", input, "operator file")->required();
  hamiltonian->add_option("--tps", tps, "TPS file or 'identity'")->capture_default_str();
  hamiltonian->add_option("--dims", dims, "N1,N2 (defaults to the file's dims)");
  add_common(hamiltonian);

  auto* optimize = app.add_subcommand("optimize", "search for the TPS minimizing the worst product distance");
  optimize->add_option("--input,-i", input, "trajectory file")->required();
  optimize->add_option("--seed", seed, "restart seed")->capture_default_str();
  optimize->add_option("--restarts", restarts, "number of restarts, default 32");
  optimize->add_option("--samples", samples, "trajectory samples, default 200");
  optimize->add_option("--max-iterations", max_iterations, "surrogate iterations per restart")->capture_default_str();
  optimize->add_option("--time-samples", time_samples, "samples used during descent")->capture_default_str();
  add_common(optimize);

  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance checks");
  reproduce->add_flag("--list", list, "list the checks without running them");
  reproduce->add_option("--perturb-u", perturb_u, "add noise of this size to the reference disentangler")
      ->capture_default_str();
  reproduce->add_option("--seed", seed, "seed for solvers and perturbation, default 20240601");
  add_common(reproduce);

  auto* replay = app.add_subcommand("replay", "re-run a JSON report from its parameter block and compare");
  replay->add_option("report", report, "report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
    if (*profile) {
      return run_command("profile", {{"input", input}, {"tps", tps}, {"samples", given(profile, "--samples") ? samples : 200}},
                         format, output);
    }
    if (*certify) {
      return run_command("certify",
                         {{"input", input}, {"samples", given(certify, "--samples") ? samples : 400}, {"rank_tol", rank_tol}},
                         "json", output);
    }
    if (*construct) {
      return run_command("construct",
                         {{"input", input},
                          {"seed", seed},
                          {"restarts", given(construct, "--restarts") ? restarts : 64},
                          {"tol", tol},
                          {"samples", given(construct, "--samples") ? samples : 100}},
                         "json", output);
    }
    if (*hamiltonian) {
      json p = {{"input", input}, {"tps", tps}, {"dims", nullptr}};
      if (!dims.empty()) {
        const auto [a, b] = parse_dims_flag(dims);
        p["dims"] = json::array({a, b});
      }
      return run_command("hamiltonian", p, "json", output);
    }
    if (*optimize) {
      return run_command("optimize",
                         {{"input", input},
                          {"seed", seed},
                          {"restarts", given(optimize, "--restarts") ? restarts : 32},
                          {"samples", given(optimize, "--samples") ? samples : 200},
                          {"max_iterations", max_iterations},
                          {"time_samples", time_samples}},
                         "json", output);
    }
    if (*reproduce) {
      if (list) {
        for (const auto& c : mereology::acceptance::checks()) std::cout << c.id << "  " << c.title << '\n';
        return kOk;
      }
      return run_command("reproduce",
                         {{"perturb_u", perturb_u},
                          {"seed", given(reproduce, "--seed") ? seed : mereology::acceptance::Options{}.seed}},
                         "json", output);
    }
    if (*replay) return run_replay(report);
  } catch (const mereology::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

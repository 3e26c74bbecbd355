// Batch front end. Exit codes: 0 ok, 1 solver failure, 2 config error,
// 3 semitrivial collapse, 4 potential hypothesis fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlsys/config.hpp"
#include "nlsys/sweep.hpp"

namespace fs = std::filesystem;
using namespace nlsys;

namespace {

constexpr int kOk = 0;
constexpr int kSolverFailure = 1;
constexpr int kConfigError = 2;
constexpr int kSemitrivial = 3;
constexpr int kHypothesisFails = 4;

void kv(const char* key, double value) { std::printf("%s: %.12g\n", key, value); }
void kv(const char* key, const std::string& value) {
  std::printf("%s: %s\n", key, value.c_str());
}

int exit_code_for(FailureKind kind) {
  return kind == FailureKind::SemitrivialCollapse ? kSemitrivial : kSolverFailure;
}

void echo_defaults(const RunConfig& cfg) {
  for (const std::string& d : cfg.defaulted) kv("default", d);
}

// Output directory must be a directory or creatable as one.
bool prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  if (fs::exists(dir, ec)) return fs::is_directory(dir, ec);
  fs::create_directories(dir, ec);
  return !ec;
}

int cmd_ground(const RunConfig& cfg) {
  const RunManifest& m = cfg.manifest;
  if (!prepare_output_dir(m.output_dir)) {
    std::cerr << "error: cannot use output_dir " << m.output_dir << "\n";
    return kConfigError;
  }
  const Grid grid = build_grid(m.params.dim, m.half_width, m.n_per_dim);
  const Model model(m.params, grid);
  const GroundPair ground = solve_ground_pair(model, m.ground);
  const double p = m.params.p;
  double cs[2];
  for (int i = 1; i <= 2; ++i) {
    cs[i - 1] = m.params.potential.kind == PotentialKind::Constant
                    ? (i == 1 ? ground.u.level : ground.v.level)
                    : c_star(m.params, i, estimate_sbar_p(model, i, m.ground));
  }
  kv("c1", ground.u.level);
  kv("c2", ground.v.level);
  kv("c1_star", cs[0]);
  kv("c2_star", cs[1]);
  const GroundState* states[] = {&ground.u, &ground.v};
  for (int i = 0; i < 2; ++i) {
    const std::string tag = std::to_string(i + 1);
    const double norm_sq = h_norm_sq(states[i]->field, model.potential());
    const double ident = 2.0 * p * states[i]->level / (p - 2.0);
    kv(("norm_sq_" + tag).c_str(), norm_sq);
    kv(("norm_identity_" + tag).c_str(), ident);
    kv(("norm_identity_relerr_" + tag).c_str(), std::abs(norm_sq - ident) / ident);
    kv(("j_ratio_" + tag).c_str(), j_ratio(model, i + 1, states[i]->field));
    kv(("residual_" + tag).c_str(), states[i]->residual_norm);
    kv(("iterations_" + tag).c_str(), states[i]->iterations);
  }
  write_snapshot(ground.u.field, m.output_dir / "U.bin");
  write_snapshot(ground.v.field, m.output_dir / "V.bin");
  kv("snapshot_U", (m.output_dir / "U.bin").string());
  kv("snapshot_V", (m.output_dir / "V.bin").string());
  return kOk;
}

int cmd_solve(const RunConfig& cfg, double beta) {
  const RunManifest& m = cfg.manifest;
  const Grid grid = build_grid(m.params.dim, m.half_width, m.n_per_dim);
  const Model model(m.params, grid);
  const GroundPair ground = solve_ground_pair(model, m.ground);
  const double d1 = nontriviality_radius(model, ground);
  kv("beta", beta);
  kv("c0", ground.c0());
  kv("d1", d1);
  try {
    const SolveReport rep =
        newton_solve_at_beta(model.with_beta(beta), ground.pair(), ground, m.newton);
    kv("status", "converged");
    kv("I_beta", rep.energy);
    kv("residual", rep.residual_norm);
    kv("newton_iters", rep.newton_iters);
    kv("dist_to_UV", rep.dist_to_uv);
    kv("norm_u", rep.norm_u);
    kv("norm_v", rep.norm_v);
    kv("collapse_threshold", 0.5 * d1);
    return kOk;
  } catch (const SolverError& e) {
    kv("status", to_string(e.kind()));
    kv("message", e.what());
    return exit_code_for(e.kind());
  }
}

int cmd_sweep(const RunConfig& cfg) {
  const RunManifest& m = cfg.manifest;
  if (!prepare_output_dir(m.output_dir)) {
    std::cerr << "error: cannot use output_dir " << m.output_dir << "\n";
    return kConfigError;
  }
  try {
    const ExperimentResult r = run_experiment(m);
    kv("c0", r.ground.c0());
    kv("d1", r.d1);
    kv("records", static_cast<double>(r.records.size()));
    for (const auto& w : r.warnings) kv("warning", w);
    kv("csv", (m.output_dir / "results.csv").string());
    kv("summary", (m.output_dir / "summary.txt").string());
    return kOk;
  } catch (const StageError& e) {
    kv("status", "failed");
    kv("stage", e.stage());
    kv("message", e.what());
    return e.cause() ? exit_code_for(*e.cause()) : kSolverFailure;
  }
}

int cmd_check_potential(const RunConfig& cfg) {
  const RunManifest& m = cfg.manifest;
  const PotentialSpec& spec = m.params.potential;
  const Grid grid = build_grid(m.params.dim, m.half_width, m.n_per_dim);
  kv("potential", to_string(spec.kind));
  const V1Report v1 = check_V1(spec, grid);
  kv("V1", v1.holds ? "holds" : "fails");
  kv("V1_max_violation", v1.max_violation);

  bool ok = v1.holds;
  if (m.params.dim == 3) {
    double S = 0.0;
    if (cfg.sobolev_S) {
      S = *cfg.sobolev_S;
      kv("sobolev_S_source", "config");
    } else {
      const SobolevEstimate est = sobolev_constant_S({{8.0, 15}, {8.0, 23}, {8.0, 31}});
      S = est.extrapolated;
      kv("sobolev_S_source", "lattice estimate");
    }
    kv("sobolev_S", S);
    const V0Report v0 = check_V0(spec, grid, S);
    kv("V0", v0.holds ? "holds" : "fails");
    kv("V0_integral", v0.integral);
    kv("V0_bound", v0.bound);
    ok = ok && v0.holds;
  } else {
    kv("V0", "not applicable");
  }
  return ok ? kOk : kHypothesisFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled nonlinear Schroedinger system toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  double beta = 0.0;
  auto* ground = app.add_subcommand("ground", "ground states, thresholds and norm identities");
  auto* solve = app.add_subcommand("solve", "Newton solve at one coupling");
  auto* sweep = app.add_subcommand("sweep", "full continuation experiment");
  auto* check = app.add_subcommand("check-potential", "check potential hypotheses");
  for (auto* sub : {ground, solve, sweep, check}) {
    sub->add_option("--config", config_path, "key = value run config")->required();
  }
  auto* beta_opt = solve->add_option("--beta", beta, "coupling (defaults to config beta)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  echo_defaults(cfg);

  try {
    if (*ground) return cmd_ground(cfg);
    if (*solve) {
      if (beta_opt->count() == 0) beta = cfg.beta;
      if (!(beta >= 0.0) || !std::isfinite(beta)) {
        std::cerr << "config error: --beta must be a finite value >= 0\n";
        return kConfigError;
      }
      return cmd_solve(cfg, beta);
    }
    if (*sweep) return cmd_sweep(cfg);
    return cmd_check_potential(cfg);
  } catch (const SolverError& e) {
    kv("status", to_string(e.kind()));
    kv("message", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverFailure;
  }
}

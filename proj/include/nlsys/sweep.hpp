#ifndef NLSYS_SWEEP_HPP
#define NLSYS_SWEEP_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlsys/coupled.hpp"

namespace nlsys {

inline constexpr const char* kVersion = "0.1.0";

/// Everything a run depends on. Timestamps are filled by run_experiment and
/// appear only in manifest.txt, so the CSV is a pure function of the rest.
struct RunManifest {
  ModelParams params;
  double half_width = 20.0;
  int n_per_dim = 2047;
  GroundOptions ground{.tol = 1e-10};
  NewtonOptions newton;
  FlowControls flow;
  int surface_nt = 33;
  int surface_ns = 33;
  /// Any order; solved ascending, emitted descending.
  std::vector<double> betas;
  std::uint64_t seed = 12345;
  /// Gradient-gap samples per beta at d = d1/4; 0 disables the probe.
  int probe_samples = 200;
  std::filesystem::path output_dir = "out";
  std::string version = kVersion;
  std::string started;
  std::string finished;
};

/// 0.2 * 2^{-n}, n = 0..7
std::vector<double> default_beta_schedule();

struct SweepRecord {
  double beta = 0.0;
  double c_beta = 0.0;
  double m_beta = 0.0;
  double I_beta = 0.0;
  double dist_to_uv = 0.0;
  double residual = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
};

struct ExperimentResult {
  explicit ExperimentResult(GroundPair g) : ground(std::move(g)) {}

  GroundPair ground;
  double c_star1 = 0.0;
  double c_star2 = 0.0;
  double d1 = 0.0;
  SurfaceBrackets brackets;
  /// Descending beta.
  std::vector<SweepRecord> records;
  std::vector<std::optional<GapProbe>> probes;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> artifacts;
};

/// A stage of run_experiment failed. Artifacts written before the failure are
/// kept on disk.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what,
             std::optional<FailureKind> cause)
      : std::runtime_error(stage + ": " + what),
        stage_(std::move(stage)),
        cause_(cause) {}
  const std::string& stage() const { return stage_; }
  std::optional<FailureKind> cause() const { return cause_; }

 private:
  std::string stage_;
  std::optional<FailureKind> cause_;
};

/// Ground pair, thresholds, continuation and surface estimates, written to
/// output_dir as results.csv, summary.txt, manifest.txt and *.bin snapshots.
ExperimentResult run_experiment(RunManifest manifest);

void emit_csv(const std::vector<SweepRecord>& records,
              const std::filesystem::path& path);
std::string format_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_csv(const std::filesystem::path& path);

/// key = value lines, one per manifest field.
std::string format_manifest(const RunManifest& manifest);

struct Snapshot {
  std::vector<std::int64_t> shape;
  std::vector<double> values;
};

/// int64 dim, int64 n per axis, then row-major values, all little-endian.
void write_snapshot(const Field& field, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace nlsys

#endif  // NLSYS_SWEEP_HPP

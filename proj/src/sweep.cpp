#include "nlsys/sweep.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace nlsys {

namespace fs = std::filesystem;

std::vector<double> default_beta_schedule() {
  std::vector<double> out;
  for (int n = 0; n <= 7; ++n) out.push_back(0.2 * std::ldexp(1.0, -n));
  return out;
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string now_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

template <class F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const SolverError& e) {
    throw StageError(name, e.what(), e.kind());
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), std::nullopt);
  }
}

std::string summary_text(const RunManifest& m, const ExperimentResult& r,
                         const std::string& failure) {
  std::ostringstream out;
  const double c0 = r.ground.c0();
  out << "c1: " << fmt(r.ground.u.level) << "\n"
      << "c2: " << fmt(r.ground.v.level) << "\n"
      << "c0: " << fmt(c0) << "\n"
      << "c1_star: " << fmt(r.c_star1) << "\n"
      << "c2_star: " << fmt(r.c_star2) << "\n"
      << "d1: " << fmt(r.d1) << "\n"
      << "t1: " << fmt(r.brackets.t.t1) << "\n"
      << "t2: " << fmt(r.brackets.t.t2) << "\n"
      << "s1: " << fmt(r.brackets.s.t1) << "\n"
      << "s2: " << fmt(r.brackets.s.t2) << "\n";
  double beta0 = 0.0;
  for (const SweepRecord& rec : r.records) beta0 = std::max(beta0, rec.beta);
  out << "beta0_proxy: " << fmt(beta0) << "\n"
      << "betas_requested: " << m.betas.size() << "\n"
      << "betas_converged: " << r.records.size() << "\n";
  if (!failure.empty()) out << "failure: " << failure << "\n";
  out << "\n# convergence table (dist_to_UV is measured to the computed (U, V))\n"
      << "beta  |I-c0|  |m-c0|  c0-c  dist_to_UV  dist/beta  delta  kept\n";
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const SweepRecord& rec = r.records[k];
    out << fmt(rec.beta) << "  " << fmt(std::abs(rec.I_beta - c0)) << "  "
        << fmt(std::abs(rec.m_beta - c0)) << "  " << fmt(c0 - rec.c_beta) << "  "
        << fmt(rec.dist_to_uv) << "  "
        << (rec.beta > 0.0 ? fmt(rec.dist_to_uv / rec.beta) : std::string("-"));
    const auto& probe = k < r.probes.size() ? r.probes[k] : std::nullopt;
    if (probe && probe->any_kept) {
      out << "  " << fmt(probe->delta_estimate) << "  " << probe->kept << "/"
          << probe->sampled;
    } else if (probe) {
      out << "  -  0/" << probe->sampled;
    } else {
      out << "  -  -";
    }
    out << "\n";
  }
  for (const std::string& w : r.warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace

std::string format_manifest(const RunManifest& m) {
  std::ostringstream out;
  const ModelParams& p = m.params;
  out << "version = " << m.version << "\n"
      << "started = " << m.started << "\n"
      << "finished = " << m.finished << "\n"
      << "dim = " << p.dim << "\n"
      << "p = " << fmt(p.p) << "\n"
      << "mu1 = " << fmt(p.mu1) << "\n"
      << "mu2 = " << fmt(p.mu2) << "\n"
      << "potential = " << to_string(p.potential.kind) << "\n"
      << "V_inf = " << fmt(p.potential.v_inf) << "\n"
      << "depth = " << fmt(p.potential.depth) << "\n"
      << "width = " << fmt(p.potential.width) << "\n"
      << "L = " << fmt(m.half_width) << "\n"
      << "n = " << m.n_per_dim << "\n"
      << "ground_tol = " << fmt(m.ground.tol) << "\n"
      << "ground_max_iter = " << m.ground.max_iter << "\n"
      << "ground_init = gaussian sigma=min(1.5,L/4) centred at 0\n"
      << "newton_tol = " << fmt(m.newton.tol) << "\n"
      << "newton_max_iter = " << m.newton.max_iter << "\n"
      << "linear_rtol = " << fmt(m.newton.linear_rtol) << "\n"
      << "surface_nt = " << m.surface_nt << "\n"
      << "surface_ns = " << m.surface_ns << "\n"
      << "surface_iters = " << m.flow.max_iter << "\n"
      << "surface_band = " << fmt(m.flow.band) << "\n"
      << "probe_samples = " << m.probe_samples << "\n"
      << "seed = " << m.seed << "\n"
      << "output_dir = " << m.output_dir.string() << "\n"
      << "beta_schedule = ";
  for (std::size_t k = 0; k < m.betas.size(); ++k) {
    out << (k ? "," : "") << fmt(m.betas[k]);
  }
  out << "\n";
  return out.str();
}

std::string format_csv(const std::vector<SweepRecord>& records) {
  std::string out = "beta,c_beta,m_beta,I_beta,dist_to_UV,residual,norm_u,norm_v\n";
  for (const SweepRecord& r : records) {
    for (double x : {r.beta, r.c_beta, r.m_beta, r.I_beta, r.dist_to_uv,
                     r.residual, r.norm_u, r.norm_v}) {
      out += fmt(x);
      out += ',';
    }
    out.back() = '\n';
  }
  return out;
}

void emit_csv(const std::vector<SweepRecord>& records, const fs::path& path) {
  if (records.empty()) throw std::invalid_argument("no records to emit");
  write_text(path, format_csv(records));
}

std::vector<SweepRecord> parse_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "beta,c_beta,m_beta,I_beta,dist_to_UV,residual,norm_u,norm_v") {
    throw std::runtime_error("unexpected CSV header in " + path.string());
  }
  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> cols;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cols.push_back(std::stod(cell));
    if (cols.size() != 8) throw std::runtime_error("malformed CSV row: " + line);
    out.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5],
                   cols[6], cols[7]});
  }
  return out;
}

void write_snapshot(const Field& field, const fs::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "snapshot writer assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  const Grid& g = field.grid();
  const std::int64_t dim = g.dim();
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (int a = 0; a < g.dim(); ++a) {
    const std::int64_t n = g.n_per_dim();
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
  }
  out.write(reinterpret_cast<const char*>(field.values().data()),
            static_cast<std::streamsize>(field.size() * sizeof(double)));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

Snapshot read_snapshot(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::int64_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in || dim < 1 || dim > 3) throw std::runtime_error("bad snapshot " + path.string());
  Snapshot snap;
  std::int64_t total = 1;
  for (std::int64_t a = 0; a < dim; ++a) {
    std::int64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || n < 1) throw std::runtime_error("bad snapshot " + path.string());
    snap.shape.push_back(n);
    total *= n;
  }
  snap.values.resize(static_cast<std::size_t>(total));
  in.read(reinterpret_cast<char*>(snap.values.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) throw std::runtime_error("truncated snapshot " + path.string());
  return snap;
}

ExperimentResult run_experiment(RunManifest m) {
  if (m.betas.empty()) m.betas = default_beta_schedule();
  m.started = now_utc();
  fs::create_directories(m.output_dir);
  const fs::path dir = m.output_dir;

  const Grid grid = build_grid(m.params.dim, m.half_width, m.n_per_dim);
  const Model model(m.params, grid);

  auto write_manifest = [&] {
    m.finished = now_utc();
    write_text(dir / "manifest.txt", format_manifest(m));
  };
  write_manifest();

  ExperimentResult r(
      stage("ground", [&] { return solve_ground_pair(model, m.ground); }));
  r.artifacts.push_back(dir / "manifest.txt");
  write_snapshot(r.ground.u.field, dir / "U.bin");
  write_snapshot(r.ground.v.field, dir / "V.bin");
  r.artifacts.push_back(dir / "U.bin");
  r.artifacts.push_back(dir / "V.bin");

  stage("thresholds", [&] {
    if (m.params.potential.kind == PotentialKind::Constant) {
      r.c_star1 = r.ground.u.level;
      r.c_star2 = r.ground.v.level;
    } else {
      r.c_star1 = c_star(m.params, 1, estimate_sbar_p(model, 1, m.ground));
      r.c_star2 = c_star(m.params, 2, estimate_sbar_p(model, 2, m.ground));
    }
    r.d1 = nontriviality_radius(model, r.ground);
    r.brackets = surface_brackets(model, r.ground);
    return 0;
  });

  std::vector<double> ascending = m.betas;
  std::sort(ascending.begin(), ascending.end());

  std::vector<SolveReport> reports;
  std::string failure;
  std::optional<FailureKind> failure_kind;
  try {
    reports = continuation_sweep(model, r.ground, ascending, m.newton);
  } catch (const ContinuationError& e) {
    reports = e.completed();
    failure = "continuation at beta = " + fmt(e.beta()) + ": " + e.what();
    failure_kind = e.kind();
  }

  auto finish = [&] {
    std::reverse(r.records.begin(), r.records.end());
    std::reverse(r.probes.begin(), r.probes.end());
    for (std::size_t k = 1; k < r.records.size(); ++k) {
      const double c0 = r.ground.c0();
      if (std::abs(r.records[k].I_beta - c0) >
          std::abs(r.records[k - 1].I_beta - c0)) {
        r.warnings.push_back("|I_beta - c0| increased from beta = " +
                             fmt(r.records[k - 1].beta) + " to beta = " +
                             fmt(r.records[k].beta));
      }
    }
    if (!r.records.empty()) {
      emit_csv(r.records, dir / "results.csv");
      r.artifacts.push_back(dir / "results.csv");
    }
    write_text(dir / "summary.txt", summary_text(m, r, failure));
    r.artifacts.push_back(dir / "summary.txt");
    write_manifest();
  };

  try {
    for (std::size_t k = 0; k < reports.size(); ++k) {
      const SolveReport& rep = reports[k];
      const Model mb = model.with_beta(rep.beta);
      const std::string tag = "beta=" + fmt(rep.beta);
      SweepRecord rec;
      rec.beta = rep.beta;
      rec.I_beta = rep.energy;
      rec.dist_to_uv = rep.dist_to_uv;
      rec.residual = rep.residual_norm;
      rec.norm_u = rep.norm_u;
      rec.norm_v = rep.norm_v;
      rec.m_beta = stage("m_beta " + tag, [&] {
        return surface_max_m_beta(mb, r.ground, r.brackets).m_beta;
      });
      rec.c_beta = stage("c_beta " + tag, [&] {
        MinimaxSurface surface(mb, r.ground, r.brackets, m.surface_nt, m.surface_ns);
        const MinimaxEstimate est = surface_minimax_c_beta(mb, surface, m.flow);
        if (est.budget_exhausted) {
          r.warnings.push_back("surface iteration budget exhausted at " + tag);
        }
        return est.c_beta_estimate;
      });
      std::optional<GapProbe> probe;
      if (m.probe_samples > 0) {
        probe = stage("gap probe " + tag, [&] {
          return gradient_gap_probe(mb, r.ground, 0.25 * r.d1, m.probe_samples,
                                    m.seed + k);
        });
      }
      r.records.push_back(rec);
      r.probes.push_back(probe);
      const std::string idx = std::to_string(k);
      write_snapshot(rep.pair.u, dir / ("u_beta_" + idx + ".bin"));
      write_snapshot(rep.pair.v, dir / ("v_beta_" + idx + ".bin"));
    }
  } catch (const StageError& e) {
    failure = e.what();
    finish();
    throw;
  }
  finish();
  if (!failure.empty()) {
    throw StageError("continuation", failure, failure_kind);
  }
  return r;
}

}  // namespace nlsys

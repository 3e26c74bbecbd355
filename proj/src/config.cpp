#include "nlsys/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace nlsys {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  return x;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "dim",        "p",           "L",            "n",
      "mu1",        "mu2",         "beta",         "potential",
      "V_inf",      "depth",       "width",        "beta_schedule",
      "seed",       "output_dir",  "ground_tol",   "ground_max_iter",
      "newton_tol", "newton_max_iter", "linear_rtol", "surface_nt",
      "surface_ns", "surface_iters", "surface_band", "probe_samples",
      "sobolev_S"};
  return keys;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("key '" + key + "' has no value");
    if (!raw.emplace(key, value).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }
  }
  for (const char* required : {"dim", "p"}) {
    if (!raw.count(required)) {
      throw ConfigError(std::string("missing required key '") + required + "'");
    }
  }

  RunConfig cfg;
  RunManifest& m = cfg.manifest;
  ModelParams& params = m.params;
  params.dim = static_cast<int>(to_integer("dim", raw.at("dim")));
  if (params.dim < 1 || params.dim > 3) throw ConfigError("key 'dim': must be 1, 2 or 3");
  params.p = to_real("p", raw.at("p"));

  // Fetches a key or its default, echoing the default.
  auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = raw.find(key);
    if (it != raw.end()) return it->second;
    cfg.defaulted.push_back(key + " = " + fallback);
    return fallback;
  };

  static const char* kL[] = {"20", "10", "8"};
  static const char* kN[] = {"2047", "127", "31"};
  m.half_width = to_real("L", get("L", kL[params.dim - 1]));
  m.n_per_dim = static_cast<int>(to_integer("n", get("n", kN[params.dim - 1])));
  params.mu1 = to_real("mu1", get("mu1", "1"));
  params.mu2 = to_real("mu2", get("mu2", "1"));
  cfg.beta = to_real("beta", get("beta", "0"));

  PotentialKind kind;
  const std::string kind_text = get("potential", "constant");
  try {
    kind = parse_potential_kind(kind_text);
  } catch (const std::exception& e) {
    throw ConfigError("key 'potential': " + std::string(e.what()));
  }
  const double v_inf = to_real("V_inf", get("V_inf", "1"));
  const char* depth_default = kind == PotentialKind::Constant       ? "0"
                              : kind == PotentialKind::GaussianWell ? "0.5"
                                                                    : "2";
  const double depth = to_real("depth", get("depth", depth_default));
  const double width = to_real("width", get("width", "2"));
  try {
    switch (kind) {
      case PotentialKind::Constant:
        if (depth != 0.0) throw std::invalid_argument("constant potential takes depth = 0");
        params.potential = PotentialSpec::constant(v_inf);
        break;
      case PotentialKind::GaussianWell:
        params.potential = PotentialSpec::gaussian_well(v_inf, depth, width);
        break;
      case PotentialKind::SignChanging:
        params.potential = PotentialSpec::sign_changing(v_inf, depth, width);
        break;
    }
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const std::string schedule = get("beta_schedule", "default");
  if (schedule != "default") {
    std::istringstream list(schedule);
    std::string item;
    while (std::getline(list, item, ',')) {
      const double b = to_real("beta_schedule", trim(item));
      if (b < 0.0) throw ConfigError("key 'beta_schedule': betas must be >= 0");
      m.betas.push_back(b);
    }
    if (m.betas.empty()) throw ConfigError("key 'beta_schedule' is empty");
  } else {
    m.betas = default_beta_schedule();
  }
  if (cfg.beta < 0.0) throw ConfigError("key 'beta': must be >= 0");

  const long long seed = to_integer("seed", get("seed", "12345"));
  if (seed < 0) throw ConfigError("key 'seed': must be >= 0");
  m.seed = static_cast<std::uint64_t>(seed);
  m.output_dir = get("output_dir", "out");
  m.ground.tol = to_real("ground_tol", get("ground_tol", "1e-10"));
  m.ground.max_iter =
      static_cast<int>(to_integer("ground_max_iter", get("ground_max_iter", "10000")));
  m.newton.tol = to_real("newton_tol", get("newton_tol", "1e-8"));
  m.newton.max_iter =
      static_cast<int>(to_integer("newton_max_iter", get("newton_max_iter", "50")));
  m.newton.linear_rtol = to_real("linear_rtol", get("linear_rtol", "1e-3"));
  m.surface_nt = static_cast<int>(to_integer("surface_nt", get("surface_nt", "33")));
  m.surface_ns = static_cast<int>(to_integer("surface_ns", get("surface_ns", "33")));
  m.flow.max_iter =
      static_cast<int>(to_integer("surface_iters", get("surface_iters", "200")));
  m.flow.band = to_real("surface_band", get("surface_band", "0.05"));
  m.probe_samples =
      static_cast<int>(to_integer("probe_samples", get("probe_samples", "200")));
  if (raw.count("sobolev_S")) {
    cfg.sobolev_S = to_real("sobolev_S", raw.at("sobolev_S"));
    if (!(*cfg.sobolev_S > 0.0)) throw ConfigError("key 'sobolev_S': must be > 0");
  }

  if (!(m.half_width > 0.0)) throw ConfigError("key 'L': must be > 0");
  if (m.n_per_dim < 3) throw ConfigError("key 'n': must be >= 3");
  if (!(m.ground.tol > 0.0) || !(m.newton.tol > 0.0) || !(m.newton.linear_rtol > 0.0)) {
    throw ConfigError("tolerances must be > 0");
  }
  if (m.ground.max_iter < 1 || m.newton.max_iter < 1 || m.flow.max_iter < 0) {
    throw ConfigError("iteration budgets must be positive");
  }
  if (m.surface_nt < 3 || m.surface_ns < 3) {
    throw ConfigError("surface_nt and surface_ns must be >= 3");
  }
  if (m.probe_samples != 0 && m.probe_samples < 100) {
    throw ConfigError("key 'probe_samples': 0 or at least 100");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in);
}

}  // namespace nlsys

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "nlsys/config.hpp"

using namespace nlsys;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool has(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("full file") {
  const RunConfig c = parse(
      "# comment line\n"
      "dim = 2\n"
      "p = 4   # trailing comment\n"
      "L = 9\n"
      "n = 63\n"
      "mu1 = 1.5\n"
      "mu2 = 0.5\n"
      "beta = 0.05\n"
      "potential = gaussian_well\n"
      "V_inf = 2\n"
      "depth = 1\n"
      "width = 3\n"
      "beta_schedule = 0.1, 0.01\n"
      "seed = 7\n"
      "output_dir = out/x\n"
      "\n");
  const RunManifest& m = c.manifest;
  CHECK(m.params.dim == 2);
  CHECK(m.params.p == 4.0);
  CHECK(m.half_width == 9.0);
  CHECK(m.n_per_dim == 63);
  CHECK(m.params.mu1 == 1.5);
  CHECK(m.params.mu2 == 0.5);
  CHECK(c.beta == 0.05);
  CHECK(m.params.potential.kind == PotentialKind::GaussianWell);
  CHECK(m.params.potential.v_inf == 2.0);
  CHECK(m.params.potential.depth == 1.0);
  CHECK(m.params.potential.width == 3.0);
  CHECK(m.betas == std::vector<double>{0.1, 0.01});
  CHECK(m.seed == 7);
  CHECK(m.output_dir == "out/x");
  CHECK_FALSE(c.sobolev_S.has_value());
  CHECK_FALSE(has(c.defaulted, "L = 20"));
  CHECK(has(c.defaulted, "ground_tol = 1e-10"));
}

TEST_CASE("defaults depend on dimension and potential") {
  const RunConfig one = parse("dim = 1\np = 3\n");
  CHECK(one.manifest.half_width == 20.0);
  CHECK(one.manifest.n_per_dim == 2047);
  CHECK(one.manifest.betas == default_beta_schedule());
  CHECK(one.manifest.seed == 12345);
  CHECK(has(one.defaulted, "L = 20"));
  CHECK(has(one.defaulted, "n = 2047"));
  CHECK(has(one.defaulted, "potential = constant"));
  CHECK(has(one.defaulted, "depth = 0"));
  const RunConfig three = parse("dim = 3\np = 3\npotential = sign_changing\n");
  CHECK(three.manifest.half_width == 8.0);
  CHECK(three.manifest.n_per_dim == 31);
  CHECK(three.manifest.params.potential.depth == 2.0);
  CHECK(parse("dim = 2\np = 3\npotential = gaussian_well\n").manifest.params.potential.depth ==
        0.5);
  CHECK(*parse("dim = 3\np = 3\nsobolev_S = 5.4\n").sobolev_S == 5.4);
}

TEST_CASE("malformed files name the offending key") {
  CHECK(error_of("dim = 1\n").find("missing required key 'p'") != std::string::npos);
  CHECK(error_of("p = 3\n").find("'dim'") != std::string::npos);
  CHECK(error_of("dim = 1\np = 3\nbetta = 1\n").find("unknown key 'betta'") != std::string::npos);
  CHECK(error_of("dim = 1\np = 3\np = 4\n").find("duplicate key 'p'") != std::string::npos);
  CHECK(error_of("dim = 1\np = three\n").find("'p'") != std::string::npos);
  CHECK(error_of("dim = 1\np = 3\nn = 12.5\n").find("'n'") != std::string::npos);
  CHECK(error_of("dim = 1\np =\n").find("no value") != std::string::npos);
  CHECK(error_of("dim = 1\np 3\n").find("line 2") != std::string::npos);
}

TEST_CASE("invalid values are rejected") {
  for (const char* text : {
           "dim = 4\np = 3\n",
           "dim = 1\np = 2\n",
           "dim = 3\np = 6\n",
           "dim = 1\np = 3\nmu1 = 0\n",
           "dim = 1\np = 3\nbeta = -1\n",
           "dim = 1\np = 3\nL = 0\n",
           "dim = 1\np = 3\nn = 2\n",
           "dim = 1\np = 3\npotential = harmonic\n",
           "dim = 1\np = 3\ndepth = 0.5\n",
           "dim = 1\np = 3\nbeta_schedule = 0.1,-0.2\n",
           "dim = 1\np = 3\nbeta_schedule = 0.1,,0.2\n",
           "dim = 1\np = 3\nseed = -1\n",
           "dim = 1\np = 3\nground_tol = 0\n",
           "dim = 1\np = 3\nprobe_samples = 50\n",
           "dim = 1\np = 3\nsurface_nt = 2\n",
           "dim = 3\np = 3\nsobolev_S = -1\n",
       }) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse(text), ConfigError);
  }
  CHECK_THROWS_AS(load_config("does/not/exist.cfg"), ConfigError);
}

TEST_CASE("shipped configs parse") {
  for (const char* name : {"default_1d.cfg", "well_2d.cfg", "sign_changing_3d.cfg"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_config(std::filesystem::path(NLSYS_CONFIG_DIR) / name));
  }
}

}  // TEST_SUITE

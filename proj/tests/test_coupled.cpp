#include <cmath>

#include "doctest.h"
#include "nlsys/coupled.hpp"

using namespace nlsys;

namespace {

struct Fixture {
  Grid grid{1, 20.0, 1023};
  Model model;
  GroundPair ground;

  explicit Fixture(ModelParams mp = {})
      : model(mp, grid), ground(solve_ground_pair(model, GroundOptions{.tol = 1e-10})) {}
};

// For V constant and mu1 = mu2 = 1 at p = 3 the pair (a U, b U) solves the
// system when a = 1 - beta b and b - b^2 = (beta/2) a^2.
struct ProportionalPair {
  double a;
  double b;
};

ProportionalPair proportional_solution(double beta) {
  auto f = [beta](double b) {
    const double a = 1.0 - beta * b;
    return b - b * b - 0.5 * beta * a * a;
  };
  double lo = 0.5;
  double hi = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double b = 0.5 * (lo + hi);
  return {1.0 - beta * b, b};
}

// I_beta(a U, b U) / ||U||^2 using int U^3 = ||U||^2.
double proportional_energy(double beta, ProportionalPair ab) {
  const double a = ab.a;
  const double b = ab.b;
  return 0.5 * (a * a + b * b) - (a * a * a + b * b * b) / 3.0 - 0.5 * beta * a * a * b;
}

ModelParams asymmetric_params() {
  ModelParams mp;
  mp.mu1 = 1.0;
  mp.mu2 = 2.0;
  mp.potential = PotentialSpec::gaussian_well(1.0, 0.5, 2.0);
  return mp;
}

}  // namespace

TEST_SUITE("coupled") {

TEST_CASE("nontriviality radius") {
  const Fixture fx;
  const double expected = 0.5 * std::sqrt(6.0 * fx.ground.u.level);
  CHECK(nontriviality_radius(fx.model, fx.ground) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(0.5 * std::sqrt(7.2)).epsilon(1e-4));
}

TEST_CASE("decoupled pair is already a solution") {
  const Fixture fx;
  const SolveReport r = newton_solve_at_beta(fx.model, fx.ground.pair(), fx.ground);
  CHECK(r.newton_iters <= 2);
  CHECK(r.dist_to_uv < 1e-8);
  CHECK(r.energy == doctest::Approx(fx.ground.c0()).epsilon(1e-12));
}

TEST_CASE("Newton matches the proportional solution") {
  const Fixture fx;
  const double A = h_norm_sq(fx.ground.u.field, fx.model.potential());
  for (double beta : {0.01, 0.05, 0.2}) {
    const SolveReport r =
        newton_solve_at_beta(fx.model.with_beta(beta), fx.ground.pair(), fx.ground);
    const ProportionalPair ab = proportional_solution(beta);
    const StatePair oracle{ab.a * fx.ground.u.field, ab.b * fx.ground.u.field};
    CHECK(r.residual_norm < 1e-8);
    CHECK(pair_norm(fx.model, pair_difference(r.pair, oracle)) < 1e-7);
    CHECK(r.energy == doctest::Approx(A * proportional_energy(beta, ab)).epsilon(1e-9));
    CHECK(r.dist_to_uv == doctest::Approx(std::hypot(ab.a - 1.0, ab.b - 1.0) * std::sqrt(A)).epsilon(1e-6));
    CHECK(r.energy < fx.ground.c0());
    CHECK(r.dist_to_uv > 0.0);
  }
}

TEST_CASE("re-solving from a solution returns it") {
  const Fixture fx(asymmetric_params());
  const Model m = fx.model.with_beta(0.05);
  const SolveReport first = newton_solve_at_beta(m, fx.ground.pair(), fx.ground);
  const SolveReport again = newton_solve_at_beta(m, first.pair, fx.ground);
  CHECK(pair_norm(m, pair_difference(first.pair, again.pair)) < 1e-10);
  CHECK(std::min(first.norm_u, first.norm_v) > 0.5 * nontriviality_radius(m, fx.ground));
}

TEST_CASE("Newton failures are classified") {
  const Fixture fx;
  CHECK_THROWS_AS(newton_solve_at_beta(fx.model, {Field(fx.grid), fx.ground.v.field}, fx.ground),
                  std::invalid_argument);
  try {
    newton_solve_at_beta(fx.model.with_beta(1e6), fx.ground.pair(), fx.ground);
    FAIL("expected a failure far outside the small-coupling regime");
  } catch (const SolverError& e) {
    const bool classified = e.kind() == FailureKind::SemitrivialCollapse ||
                            e.kind() == FailureKind::Divergence;
    CHECK(classified);
  }
}

TEST_CASE("continuation") {
  const Fixture fx;
  SUBCASE("zero coupling only") {
    const auto reports = continuation_sweep(fx.model, fx.ground, {0.0});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].dist_to_uv < 1e-8);
    CHECK(reports[0].energy == doctest::Approx(fx.ground.c0()).epsilon(1e-12));
  }
  SUBCASE("distance and energy gap shrink with the coupling") {
    const auto reports = continuation_sweep(fx.model, fx.ground, {1e-3, 1e-2, 1e-1});
    REQUIRE(reports.size() == 3);
    const double c0 = fx.ground.c0();
    for (std::size_t k = 1; k < reports.size(); ++k) {
      CHECK(reports[k].dist_to_uv > reports[k - 1].dist_to_uv);
      CHECK(std::abs(reports[k].energy - c0) > std::abs(reports[k - 1].energy - c0));
      const double jr_prev = std::abs(j_ratio(fx.model, 1, reports[k - 1].pair.u) - 1.0);
      const double jr = std::abs(j_ratio(fx.model, 1, reports[k].pair.u) - 1.0);
      CHECK(jr > jr_prev);
    }
    for (const auto& r : reports) CHECK(r.dist_to_uv / r.beta < 10.0);
  }
  SUBCASE("schedule must be ascending") {
    CHECK_THROWS_AS(continuation_sweep(fx.model, fx.ground, {0.1, 0.01}), std::invalid_argument);
  }
  SUBCASE("failure carries the coupling and the completed reports") {
    try {
      continuation_sweep(fx.model, fx.ground, {0.01, 1e6});
      FAIL("expected continuation failure");
    } catch (const ContinuationError& e) {
      CHECK(e.beta() == 1e6);
      REQUIRE(e.completed().size() == 1);
      CHECK(e.completed()[0].beta == 0.01);
    }
  }
}

TEST_CASE("reference surface maximum") {
  const Fixture fx;
  const SurfaceBrackets br = surface_brackets(fx.model, fx.ground);
  SUBCASE("decoupled maximum sits at (1, 1)") {
    const SurfaceMax m0 = surface_max_m_beta(fx.model, fx.ground, br);
    CHECK(m0.m_beta == doctest::Approx(fx.ground.c0()).epsilon(1e-12));
    CHECK(m0.t == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m0.s == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("coupled maximum equals the proportional solution energy") {
    for (double beta : {0.001, 0.01, 0.1}) {
      const Model mb = fx.model.with_beta(beta);
      const SurfaceMax m = surface_max_m_beta(mb, fx.ground, br);
      const ProportionalPair ab = proportional_solution(beta);
      const double direct = energy_system(mb, {ab.a * fx.ground.u.field, ab.b * fx.ground.v.field});
      CHECK(m.m_beta == doctest::Approx(direct).epsilon(1e-12));
      CHECK(m.t == doctest::Approx(ab.a).epsilon(1e-8));
      CHECK(m.s == doctest::Approx(ab.b).epsilon(1e-8));
      CHECK(m.m_beta < fx.ground.c0());
    }
  }
  SUBCASE("maximum never exceeds the decoupled value") {
    const Fixture asym(asymmetric_params());
    const SurfaceBrackets b2 = surface_brackets(asym.model, asym.ground);
    for (double beta : {0.0, 0.05, 0.5}) {
      const double m = surface_max_m_beta(asym.model.with_beta(beta), asym.ground, b2).m_beta;
      CHECK(m <= asym.ground.c0() * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("minimax surface structure") {
  const Fixture fx;
  const SurfaceBrackets br = surface_brackets(fx.model, fx.ground);
  MinimaxSurface surface(fx.model, fx.ground, br, 9, 9);
  const auto& t = surface.t_samples();
  CHECK(t.front() == 0.0);
  CHECK(t.back() == doctest::Approx(br.t.t2));
  CHECK(std::count(t.begin(), t.end(), 1.0) == 1);
  CHECK(std::count(t.begin(), t.end(), br.t.t1) == 1);
  CHECK(std::is_sorted(t.begin(), t.end()));
  std::size_t one = 0;
  for (std::size_t j = 0; j < t.size(); ++j) if (t[j] == 1.0) one = j;
  const StatePair center = surface.node(one, one);
  CHECK(pair_norm(fx.model, pair_difference(center, fx.ground.pair())) == 0.0);
  CHECK(surface.energy(one, one) == doctest::Approx(fx.ground.c0()));
  for (std::size_t j = 0; j < surface.rows(); ++j) {
    for (std::size_t k = 0; k < surface.cols(); ++k) {
      const bool inside = t[j] > br.t.t1 && t[j] < br.t.t2 &&
                          surface.s_samples()[k] > br.s.t1 && surface.s_samples()[k] < br.s.t2;
      CHECK(surface.frozen(j, k) == !inside);
      CHECK(pair_norm(fx.model, surface.node(j, k)) <= surface.norm_cap());
    }
  }
  CHECK_THROWS_AS(surface.set_node(0, 0, center, 0.0), std::logic_error);
}

TEST_CASE("minimax estimate") {
  SUBCASE("decoupled estimate stays at the sum of ground levels") {
    const Fixture fx;
    MinimaxSurface surface(fx.model, fx.ground, surface_brackets(fx.model, fx.ground));
    const MinimaxEstimate est = surface_minimax_c_beta(fx.model, surface);
    CHECK(std::abs(est.c_beta_estimate - fx.ground.c0()) < 1e-3);
  }
  SUBCASE("ordering and shrinking gap") {
    const Fixture fx;
    const SurfaceBrackets br = surface_brackets(fx.model, fx.ground);
    double prev_gap = -1.0;
    for (double beta : {0.1, 0.01}) {
      const Model mb = fx.model.with_beta(beta);
      MinimaxSurface surface(mb, fx.ground, br);
      const MinimaxEstimate est = surface_minimax_c_beta(mb, surface);
      const double m = surface_max_m_beta(mb, fx.ground, br).m_beta;
      CHECK(est.c_beta_estimate <= m);
      CHECK(m <= fx.ground.c0());
      const double gap = std::abs(est.c_beta_estimate - fx.ground.c0());
      if (prev_gap >= 0.0) CHECK(gap < prev_gap);
      prev_gap = gap;
    }
  }
  SUBCASE("deformation lowers a perturbed surface and keeps the degree data") {
    const Fixture fx;
    const SurfaceBrackets br = surface_brackets(fx.model, fx.ground);
    const Model mb = fx.model.with_beta(0.1);
    MinimaxSurface surface(mb, fx.ground, br, 17, 17);
    const double reference_max = surface.max_energy();
    const double ju = j_ratio(mb, 1, fx.ground.u.field);
    const double jv = j_ratio(mb, 2, fx.ground.v.field);
    // Off-centre bump added to every free node, then each component is
    // rescaled back to its reference J_3 / J_4 value (p = 3: J(c w) = c J(w)).
    const Field bump = Field::sample(fx.grid, [](const std::array<double, 3>& x) {
      return 0.8 * std::exp(-(x[0] - 2.0) * (x[0] - 2.0));
    });
    for (std::size_t j = 0; j < surface.rows(); ++j) {
      for (std::size_t k = 0; k < surface.cols(); ++k) {
        if (surface.frozen(j, k)) continue;
        StatePair node = surface.node(j, k);
        node.u.add_scaled(surface.t_samples()[j], bump);
        node.v.add_scaled(surface.s_samples()[k], bump);
        node.u *= surface.t_samples()[j] * ju / j_ratio(mb, 1, node.u);
        node.v *= surface.s_samples()[k] * jv / j_ratio(mb, 2, node.v);
        const double e = energy_system(mb, node);
        surface.set_node(j, k, std::move(node), e);
      }
    }
    const double start = surface.max_energy();
    REQUIRE(start > reference_max);
    FlowControls controls;
    controls.max_iter = 60;
    const MinimaxEstimate est = surface_minimax_c_beta(mb, surface, controls);
    REQUIRE_FALSE(est.trace.empty());
    CHECK(est.c_beta_estimate < start);
    CHECK(est.c_beta_estimate - reference_max < 0.5 * (start - reference_max));
    for (std::size_t k = 1; k < est.trace.size(); ++k) CHECK(est.trace[k] <= est.trace[k - 1]);
    CHECK(est.c_beta_estimate == *std::min_element(est.trace.begin(), est.trace.end()));
    for (std::size_t j = 0; j < surface.rows(); ++j) {
      for (std::size_t k = 0; k < surface.cols(); ++k) {
        const StatePair node = surface.node(j, k);
        CHECK(pair_norm(mb, node) <= surface.norm_cap() * (1.0 + 1e-12));
        CHECK(surface.energy(j, k) == doctest::Approx(energy_system(mb, node)).epsilon(1e-12));
        if (pair_norm(mb, node) < 0.999 * surface.norm_cap()) {
          CHECK(j_ratio(mb, 1, node.u) == doctest::Approx(surface.t_samples()[j] * ju).epsilon(1e-10));
          CHECK(j_ratio(mb, 2, node.v) == doctest::Approx(surface.s_samples()[k] * jv).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("gradient gap probe") {
  const Fixture fx;
  const Model mb = fx.model.with_beta(0.01);
  const double d1 = nontriviality_radius(mb, fx.ground);
  const GapProbe small = gradient_gap_probe(mb, fx.ground, d1 / 4.0, 100, 7);
  CHECK(small.sampled == 100);
  CHECK(small.any_kept);
  CHECK(small.kept > 0);
  CHECK(small.delta_estimate > 0.0);
  const GapProbe large = gradient_gap_probe(mb, fx.ground, d1 / 4.0, 300, 7);
  CHECK(large.delta_estimate <= small.delta_estimate);
  const GapProbe repeat = gradient_gap_probe(mb, fx.ground, d1 / 4.0, 100, 7);
  CHECK(repeat.delta_estimate == small.delta_estimate);
  CHECK(repeat.kept == small.kept);
  CHECK_THROWS_AS(gradient_gap_probe(mb, fx.ground, 0.0, 100, 7), std::invalid_argument);
  CHECK_THROWS_AS(gradient_gap_probe(mb, fx.ground, d1 / 2.0, 100, 7), std::invalid_argument);
  CHECK_THROWS_AS(gradient_gap_probe(mb, fx.ground, d1 / 4.0, 99, 7), std::invalid_argument);
}

TEST_CASE("dual residual norm of a Riesz representative") {
  // For g = A w the dual norm is sqrt(<w, A w>).
  const Fixture fx;
  const Field w = fx.ground.u.field;
  Field g = laplacian_apply(w);
  g += hadamard(fx.model.potential(), w);
  const double expected = std::sqrt(h_norm_sq(w, fx.model.potential()));
  CHECK(dual_residual_norm(fx.model, {g, Field(fx.grid)}) == doctest::Approx(expected).epsilon(1e-9));
}

}  // TEST_SUITE

#include "nlsys/ground.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlsys {

std::string to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::NonConvergence:
      return "non-convergence";
    case FailureKind::Divergence:
      return "divergence";
    case FailureKind::SemitrivialCollapse:
      return "semitrivial collapse";
    case FailureKind::Bracketing:
      return "bracketing failure";
  }
  return "unknown";
}

namespace {

double scalar_energy(const ScalarProblem& pr, const Field& u) {
  return 0.5 * h_norm_sq(u, pr.potential) - pr.mu / pr.p * lp_norm_pow(u, pr.p);
}

Field scalar_residual(const ScalarProblem& pr, const Field& u) {
  Field g = laplacian_apply(u);
  const Field f = power_nonlinearity(u, pr.p);
  for (std::size_t k = 0; k < u.size(); ++k) {
    g[k] += pr.potential[k] * u[k] - pr.mu * f[k];
  }
  return g;
}

Field project(const ScalarProblem& pr, Field u) {
  const double quad = h_norm_sq(u, pr.potential);
  const double power = pr.mu * lp_norm_pow(u, pr.p);
  if (!(quad > 0.0) || !(power > 0.0)) {
    throw std::domain_error("descent iterate left the admissible cone");
  }
  u *= std::pow(quad / power, 1.0 / (pr.p - 2.0));
  return u;
}

}  // namespace

GroundState minimize_on_nehari(const ScalarProblem& pr, const Field& init,
                               const GroundOptions& options) {
  if (init.is_zero()) {
    throw std::invalid_argument("ground-state solver needs a nonzero start");
  }
  GroundState state{project(pr, init), 0.0, 0.0, 0.0, 0, false, {}};
  double energy = scalar_energy(pr, state.field);
  double step = options.initial_step;
  std::vector<double> history{energy};

  for (int it = 0;; ++it) {
    const Field g = scalar_residual(pr, state.field);
    state.residual_norm = std::sqrt(lp_norm_pow(g, 2.0));
    state.iterations = it;
    if (state.residual_norm < options.tol) break;
    if (options.stagnation_rtol > 0.0 &&
        static_cast<int>(history.size()) > options.stagnation_window) {
      const double past = history[history.size() - 1 - options.stagnation_window];
      if (past - energy <= options.stagnation_rtol * std::abs(energy)) {
        state.stagnated = true;
        break;
      }
    }
    if (it >= options.max_iter) {
      std::ostringstream msg;
      msg << "ground-state descent stopped after " << it
          << " iterations with residual " << state.residual_norm;
      throw SolverError(FailureKind::NonConvergence, msg.str());
    }

    const Field direction = pr.preconditioner.solve(g);
    const double slack = 1e-13 * std::max(1.0, std::abs(energy));
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving) {
      Field trial = state.field;
      trial.add_scaled(-step, direction);
      if (!trial.is_zero()) {
        trial = project(pr, std::move(trial));
        const double e = scalar_energy(pr, trial);
        if (e <= energy + slack) {
          state.field = std::move(trial);
          energy = e;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      throw SolverError(FailureKind::NonConvergence,
                        "ground-state line search found no admissible step");
    }
    history.push_back(energy);
    if (options.record_trace) state.energy_trace.push_back(energy);
    step = std::min(1.5 * step, options.max_step);
  }

  state.level = energy;
  state.nehari_gap = std::abs(h_norm_sq(state.field, pr.potential) -
                              pr.mu * lp_norm_pow(state.field, pr.p));
  return state;
}

Field default_initial_guess(const Grid& grid) {
  const double sigma = std::min(1.5, grid.half_width() / 4.0);
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return std::exp(-0.5 * r2 / (sigma * sigma));
  });
}

GroundState solve_ground_state(const Model& model, int i, const Field& init,
                               const GroundOptions& options) {
  require_same_grid(init, model.potential());
  const ScalarProblem problem{model.potential(), model.preconditioner(),
                              model.p(), model.mu(i)};
  return minimize_on_nehari(problem, init, options);
}

Field exact_soliton_1d(double p, double mu, double v_inf, const Grid& grid) {
  if (grid.dim() != 1) {
    throw std::invalid_argument("exact soliton is one-dimensional");
  }
  const double amplitude = std::pow(v_inf * p / (2.0 * mu), 1.0 / (p - 2.0));
  const double k = 0.5 * (p - 2.0) * std::sqrt(v_inf);
  const double power = 2.0 / (p - 2.0);
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    return amplitude * std::pow(1.0 / std::cosh(k * x[0]), power);
  });
}

double exact_soliton_level_1d(double p, double mu, double v_inf) {
  const double amplitude = std::pow(v_inf * p / (2.0 * mu), 1.0 / (p - 2.0));
  const double k = 0.5 * (p - 2.0) * std::sqrt(v_inf);
  // int sech^m = B(m/2, 1/2)
  const double m = 2.0 * p / (p - 2.0);
  const double sech_integral = std::tgamma(0.5 * m) * std::sqrt(std::numbers::pi) /
                               std::tgamma(0.5 * (m + 1.0));
  return (0.5 - 1.0 / p) * mu * std::pow(amplitude, p) * sech_integral / k;
}

double ray_profile(double p, double t) {
  return p / (p - 2.0) * (t * t - 2.0 / p * std::pow(t, p));
}

RayBracket bracket_ts(const Model& model, int i, const GroundState& ground) {
  const double ratio = j_ratio(model, i, ground.field);
  if (!(ground.level > 0.0) || std::abs(ratio - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "cannot bracket the ray: state is off the Nehari manifold (ratio "
        << ratio << ", level " << ground.level << ")";
    throw SolverError(FailureKind::Bracketing, msg.str());
  }
  const double p = model.p();
  auto f = [p](double t) { return ray_profile(p, t) - 0.25; };
  auto bisect = [&](double lo, double hi) {
    // f(lo) and f(hi) have opposite signs
    const bool rising = f(lo) < 0.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
      const double mid = 0.5 * (lo + hi);
      if ((f(mid) < 0.0) == rising) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  double upper = 2.0;
  while (f(upper) > 0.0) {
    upper *= 2.0;
    if (upper > 1e6) {
      throw SolverError(FailureKind::Bracketing, "ray profile never drops");
    }
  }
  return {bisect(0.0, 1.0), bisect(1.0, upper)};
}

double estimate_sbar_p(const Model& model, int i, const GroundOptions& options) {
  const Model autonomous =
      model.with_potential(PotentialSpec::constant(model.params().potential.v_inf));
  const GroundState ground = solve_ground_state(
      autonomous, i, default_initial_guess(model.grid()), options);
  return sbar_from_level(model.params(), i, ground.level);
}

}  // namespace nlsys

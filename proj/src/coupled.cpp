#include "nlsys/coupled.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nlsys/parallel.hpp"

namespace nlsys {

GroundPair solve_ground_pair(const Model& model, const GroundOptions& options) {
  const Field init = default_initial_guess(model.grid());
  return {solve_ground_state(model, 1, init, options),
          solve_ground_state(model, 2, init, options)};
}

double nontriviality_radius(const Model& model, const GroundPair& ground) {
  const double p = model.p();
  const double r1 = std::sqrt(2.0 * p * ground.u.level / (p - 2.0));
  const double r2 = std::sqrt(2.0 * p * ground.v.level / (p - 2.0));
  return 0.5 * std::min(r1, r2);
}

namespace {

std::vector<double> flatten(const StatePair& pair) {
  std::vector<double> x(pair.u.values().begin(), pair.u.values().end());
  x.insert(x.end(), pair.v.values().begin(), pair.v.values().end());
  return x;
}

SolveReport make_report(const Model& model, const GroundPair& ground,
                        StatePair pair, double residual, int iters) {
  const double energy = energy_system(model, pair);
  const double dist = pair_norm(model, pair_difference(pair, ground.pair()));
  const double nu = std::sqrt(h_norm_sq(pair.u, model.potential()));
  const double nv = std::sqrt(h_norm_sq(pair.v, model.potential()));
  return {model.beta(), std::move(pair), energy, residual, iters, dist, nu, nv};
}

}  // namespace

SolveReport newton_solve_at_beta(const Model& model, const StatePair& initial,
                                 const GroundPair& ground,
                                 const NewtonOptions& options) {
  require_same_grid(initial.u, initial.v);
  require_same_grid(initial.u, model.potential());
  if (initial.u.is_zero() || initial.v.is_zero()) {
    throw std::invalid_argument("Newton start must be nonzero in both components");
  }
  const Grid& grid = model.grid();
  const std::size_t n = grid.size();
  const double p = model.p();
  const double beta = model.beta();
  const Field& V = model.potential();

  StatePair pair = initial;
  StatePair g = residual_system(model, pair);
  double res = residual_norm(g);
  int it = 0;

  const LinearOperator precond = [&](const std::vector<double>& x,
                                     std::vector<double>& y) {
    y.resize(2 * n);
    Field a(grid, std::vector<double>(x.begin(), x.begin() + n));
    Field b(grid, std::vector<double>(x.begin() + n, x.end()));
    const Field sa = model.preconditioner().solve(a);
    const Field sb = model.preconditioner().solve(b);
    std::copy(sa.values().begin(), sa.values().end(), y.begin());
    std::copy(sb.values().begin(), sb.values().end(), y.begin() + n);
  };

  while (res >= options.tol) {
    if (it >= options.max_iter) {
      std::ostringstream msg;
      msg << "Newton did not converge at beta = " << beta << " after " << it
          << " iterations (residual " << res << ")";
      throw SolverError(FailureKind::Divergence, msg.str());
    }
    // Jacobian diagonal and coupling coefficients at the current iterate.
    std::vector<double> diag_u(n), diag_v(n), off(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = pair.u[k];
      const double v = pair.v[k];
      diag_u[k] = V[k] - (p - 1.0) * model.mu(1) * std::pow(std::abs(u), p - 2.0) -
                  beta * v;
      diag_v[k] = V[k] - (p - 1.0) * model.mu(2) * std::pow(std::abs(v), p - 2.0);
      off[k] = -beta * u;
    }
    const LinearOperator jacobian = [&](const std::vector<double>& x,
                                        std::vector<double>& y) {
      y.resize(2 * n);
      Field a(grid, std::vector<double>(x.begin(), x.begin() + n));
      Field b(grid, std::vector<double>(x.begin() + n, x.end()));
      const Field la = laplacian_apply(a);
      const Field lb = laplacian_apply(b);
      for (std::size_t k = 0; k < n; ++k) {
        y[k] = la[k] + diag_u[k] * a[k] + off[k] * b[k];
        y[n + k] = lb[k] + diag_v[k] * b[k] + off[k] * a[k];
      }
    };
    std::vector<double> rhs = flatten(g);
    for (double& x : rhs) x = -x;
    std::vector<double> step;
    minres(jacobian, precond, rhs, step, options.linear_rtol,
           options.linear_max_iter);
    const Field du(grid, std::vector<double>(step.begin(), step.begin() + n));
    const Field dv(grid, std::vector<double>(step.begin() + n, step.end()));

    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
      StatePair trial = pair;
      trial.u.add_scaled(alpha, du);
      trial.v.add_scaled(alpha, dv);
      StatePair gt = residual_system(model, trial);
      const double rt = residual_norm(gt);
      if (std::isfinite(rt) && rt < (1.0 - 1e-4 * alpha) * res) {
        pair = std::move(trial);
        g = std::move(gt);
        res = rt;
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) {
      std::ostringstream msg;
      msg << "Newton line search failed at beta = " << beta << " (residual "
          << res << ")";
      throw SolverError(FailureKind::Divergence, msg.str());
    }
  }

  SolveReport report = make_report(model, ground, std::move(pair), res, it);
  const double threshold = 0.5 * nontriviality_radius(model, ground);
  if (std::min(report.norm_u, report.norm_v) <= threshold) {
    std::ostringstream msg;
    msg << "Newton converged to a semitrivial pair at beta = " << beta
        << " (|u| = " << report.norm_u << ", |v| = " << report.norm_v
        << ", threshold " << threshold << ")";
    throw SolverError(FailureKind::SemitrivialCollapse, msg.str());
  }
  return report;
}

ContinuationError::ContinuationError(const SolverError& cause, double beta,
                                     std::vector<SolveReport> completed)
    : SolverError(cause.kind(), cause.what()),
      beta_(beta),
      completed_(std::move(completed)) {}

std::vector<SolveReport> continuation_sweep(const Model& model,
                                            const GroundPair& ground,
                                            const std::vector<double>& betas,
                                            const NewtonOptions& options) {
  if (!std::is_sorted(betas.begin(), betas.end())) {
    throw std::invalid_argument("continuation schedule must be ascending");
  }
  std::vector<SolveReport> reports;
  StatePair start = ground.pair();
  for (double beta : betas) {
    try {
      reports.push_back(
          newton_solve_at_beta(model.with_beta(beta), start, ground, options));
    } catch (const SolverError& e) {
      throw ContinuationError(e, beta, reports);
    }
    start = reports.back().pair;
  }
  return reports;
}

double dual_residual_norm(const Model& model, const StatePair& residual) {
  const Grid& grid = model.grid();
  const Field& V = model.potential();
  const LinearOperator op = [&](const std::vector<double>& x,
                                std::vector<double>& y) {
    const Field f(grid, x);
    const Field lf = laplacian_apply(f);
    y.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = lf[k] + V[k] * x[k];
  };
  const LinearOperator precond = [&](const std::vector<double>& x,
                                     std::vector<double>& y) {
    const Field s = model.preconditioner().solve(Field(grid, x));
    y.assign(s.values().begin(), s.values().end());
  };
  double total = 0.0;
  for (const Field* g : {&residual.u, &residual.v}) {
    std::vector<double> rhs(g->values().begin(), g->values().end());
    std::vector<double> w(rhs.size(), 0.0);
    const KrylovResult kr = pcg(op, precond, rhs, w, 1e-12, 1000);
    if (!kr.converged) {
      throw SolverError(FailureKind::NonConvergence,
                        "dual norm solve did not converge");
    }
    total += inner(*g, Field(grid, std::move(w)));
  }
  return std::sqrt(std::max(total, 0.0));
}

GapProbe gradient_gap_probe(const Model& model, const GroundPair& ground,
                            double d, int n_samples, std::uint64_t seed) {
  const double d1 = nontriviality_radius(model, ground);
  if (!(d > 0.0) || !(d < 0.5 * d1)) {
    throw std::invalid_argument("probe radius must lie in (0, d1/2)");
  }
  if (n_samples < 100) throw std::invalid_argument("need at least 100 samples");
  const Grid& grid = model.grid();
  const double m_beta =
      surface_max_m_beta(model, ground, surface_brackets(model, ground)).m_beta;
  const Field& V = model.potential();
  const double norm_u = std::sqrt(h_norm_sq(ground.u.field, V));
  const double norm_v = std::sqrt(h_norm_sq(ground.v.field, V));

  // Directions are drawn serially so the sample set depends only on the seed.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.5 * d, d);
  auto smooth_noise = [&] {
    Field w(grid);
    for (double& x : w.values()) x = gauss(rng);
    Field s = model.preconditioner().solve(w);
    s *= 1.0 / std::sqrt(h_norm_sq(s, V));
    return s;
  };
  std::vector<StatePair> samples;
  samples.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    Field phi = (gauss(rng) / norm_u) * ground.u.field;
    phi.add_scaled(0.5, smooth_noise());
    Field psi = (gauss(rng) / norm_v) * ground.v.field;
    psi.add_scaled(0.5, smooth_noise());
    const double scale = radius(rng) / pair_norm(model, {phi, psi});
    StatePair pt = ground.pair();
    pt.u.add_scaled(scale, phi);
    pt.v.add_scaled(scale, psi);
    samples.push_back(std::move(pt));
  }

  std::vector<double> gap(samples.size(), -1.0);
  parallel_for(samples.size(), [&](std::size_t k) {
    if (energy_system(model, samples[k]) <= m_beta) {
      gap[k] = dual_residual_norm(model, residual_system(model, samples[k]));
    }
  });

  GapProbe probe;
  probe.sampled = n_samples;
  for (double x : gap) {
    if (x < 0.0) continue;
    probe.delta_estimate =
        probe.any_kept ? std::min(probe.delta_estimate, x) : x;
    probe.any_kept = true;
    ++probe.kept;
  }
  return probe;
}

}  // namespace nlsys

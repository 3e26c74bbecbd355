#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsys/coupled.hpp"

namespace nlsys {

SurfaceBrackets surface_brackets(const Model& model, const GroundPair& ground) {
  return {bracket_ts(model, 1, ground.u), bracket_ts(model, 2, ground.v)};
}

namespace {

// I_beta(t U, s V) = A1 t^2/2 - B1 t^p/p + A2 s^2/2 - B2 s^p/p - (beta/2) K t^2 s
struct SurfacePolynomial {
  double p, beta, a1, b1, a2, b2, k;

  double value(double t, double s) const {
    return 0.5 * a1 * t * t - b1 * std::pow(t, p) / p + 0.5 * a2 * s * s -
           b2 * std::pow(s, p) / p - 0.5 * beta * k * t * t * s;
  }
};

SurfacePolynomial surface_polynomial(const Model& model,
                                     const GroundPair& ground) {
  const Field& U = ground.u.field;
  const Field& V = ground.v.field;
  const double p = model.p();
  return {p,
          model.beta(),
          h_norm_sq(U, model.potential()),
          model.mu(1) * lp_norm_pow(U, p),
          h_norm_sq(V, model.potential()),
          model.mu(2) * lp_norm_pow(V, p),
          integrate(hadamard(hadamard(U, U), V))};
}

std::vector<double> samples_with(double hi, int n, std::initializer_list<double> extra) {
  std::vector<double> out;
  for (int j = 0; j < n; ++j) out.push_back(hi * j / (n - 1));
  out.insert(out.end(), extra);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

}  // namespace

SurfaceMax surface_max_m_beta(const Model& model, const GroundPair& ground,
                              const SurfaceBrackets& brackets) {
  const SurfacePolynomial poly = surface_polynomial(model, ground);
  const double t2 = brackets.t.t2;
  const double s2 = brackets.s.t2;
  constexpr int kScan = 201;

  SurfaceMax best{poly.value(0.0, 0.0), 0.0, 0.0};
  for (int j = 0; j < kScan; ++j) {
    const double t = t2 * j / (kScan - 1);
    for (int k = 0; k < kScan; ++k) {
      const double s = s2 * k / (kScan - 1);
      const double e = poly.value(t, s);
      if (e > best.m_beta) best = {e, t, s};
    }
  }

  // Newton on the gradient from the best sample; kept only if it stays in Q
  // and does not lower the value.
  const double p = poly.p;
  double t = best.t;
  double s = best.s;
  for (int it = 0; it < 50; ++it) {
    const double gt = poly.a1 * t - poly.b1 * std::pow(t, p - 1.0) -
                      poly.beta * poly.k * t * s;
    const double gs = poly.a2 * s - poly.b2 * std::pow(s, p - 1.0) -
                      0.5 * poly.beta * poly.k * t * t;
    const double htt = poly.a1 - (p - 1.0) * poly.b1 * std::pow(t, p - 2.0) -
                       poly.beta * poly.k * s;
    const double hts = -poly.beta * poly.k * t;
    const double hss = poly.a2 - (p - 1.0) * poly.b2 * std::pow(s, p - 2.0);
    const double det = htt * hss - hts * hts;
    if (!(std::abs(det) > 0.0)) break;
    const double dt = (hss * gt - hts * gs) / det;
    const double ds = (htt * gs - hts * gt) / det;
    t -= dt;
    s -= ds;
    if (!(t >= 0.0 && t <= t2 && s >= 0.0 && s <= s2)) break;
    if (std::abs(dt) + std::abs(ds) < 1e-15) break;
  }
  if (t >= 0.0 && t <= t2 && s >= 0.0 && s <= s2) {
    const double e = poly.value(t, s);
    if (e >= best.m_beta) best = {e, t, s};
  }
  return best;
}

MinimaxSurface::MinimaxSurface(const Model& model, const GroundPair& ground,
                               const SurfaceBrackets& brackets, int n_t, int n_s)
    : ground_(ground), brackets_(brackets) {
  if (n_t < 3 || n_s < 3) throw std::invalid_argument("surface needs >= 3 samples per axis");
  t_ = samples_with(brackets.t.t2, n_t, {brackets.t.t1, 1.0});
  s_ = samples_with(brackets.s.t2, n_s, {brackets.s.t1, 1.0});
  moved_.resize(t_.size() * s_.size());
  energy_.resize(t_.size() * s_.size());
  for (std::size_t j = 0; j < t_.size(); ++j) {
    for (std::size_t k = 0; k < s_.size(); ++k) {
      energy_[j * s_.size() + k] = energy_system(model, node(j, k));
    }
  }
  const double nu = std::sqrt(h_norm_sq(ground.u.field, model.potential()));
  const double nv = std::sqrt(h_norm_sq(ground.v.field, model.potential()));
  norm_cap_ = 2.0 * std::max(nu, nv) +
              std::hypot(brackets.t.t2 * nu, brackets.s.t2 * nv);
}

bool MinimaxSurface::frozen(std::size_t j, std::size_t k) const {
  const double t = t_.at(j);
  const double s = s_.at(k);
  return !(t > brackets_.t.t1 && t < brackets_.t.t2 && s > brackets_.s.t1 &&
           s < brackets_.s.t2);
}

StatePair MinimaxSurface::node(std::size_t j, std::size_t k) const {
  const auto& m = moved_.at(j * s_.size() + k);
  if (m) return *m;
  return {t_[j] * ground_.u.field, s_[k] * ground_.v.field};
}

void MinimaxSurface::set_node(std::size_t j, std::size_t k, StatePair state,
                              double energy) {
  if (frozen(j, k)) throw std::logic_error("cannot move a frozen surface node");
  moved_.at(j * s_.size() + k) = std::move(state);
  energy_[j * s_.size() + k] = energy;
}

double MinimaxSurface::max_energy() const {
  return *std::max_element(energy_.begin(), energy_.end());
}

MinimaxEstimate surface_minimax_c_beta(const Model& model,
                                       MinimaxSurface& surface,
                                       const FlowControls& controls) {
  const double p = model.p();
  const std::size_t rows = surface.rows();
  const std::size_t cols = surface.cols();
  std::vector<double> tau(rows * cols, controls.initial_step);

  MinimaxEstimate out;
  const double initial_max = surface.max_energy();
  out.c_beta_estimate = initial_max;

  auto restore = [&](Field& f, int i, double target) {
    const double now = j_ratio(model, i, f);
    if (now > 0.0 && target > 0.0) f *= std::pow(target / now, 1.0 / (p - 2.0));
  };

  for (int iter = 0; iter < controls.max_iter; ++iter) {
    const double top = surface.max_energy();
    const double floor = top - controls.band * std::abs(top);
    bool any_moved = false;
    for (std::size_t j = 0; j < rows; ++j) {
      for (std::size_t k = 0; k < cols; ++k) {
        if (surface.frozen(j, k) || surface.energy(j, k) < floor) continue;
        const StatePair cur = surface.node(j, k);
        const double e0 = surface.energy(j, k);
        const double j3 = j_ratio(model, 1, cur.u);
        const double j4 = j_ratio(model, 2, cur.v);
        const StatePair g = residual_system(model, cur);
        const Field du = model.preconditioner().solve(g.u);
        const Field dv = model.preconditioner().solve(g.v);
        double& step = tau[j * cols + k];
        for (int halving = 0; halving < 30; ++halving) {
          StatePair trial = cur;
          trial.u.add_scaled(-step, du);
          trial.v.add_scaled(-step, dv);
          restore(trial.u, 1, j3);
          restore(trial.v, 2, j4);
          const double nrm = pair_norm(model, trial);
          if (nrm > surface.norm_cap()) {
            trial.u *= surface.norm_cap() / nrm;
            trial.v *= surface.norm_cap() / nrm;
          }
          const double e = energy_system(model, trial);
          if (std::isfinite(e) && e < e0 - 1e-14 * std::abs(e0)) {
            surface.set_node(j, k, std::move(trial), e);
            step = std::min(1.5 * step, controls.max_step);
            any_moved = true;
            break;
          }
          step *= 0.5;
        }
      }
    }
    out.trace.push_back(surface.max_energy());
    out.c_beta_estimate = std::min(out.c_beta_estimate, out.trace.back());
    if (!any_moved) return out;
    const std::size_t m = out.trace.size();
    const std::size_t w = static_cast<std::size_t>(controls.stall_window);
    if (m > w && out.trace[m - 1 - w] - out.trace[m - 1] <=
                     controls.stall_rtol * std::abs(out.trace[m - 1])) {
      return out;
    }
  }
  out.budget_exhausted = true;
  return out;
}

}  // namespace nlsys

#include "nlsys/functional.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsys {

double ModelParams::mu(int i) const {
  if (i == 1) return mu1;
  if (i == 2) return mu2;
  throw std::invalid_argument("equation index must be 1 or 2, got " +
                              std::to_string(i));
}

void ModelParams::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  if (!(p > 2.0)) throw std::invalid_argument("exponent p must exceed 2");
  if (dim == 3 && !(p < 5.0)) {
    throw std::invalid_argument("exponent p must be below 5 in 3D");
  }
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) {
    throw std::invalid_argument("mu1 and mu2 must be positive");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  potential.validate();
}

Model::Model(ModelParams params, const Grid& grid)
    : params_(std::move(params)), grid_(grid) {
  params_.validate();
  if (params_.dim != grid.dim()) {
    throw std::invalid_argument("model dimension does not match grid");
  }
  potential_ = std::make_shared<const Field>(
      sample_potential(params_.potential, grid_));
  precond_ =
      std::make_shared<const DirichletSolver>(grid_, params_.potential.v_inf);
}

Model Model::with_beta(double beta) const {
  Model copy = *this;
  copy.params_.beta = beta;
  copy.params_.validate();
  return copy;
}

Model Model::with_potential(const PotentialSpec& spec) const {
  ModelParams params = params_;
  params.potential = spec;
  return Model(params, grid_);
}

double pair_norm(const Model& model, const StatePair& pair) {
  return std::sqrt(h_norm_sq(pair.u, model.potential()) +
                   h_norm_sq(pair.v, model.potential()));
}

StatePair pair_difference(const StatePair& a, const StatePair& b) {
  return {a.u - b.u, a.v - b.v};
}

Field power_nonlinearity(const Field& u, double p) {
  Field out(u.grid());
  const double q = p - 2.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = u[i];
    out[i] = (q == 1.0 ? std::abs(x) : std::pow(std::abs(x), q)) * x;
  }
  return out;
}

double energy_single(const Model& model, int i, const Field& u) {
  const double p = model.p();
  return 0.5 * h_norm_sq(u, model.potential()) -
         model.mu(i) / p * lp_norm_pow(u, p);
}

double energy_system(const Model& model, const StatePair& pair) {
  require_same_grid(pair.u, pair.v);
  double value = energy_single(model, 1, pair.u) + energy_single(model, 2, pair.v);
  if (model.beta() != 0.0) {
    value -= 0.5 * model.beta() * inner(hadamard(pair.u, pair.u), pair.v);
  }
  return value;
}

Field residual_single(const Model& model, int i, const Field& u) {
  Field g = laplacian_apply(u);
  const Field& V = model.potential();
  const Field f = power_nonlinearity(u, model.p());
  const double mu = model.mu(i);
  for (std::size_t k = 0; k < u.size(); ++k) g[k] += V[k] * u[k] - mu * f[k];
  return g;
}

StatePair residual_system(const Model& model, const StatePair& pair) {
  require_same_grid(pair.u, pair.v);
  StatePair g{residual_single(model, 1, pair.u),
              residual_single(model, 2, pair.v)};
  const double beta = model.beta();
  if (beta != 0.0) {
    for (std::size_t k = 0; k < pair.u.size(); ++k) {
      const double u = pair.u[k];
      g.u[k] -= beta * u * pair.v[k];
      g.v[k] -= 0.5 * beta * u * u;
    }
  }
  return g;
}

double residual_norm(const StatePair& residual) {
  return std::sqrt(lp_norm_pow(residual.u, 2.0) + lp_norm_pow(residual.v, 2.0));
}

NehariProjection nehari_project(const Model& model, int i, const Field& u) {
  if (u.is_zero()) {
    throw std::invalid_argument("Nehari projection of the zero field");
  }
  const double p = model.p();
  const double quad = h_norm_sq(u, model.potential());
  const double power = model.mu(i) * lp_norm_pow(u, p);
  if (!(quad > 0.0)) {
    throw std::domain_error("quadratic form is not positive on this field");
  }
  const double t = std::pow(quad / power, 1.0 / (p - 2.0));
  NehariProjection out{t, t * u, 0.0};
  out.energy = (0.5 - 1.0 / p) * std::pow(t, p) * power;
  return out;
}

double j_ratio(const Model& model, int i, const Field& u) {
  if (u.is_zero()) return 0.0;
  return model.mu(i) * lp_norm_pow(u, model.p()) /
         h_norm_sq(u, model.potential());
}

double c_star(const ModelParams& params, int i, double sbar_p) {
  if (!(sbar_p > 0.0)) throw std::invalid_argument("S_p must be positive");
  const double p = params.p;
  const double mu = params.mu(i);
  return mu * (0.5 - 1.0 / p) * std::pow(sbar_p / mu, p / (p - 2.0));
}

double sbar_from_level(const ModelParams& params, int i, double level) {
  if (!(level > 0.0)) throw std::invalid_argument("level must be positive");
  const double p = params.p;
  const double mu = params.mu(i);
  return mu * std::pow(level / (mu * (0.5 - 1.0 / p)), (p - 2.0) / p);
}

}  // namespace nlsys

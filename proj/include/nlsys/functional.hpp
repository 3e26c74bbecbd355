#ifndef NLSYS_FUNCTIONAL_HPP
#define NLSYS_FUNCTIONAL_HPP

#include <memory>

#include "nlsys/grid.hpp"
#include "nlsys/linalg.hpp"
#include "nlsys/potential.hpp"

namespace nlsys {

/// Parameters of the coupled system
///   -Lap u + V u = mu1 |u|^{p-2} u + beta u v
///   -Lap v + V v = mu2 |v|^{p-2} v + (beta/2) u^2
/// which is the Euler-Lagrange system of
///   I_beta(u, v) = J_1(u) + J_2(v) - (beta/2) int u^2 v,
///   J_i(u) = 1/2 ||u||^2 - (mu_i/p) int |u|^p.
struct ModelParams {
  int dim = 1;
  double p = 3.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double beta = 0.0;
  PotentialSpec potential = PotentialSpec::constant(1.0);

  double mu(int i) const;
  /// 2 < p, p < 5 in 3D, mu_i > 0, beta >= 0, valid potential.
  void validate() const;
};

/// ModelParams bound to a grid: potential samples and the preconditioner
/// (-Lap_h + V_inf)^{-1} are built once and shared by copies.
class Model {
 public:
  Model(ModelParams params, const Grid& grid);

  const ModelParams& params() const { return params_; }
  const Grid& grid() const { return grid_; }
  const Field& potential() const { return *potential_; }
  const DirichletSolver& preconditioner() const { return *precond_; }
  double p() const { return params_.p; }
  double beta() const { return params_.beta; }
  double mu(int i) const { return params_.mu(i); }

  /// Same grid, potential and exponent with a different coupling.
  Model with_beta(double beta) const;
  /// Same grid and exponents with another potential.
  Model with_potential(const PotentialSpec& spec) const;

 private:
  ModelParams params_;
  Grid grid_;
  std::shared_ptr<const Field> potential_;
  std::shared_ptr<const DirichletSolver> precond_;
};

struct StatePair {
  Field u;
  Field v;
};

/// Norm of the pair in H: sqrt(||u||^2 + ||v||^2).
double pair_norm(const Model& model, const StatePair& pair);
StatePair pair_difference(const StatePair& a, const StatePair& b);

/// |u|^{p-2} u, zero at u = 0 for any p > 2.
Field power_nonlinearity(const Field& u, double p);

double energy_single(const Model& model, int i, const Field& u);
double energy_system(const Model& model, const StatePair& pair);

/// L^2 gradient of J_i.
Field residual_single(const Model& model, int i, const Field& u);
/// L^2 gradient of I_beta.
StatePair residual_system(const Model& model, const StatePair& pair);
/// sqrt(|g_u|_2^2 + |g_v|_2^2)
double residual_norm(const StatePair& residual);

struct NehariProjection {
  double t;
  Field projected;
  /// max_{s > 0} J_i(s u)
  double energy;
};

/// Scales u onto N_i = {<J_i'(u), u> = 0}; throws on u = 0.
NehariProjection nehari_project(const Model& model, int i, const Field& u);

/// mu_i |u|_p^p / ||u||^2, and 0 for u = 0. Equals 1 exactly on N_i.
double j_ratio(const Model& model, int i, const Field& u);

/// mu_i (1/2 - 1/p) (S_p / mu_i)^{p/(p-2)}
double c_star(const ModelParams& params, int i, double sbar_p);

/// Inverse of c_star: the S_p reproducing a ray-maximum level `level`.
double sbar_from_level(const ModelParams& params, int i, double level);

}  // namespace nlsys

#endif  // NLSYS_FUNCTIONAL_HPP

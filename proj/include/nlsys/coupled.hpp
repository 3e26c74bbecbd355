#ifndef NLSYS_COUPLED_HPP
#define NLSYS_COUPLED_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "nlsys/ground.hpp"

namespace nlsys {

/// Ground states U (equation 1) and V (equation 2) with their levels.
struct GroundPair {
  GroundState u;
  GroundState v;

  StatePair pair() const { return {u.field, v.field}; }
  /// c_1 + c_2
  double c0() const { return u.level + v.level; }
};

GroundPair solve_ground_pair(const Model& model,
                             const GroundOptions& options = {});

/// d_1 = 1/2 min_i sqrt(2 p c_i / (p - 2)); components below d_1 / 2 count
/// as collapsed.
double nontriviality_radius(const Model& model, const GroundPair& ground);

struct NewtonOptions {
  double tol = 1e-8;
  int max_iter = 50;
  double linear_rtol = 1e-3;
  int linear_max_iter = 2000;
};

struct SolveReport {
  double beta = 0.0;
  StatePair pair;
  double energy = 0.0;
  double residual_norm = 0.0;
  int newton_iters = 0;
  /// H-norm of (u - U, v - V).
  double dist_to_uv = 0.0;
  double norm_u = 0.0;
  double norm_v = 0.0;
};

/// Damped Newton on residual_system at model.beta(). The Jacobian
///   (phi, psi) -> (-Lap phi + V phi - (p-1) mu1 |u|^{p-2} phi - beta v phi
///                  - beta u psi,
///                  -Lap psi + V psi - (p-1) mu2 |v|^{p-2} psi - beta u phi)
/// is applied matrix-free and inverted by preconditioned MINRES.
/// Throws SolverError with kind Divergence or SemitrivialCollapse.
SolveReport newton_solve_at_beta(const Model& model, const StatePair& initial,
                                 const GroundPair& ground,
                                 const NewtonOptions& options = {});

/// Newton failure during continuation, tagged with the offending beta.
class ContinuationError : public SolverError {
 public:
  ContinuationError(const SolverError& cause, double beta,
                    std::vector<SolveReport> completed);
  double beta() const { return beta_; }
  /// Reports for the betas solved before the failure.
  const std::vector<SolveReport>& completed() const { return completed_; }

 private:
  double beta_;
  std::vector<SolveReport> completed_;
};

/// Solves at each beta in ascending order, warm-starting from the previous
/// solution; the first solve starts from (U, V).
std::vector<SolveReport> continuation_sweep(const Model& model,
                                            const GroundPair& ground,
                                            const std::vector<double>& betas,
                                            const NewtonOptions& options = {});

struct SurfaceBrackets {
  RayBracket t;
  RayBracket s;
};

SurfaceBrackets surface_brackets(const Model& model, const GroundPair& ground);

struct SurfaceMax {
  double m_beta = 0.0;
  double t = 0.0;
  double s = 0.0;
};

/// max over Q = [0, t2] x [0, s2] of I_beta(t U, s V). Uses the exact
/// polynomial form of I_beta on the reference surface, a 201 x 201 scan and
/// a Newton polish of the best sample.
SurfaceMax surface_max_m_beta(const Model& model, const GroundPair& ground,
                              const SurfaceBrackets& brackets);

/// Discrete member of the admissible surface class: node states over a
/// tensor sample of Q, frozen to (t U, s V) outside (t1, t2) x (s1, s2), with
/// every node inside the ball of radius 2 C_bar + C_0.
class MinimaxSurface {
 public:
  /// Uniform samples on [0, t2] and [0, s2] plus the points t1, 1 and s1, 1
  /// so that (U, V) itself is a node.
  MinimaxSurface(const Model& model, const GroundPair& ground,
                 const SurfaceBrackets& brackets, int n_t = 33, int n_s = 33);

  const std::vector<double>& t_samples() const { return t_; }
  const std::vector<double>& s_samples() const { return s_; }
  std::size_t rows() const { return t_.size(); }
  std::size_t cols() const { return s_.size(); }

  bool frozen(std::size_t j, std::size_t k) const;
  StatePair node(std::size_t j, std::size_t k) const;
  /// Replaces a free node; throws for frozen ones.
  void set_node(std::size_t j, std::size_t k, StatePair state, double energy);
  double energy(std::size_t j, std::size_t k) const {
    return energy_[j * s_.size() + k];
  }
  double max_energy() const;
  double norm_cap() const { return norm_cap_; }
  const GroundPair& ground() const { return ground_; }

 private:
  GroundPair ground_;
  SurfaceBrackets brackets_;
  std::vector<double> t_;
  std::vector<double> s_;
  std::vector<std::optional<StatePair>> moved_;
  std::vector<double> energy_;
  double norm_cap_ = 0.0;
};

struct FlowControls {
  int max_iter = 200;
  /// Nodes within this relative distance of the surface max are deformed.
  double band = 0.05;
  double initial_step = 0.5;
  double max_step = 1.5;
  /// Stop when the recorded max improved by less than this (relative) over
  /// `stall_window` iterations.
  double stall_rtol = 1e-12;
  int stall_window = 20;
};

struct MinimaxEstimate {
  double c_beta_estimate = 0.0;
  /// Surface max after each deformation sweep.
  std::vector<double> trace;
  bool budget_exhausted = false;
};

/// Pushes the surface max down by preconditioned descent of near-max free
/// nodes. Each accepted node step is followed by a per-component rescaling
/// restoring J_3(u) and J_4(v) at that node, so the map
///   r(gamma)(t, s) = (J_3 - J_4, J_3 + J_4 - 2)
/// is unchanged by the deformation. Nodes leaving the norm ball are scaled
/// back to its boundary. Returns the smallest recorded max.
MinimaxEstimate surface_minimax_c_beta(const Model& model,
                                       MinimaxSurface& surface,
                                       const FlowControls& controls = {});

struct GapProbe {
  double delta_estimate = 0.0;
  int sampled = 0;
  int kept = 0;
  bool any_kept = false;
};

/// Norm of the residual pair in the dual of H, sqrt(<g, A^{-1} g>) per
/// component with A = -Lap_h + V.
double dual_residual_norm(const Model& model, const StatePair& residual);

/// Monte-Carlo witness for a positive gradient lower bound on the annulus
/// d/2 <= |(u, v) - (U, V)| <= d inside the sublevel set {I_beta <= m_beta}.
GapProbe gradient_gap_probe(const Model& model, const GroundPair& ground,
                            double d, int n_samples, std::uint64_t seed);

}  // namespace nlsys

#endif  // NLSYS_COUPLED_HPP

#ifndef NLSYS_POTENTIAL_HPP
#define NLSYS_POTENTIAL_HPP

#include <array>
#include <optional>
#include <string>

#include "nlsys/grid.hpp"

namespace nlsys {

enum class PotentialKind { Constant, GaussianWell, SignChanging };

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

/// V(x) = v_inf - depth * exp(-|x|^2 / width^2); Constant ignores depth.
///
/// A plain aggregate so hypothesis checkers can be fed hand-built specs; the
/// named constructors validate.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Constant;
  double v_inf = 1.0;
  double depth = 0.0;
  double width = 1.0;

  static PotentialSpec constant(double v_inf);
  static PotentialSpec gaussian_well(double v_inf, double depth, double width);
  static PotentialSpec sign_changing(double v_inf, double depth, double width);

  /// Throws std::invalid_argument on a spec violating its family's rules.
  void validate() const;

  bool operator==(const PotentialSpec&) const = default;
};

double eval_potential(const PotentialSpec& spec, const std::array<double, 3>& x);

Field sample_potential(const PotentialSpec& spec, const Grid& grid);

/// ||u||^2 with V sampled from `spec`.
double h_norm_sq(const Field& u, const PotentialSpec& spec);

struct V1Report {
  bool holds = true;
  /// max over nodes of V(x) - v_inf, clipped at zero.
  double max_violation = 0.0;
};

/// V(x) <= V_inf at every grid node, no tolerance.
V1Report check_V1(const PotentialSpec& spec, const Grid& grid);

struct V0Report {
  /// False for dim 1 and 2 where the critical Sobolev bound has no meaning.
  bool applicable = false;
  double integral = 0.0;
  double bound = 0.0;
  bool holds = true;
};

/// int max(-V, 0)^{N/2} < S, evaluated by grid quadrature in 3D.
V0Report check_V0(const PotentialSpec& spec, const Grid& grid,
                  double sobolev_S);

}  // namespace nlsys

#endif  // NLSYS_POTENTIAL_HPP

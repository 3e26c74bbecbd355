#include "nlsys/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlsys {

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Constant:
      return "constant";
    case PotentialKind::GaussianWell:
      return "gaussian_well";
    case PotentialKind::SignChanging:
      return "sign_changing";
  }
  return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name) {
  if (name == "constant") return PotentialKind::Constant;
  if (name == "gaussian_well") return PotentialKind::GaussianWell;
  if (name == "sign_changing") return PotentialKind::SignChanging;
  throw std::invalid_argument("unknown potential family '" + name + "'");
}

PotentialSpec PotentialSpec::constant(double v_inf) {
  PotentialSpec s{PotentialKind::Constant, v_inf, 0.0, 1.0};
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::gaussian_well(double v_inf, double depth,
                                           double width) {
  PotentialSpec s{PotentialKind::GaussianWell, v_inf, depth, width};
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::sign_changing(double v_inf, double depth,
                                           double width) {
  PotentialSpec s{PotentialKind::SignChanging, v_inf, depth, width};
  s.validate();
  return s;
}

void PotentialSpec::validate() const {
  if (!(v_inf > 0.0)) throw std::invalid_argument("V_inf must be positive");
  if (!(width > 0.0)) throw std::invalid_argument("well width must be positive");
  switch (kind) {
    case PotentialKind::Constant:
      if (depth != 0.0) {
        throw std::invalid_argument("constant potential must have depth 0");
      }
      break;
    case PotentialKind::GaussianWell:
      if (depth < 0.0) throw std::invalid_argument("well depth must be >= 0");
      break;
    case PotentialKind::SignChanging:
      if (!(depth > v_inf)) {
        throw std::invalid_argument(
            "sign-changing potential needs depth > V_inf");
      }
      break;
  }
}

double eval_potential(const PotentialSpec& spec,
                      const std::array<double, 3>& x) {
  if (spec.kind == PotentialKind::Constant) return spec.v_inf;
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return spec.v_inf - spec.depth * std::exp(-r2 / (spec.width * spec.width));
}

Field sample_potential(const PotentialSpec& spec, const Grid& grid) {
  return Field::sample(
      grid, [&](const std::array<double, 3>& x) { return eval_potential(spec, x); });
}

double h_norm_sq(const Field& u, const PotentialSpec& spec) {
  return h_norm_sq(u, sample_potential(spec, u.grid()));
}

V1Report check_V1(const PotentialSpec& spec, const Grid& grid) {
  V1Report report;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double excess = eval_potential(spec, grid.position(i)) - spec.v_inf;
    if (excess > 0.0) {
      report.holds = false;
      report.max_violation = std::max(report.max_violation, excess);
    }
  }
  return report;
}

V0Report check_V0(const PotentialSpec& spec, const Grid& grid,
                  double sobolev_S) {
  V0Report report;
  report.bound = sobolev_S;
  if (grid.dim() != 3) return report;
  if (!(sobolev_S > 0.0)) {
    throw std::invalid_argument("Sobolev constant must be positive");
  }
  report.applicable = true;
  const double exponent = grid.dim() / 2.0;
  Field negative_part = Field::sample(grid, [&](const std::array<double, 3>& x) {
    return std::pow(std::max(-eval_potential(spec, x), 0.0), exponent);
  });
  report.integral = integrate(negative_part);
  report.holds = report.integral < sobolev_S;
  return report;
}

}  // namespace nlsys

#include <cmath>

#include "nlsys/ground.hpp"

namespace nlsys {

double sobolev_quotient(const Field& u) {
  if (u.grid().dim() != 3) {
    throw std::invalid_argument("the critical Sobolev quotient is 3D only");
  }
  const Field zero(u.grid());
  const double grad = h_norm_sq(u, zero);
  const double l6 = lp_norm(u, 6.0);
  return grad / (l6 * l6);
}

SobolevEstimate sobolev_constant_S(const std::vector<SobolevGrid>& family,
                                   const GroundOptions& options) {
  if (family.empty()) throw std::invalid_argument("empty grid family");
  GroundOptions opts = options;
  if (opts.stagnation_rtol <= 0.0) opts.stagnation_rtol = 1e-10;

  SobolevEstimate out;
  for (const SobolevGrid& spec : family) {
    const Grid grid(3, spec.half_width, spec.n_per_dim);
    const Field zero(grid);
    const DirichletSolver laplacian(grid, 0.0);
    const ScalarProblem problem{zero, laplacian, 6.0, 1.0};
    const double sigma = spec.half_width / 8.0;
    const Field init = Field::sample(grid, [&](const std::array<double, 3>& x) {
      return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) /
                      (sigma * sigma));
    });
    const GroundState state = minimize_on_nehari(problem, init, opts);
    out.per_grid.push_back(sobolev_quotient(state.field));
  }

  out.extrapolated = out.per_grid.back();
  const std::size_t m = out.per_grid.size();
  if (m >= 3) {
    // Aitken delta-squared on the last three values, used only when the
    // sequence is monotone with shrinking increments.
    const double a = out.per_grid[m - 3];
    const double b = out.per_grid[m - 2];
    const double c = out.per_grid[m - 1];
    const double d1 = b - a;
    const double d2 = c - b;
    if (d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1)) {
      out.extrapolated = c - d2 * d2 / (d2 - d1);
    }
  }
  return out;
}

}  // namespace nlsys

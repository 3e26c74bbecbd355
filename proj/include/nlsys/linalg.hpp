#ifndef NLSYS_LINALG_HPP
#define NLSYS_LINALG_HPP

#include <functional>
#include <memory>
#include <vector>

#include "nlsys/grid.hpp"

namespace nlsys {

/// Exact inverse of (-Lap_h + shift) on a Dirichlet grid.
///
/// The discrete Dirichlet Laplacian is diagonalized by the type-I sine
/// transform, so one forward transform, a diagonal scaling and one backward
/// transform solve the system. Plans are created once; solve() is safe to
/// call concurrently.
class DirichletSolver {
 public:
  DirichletSolver(const Grid& grid, double shift);
  ~DirichletSolver();
  DirichletSolver(const DirichletSolver&) = delete;
  DirichletSolver& operator=(const DirichletSolver&) = delete;

  const Grid& grid() const { return grid_; }
  double shift() const { return shift_; }

  Field solve(const Field& rhs) const;

 private:
  struct Plan;
  Grid grid_;
  double shift_;
  std::vector<double> inv_eigenvalues_;
  std::unique_ptr<Plan> plan_;
};

using LinearOperator = std::function<void(const std::vector<double>&,
                                          std::vector<double>&)>;

struct KrylovResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradients for a symmetric positive definite
/// operator. `precond` must be symmetric positive definite as well. The
/// stopping test is on the preconditioned residual norm relative to the
/// initial one. `x` holds the initial guess on entry.
KrylovResult pcg(const LinearOperator& op, const LinearOperator& precond,
                 const std::vector<double>& rhs, std::vector<double>& x,
                 double rtol, int max_iter);

/// Preconditioned MINRES for symmetric (possibly indefinite) operators with
/// an SPD preconditioner. Starts from x = 0; stops when the M^{-1}-norm of
/// the residual drops below rtol times that of rhs.
KrylovResult minres(const LinearOperator& op, const LinearOperator& precond,
                    const std::vector<double>& rhs, std::vector<double>& x,
                    double rtol, int max_iter);

}  // namespace nlsys

#endif  // NLSYS_LINALG_HPP

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "nlsys/linalg.hpp"

namespace nlsys {

namespace {
// FFTW's planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct DirichletSolver::Plan {
  fftw_plan plan = nullptr;
};

DirichletSolver::DirichletSolver(const Grid& grid, double shift)
    : grid_(grid), shift_(shift), plan_(std::make_unique<Plan>()) {
  const int n = grid.n_per_dim();
  const double h = grid.spacing();
  std::vector<double> axis(n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(std::numbers::pi * (k + 1) / (2.0 * (n + 1)));
    axis[k] = 4.0 * s * s / (h * h);
  }
  if (!(shift + grid.dim() * axis[0] > 0.0)) {
    throw std::invalid_argument("shifted Laplacian is not positive definite");
  }
  // RODFT00 applied forward and backward multiplies by 2(n+1) per axis.
  const double norm = std::pow(2.0 * (n + 1), grid.dim());
  inv_eigenvalues_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t rest = i;
    double lambda = shift;
    for (int d = 0; d < grid.dim(); ++d) {
      lambda += axis[rest % n];
      rest /= n;
    }
    inv_eigenvalues_[i] = 1.0 / (lambda * norm);
  }

  std::vector<int> dims(grid.dim(), n);
  std::vector<fftw_r2r_kind> kinds(grid.dim(), FFTW_RODFT00);
  std::vector<double> scratch(grid.size());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_->plan = fftw_plan_r2r(grid.dim(), dims.data(), scratch.data(),
                              scratch.data(), kinds.data(),
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_->plan == nullptr) throw std::runtime_error("FFTW planning failed");
}

DirichletSolver::~DirichletSolver() {
  if (plan_ && plan_->plan) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_->plan);
  }
}

Field DirichletSolver::solve(const Field& rhs) const {
  if (!(rhs.grid() == grid_)) {
    throw std::invalid_argument("right-hand side lives on a different grid");
  }
  std::vector<double> work(rhs.values().begin(), rhs.values().end());
  fftw_execute_r2r(plan_->plan, work.data(), work.data());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= inv_eigenvalues_[i];
  fftw_execute_r2r(plan_->plan, work.data(), work.data());
  return Field(grid_, std::move(work));
}

}  // namespace nlsys

#include "nlsys/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsys {

namespace {

// Neumaier summation: deterministic and insensitive to the order in which
// large and small terms arrive.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

Grid::Grid(int dim, double half_width, int n_per_dim)
    : dim_(dim), half_width_(half_width), n_(n_per_dim) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3, got " +
                                std::to_string(dim));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("grid half width must be positive");
  }
  if (n_per_dim < 3) {
    throw std::invalid_argument("grid needs at least 3 nodes per axis, got " +
                                std::to_string(n_per_dim));
  }
  h_ = 2.0 * half_width / (n_per_dim + 1);
  size_ = 1;
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_per_dim);
}

double Grid::cell_volume() const { return std::pow(h_, dim_); }

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int d = dim_ - 1; d > axis; --d) s *= static_cast<std::size_t>(n_);
  return s;
}

std::array<double, 3> Grid::position(std::size_t flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int d = dim_ - 1; d >= 0; --d) {
    x[d] = coordinate(static_cast<int>(flat % n_));
    flat /= n_;
  }
  return x;
}

Grid build_grid(int dim, double half_width, int n_per_dim) {
  return Grid(dim, half_width, n_per_dim);
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field length " +
                                std::to_string(values_.size()) +
                                " does not match grid size " +
                                std::to_string(grid_.size()));
  }
  check_finite();
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& x : values_) x *= s;
  return *this;
}

Field& Field::add_scaled(double s, const Field& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += s * other.values_[i];
  }
  return *this;
}

bool Field::is_zero() const {
  for (double x : values_) {
    if (x != 0.0) return false;
  }
  return true;
}

void Field::check_finite() const {
  for (double x : values_) {
    if (!std::isfinite(x)) throw std::domain_error("field has non-finite value");
  }
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) {
    throw std::invalid_argument("fields live on different grids");
  }
}

Field laplacian_apply(const Field& u) {
  const Grid& g = u.grid();
  const int n = g.n_per_dim();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  Field out(g);
  auto in = u.values();
  auto res = out.values();
  for (std::size_t i = 0; i < g.size(); ++i) res[i] = 2.0 * g.dim() * in[i];
  for (int axis = 0; axis < g.dim(); ++axis) {
    const std::size_t s = g.stride(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = (i / s) % n;
      double nb = 0.0;
      if (j > 0) nb += in[i - s];
      if (j + 1 < static_cast<std::size_t>(n)) nb += in[i + s];
      res[i] -= nb;
    }
  }
  for (double& x : res) x *= inv_h2;
  return out;
}

double integrate(const Field& f) {
  CompensatedSum acc;
  for (double x : f.values()) acc.add(x);
  return f.grid().cell_volume() * acc.value();
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a, b);
  CompensatedSum acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i]);
  return a.grid().cell_volume() * acc.value();
}

double lp_norm_pow(const Field& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  CompensatedSum acc;
  if (p == 2.0) {
    for (double x : f.values()) acc.add(x * x);
  } else {
    for (double x : f.values()) acc.add(std::pow(std::abs(x), p));
  }
  return f.grid().cell_volume() * acc.value();
}

double lp_norm(const Field& f, double p) {
  return std::pow(lp_norm_pow(f, p), 1.0 / p);
}

double h_inner(const Field& a, const Field& b, const Field& potential) {
  require_same_grid(a, b);
  require_same_grid(a, potential);
  const Grid& g = a.grid();
  const std::size_t n = static_cast<std::size_t>(g.n_per_dim());
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  // Edge differences, boundary edges included: equal to <a, -Lap_h b> but
  // free of the stencil's cancellation error.
  CompensatedSum grad;
  for (int axis = 0; axis < g.dim(); ++axis) {
    const std::size_t s = g.stride(axis);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::size_t j = (i / s) % n;
      if (j == 0) grad.add(a[i] * b[i]);
      const double an = j + 1 < n ? a[i + s] : 0.0;
      const double bn = j + 1 < n ? b[i + s] : 0.0;
      grad.add((an - a[i]) * (bn - b[i]));
    }
  }
  CompensatedSum mass;
  for (std::size_t i = 0; i < a.size(); ++i) mass.add(potential[i] * a[i] * b[i]);
  return g.cell_volume() * (inv_h2 * grad.value() + mass.value());
}

double h_norm_sq(const Field& u, const Field& potential) {
  return h_inner(u, u, potential);
}

}  // namespace nlsys

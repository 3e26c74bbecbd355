#ifndef NLSYS_GRID_HPP
#define NLSYS_GRID_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nlsys {

/// Uniform tensor grid on [-L, L]^dim with homogeneous Dirichlet boundary.
///
/// Only interior nodes are stored: along each axis node j (0-based) sits at
/// -L + (j + 1) h with h = 2L / (n + 1). Values at |x_i| = L are zero and
/// never materialized. Flat indices are row-major with the last axis fastest.
class Grid {
 public:
  Grid(int dim, double half_width, int n_per_dim);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int n_per_dim() const { return n_; }
  double spacing() const { return h_; }
  std::size_t size() const { return size_; }

  /// Quadrature weight of one node, h^dim.
  double cell_volume() const;

  /// Coordinate of 0-based node index j along any axis.
  double coordinate(int j) const { return -half_width_ + (j + 1) * h_; }

  /// Physical position of a flat node index; unused axes are zero.
  std::array<double, 3> position(std::size_t flat) const;

  /// Stride of axis `axis` in the flat layout.
  std::size_t stride(int axis) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  double half_width_;
  int n_;
  double h_;
  std::size_t size_;
};

Grid build_grid(int dim, double half_width, int n_per_dim);

/// Real scalar function sampled on the interior nodes of a grid.
class Field {
 public:
  explicit Field(const Grid& grid);
  Field(const Grid& grid, std::vector<double> values);

  template <class F>
  static Field sample(const Grid& grid, F&& f) {
    Field out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      out.values_[i] = f(grid.position(i));
    }
    out.check_finite();
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  /// this += s * other
  Field& add_scaled(double s, const Field& other);

  bool is_zero() const;
  /// Throws std::domain_error if any value is NaN or infinite.
  void check_finite() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Throws std::invalid_argument unless both fields live on equal grids.
void require_same_grid(const Field& a, const Field& b);

/// Discrete -Lap_h u with the (2 dim + 1)-point stencil; neighbours outside
/// the box contribute zero.
Field laplacian_apply(const Field& u);

/// Rectangle rule, h^dim * sum(values). Summation is compensated so the
/// result does not depend on thread scheduling or accumulate drift.
double integrate(const Field& f);

/// integrate(a * b)
double inner(const Field& a, const Field& b);

double lp_norm(const Field& f, double p);

/// Sum of |f|^p times h^dim (no root).
double lp_norm_pow(const Field& f, double p);

/// ||u||^2 = int |grad_h u|^2 + V u^2, with the gradient term taken as
/// the sum of squared edge differences, which equals int u (-Lap_h u) with
/// zero boundary values.
double h_norm_sq(const Field& u, const Field& potential);

/// Same quadratic form evaluated on a pair of fields.
double h_inner(const Field& a, const Field& b, const Field& potential);

}  // namespace nlsys

#endif  // NLSYS_GRID_HPP

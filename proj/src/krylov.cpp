#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsys/linalg.hpp"

namespace nlsys {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

KrylovResult pcg(const LinearOperator& op, const LinearOperator& precond,
                 const std::vector<double>& rhs, std::vector<double>& x,
                 double rtol, int max_iter) {
  const std::size_t n = rhs.size();
  x.resize(n, 0.0);
  std::vector<double> r(n), z(n), p(n), q(n);
  op(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  precond(r, z);
  double rz = dot(r, z);
  KrylovResult result;
  std::vector<double> zb(n);
  precond(rhs, zb);
  const double ref = std::sqrt(std::max(dot(rhs, zb), 0.0));
  if (ref == 0.0 || std::sqrt(std::max(rz, 0.0)) <= rtol * ref) {
    result.converged = true;
    result.relative_residual = ref == 0.0 ? 0.0 : std::sqrt(rz) / ref;
    return result;
  }
  p = z;
  for (int it = 1; it <= max_iter; ++it) {
    op(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;  // operator not positive definite
    const double alpha = rz / pq;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    precond(r, z);
    const double rz_new = dot(r, z);
    result.iterations = it;
    result.relative_residual = std::sqrt(std::max(rz_new, 0.0)) / ref;
    if (result.relative_residual <= rtol) {
      result.converged = true;
      return result;
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return result;
}

KrylovResult minres(const LinearOperator& op, const LinearOperator& precond,
                    const std::vector<double>& rhs, std::vector<double>& x,
                    double rtol, int max_iter) {
  const std::size_t n = rhs.size();
  x.assign(n, 0.0);
  KrylovResult result;

  std::vector<double> r1 = rhs;
  std::vector<double> y(n);
  precond(r1, y);
  const double beta1 = std::sqrt(std::max(dot(r1, y), 0.0));
  if (beta1 == 0.0) {
    result.converged = true;
    return result;
  }

  std::vector<double> r2 = r1, v(n), w(n, 0.0), w1(n), w2(n, 0.0);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  constexpr double tiny = std::numeric_limits<double>::epsilon();

  for (int it = 1; it <= max_iter; ++it) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    op(v, y);
    if (it >= 2) axpy(-beta / oldb, r1, y);
    const double alfa = dot(v, y);
    axpy(-alfa / beta, r2, y);
    r1.swap(r2);
    r2 = y;
    precond(r2, y);
    oldb = beta;
    beta = std::sqrt(std::max(dot(r2, y), 0.0));

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    }
    axpy(phi, w, x);

    result.iterations = it;
    result.relative_residual = phibar / beta1;
    if (result.relative_residual <= rtol || beta == 0.0) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace nlsys

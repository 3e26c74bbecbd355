#include <Eigen/Dense>
#include <random>

#include "doctest.h"
#include "nlsys/linalg.hpp"

using namespace nlsys;

namespace {

LinearOperator dense(const Eigen::MatrixXd& m) {
  return [m](const std::vector<double>& x, std::vector<double>& y) {
    const Eigen::VectorXd r = m * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    y.assign(r.data(), r.data() + r.size());
  };
}

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng, double shift) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(rng);
  Eigen::MatrixXd s = 0.5 * (a + a.transpose());
  s.diagonal().array() += shift;
  return s;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("pcg solves an SPD system") {
  std::mt19937_64 rng(3);
  const int n = 40;
  Eigen::MatrixXd a = random_symmetric(n, rng, 0.0);
  a = a * a.transpose() + Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  const Eigen::VectorXd exact = a.ldlt().solve(b);
  Eigen::MatrixXd jacobi = a.diagonal().cwiseInverse().asDiagonal();

  std::vector<double> rhs(b.data(), b.data() + n);
  std::vector<double> x(n, 0.0);
  const KrylovResult r = pcg(dense(a), dense(jacobi), rhs, x, 1e-12, 500);
  CHECK(r.converged);
  for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(exact(i)).epsilon(1e-8));
}

TEST_CASE("pcg with zero right-hand side returns immediately") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  std::vector<double> x(4, 0.0);
  const KrylovResult r = pcg(dense(a), dense(a), std::vector<double>(4, 0.0), x, 1e-10, 10);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
}

TEST_CASE("minres solves a symmetric indefinite system") {
  std::mt19937_64 rng(5);
  const int n = 50;
  const Eigen::MatrixXd a = random_symmetric(n, rng, 0.3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  REQUIRE(eig.eigenvalues().minCoeff() < 0.0);
  REQUIRE(eig.eigenvalues().maxCoeff() > 0.0);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  const Eigen::VectorXd exact = a.fullPivLu().solve(b);

  for (bool preconditioned : {false, true}) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    if (preconditioned) m = a.diagonal().cwiseAbs().cwiseInverse().asDiagonal();
    std::vector<double> rhs(b.data(), b.data() + n);
    std::vector<double> x;
    const KrylovResult r = minres(dense(a), dense(m), rhs, x, 1e-12, 2000);
    CHECK(r.converged);
    REQUIRE(x.size() == static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(exact(i)).epsilon(1e-6));
  }
}

TEST_CASE("minres reports non-convergence within a tiny budget") {
  std::mt19937_64 rng(9);
  const int n = 30;
  const Eigen::MatrixXd a = random_symmetric(n, rng, 0.0);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  std::vector<double> rhs(n, 1.0);
  std::vector<double> x;
  const KrylovResult r = minres(dense(a), dense(id), rhs, x, 1e-14, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations <= 3);
}

}  // TEST_SUITE

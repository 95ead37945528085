#include <doctest.h>

#include <cmath>

#include "saddlekit/problem.hpp"
#include "saddlekit/random.hpp"

using namespace saddlekit;

namespace {

SaddleProblem tiny_problem(Matrix K, double L_xy, double mu_xy) {
  SaddleProblem p;
  p.d_x = K.cols();
  p.d_y = K.rows();
  p.g = SmoothOracle::quadratic(Matrix::Identity(p.d_x, p.d_x),
                                Vector::Zero(p.d_x), 1, 1);
  p.fstar = DualOracle::zero(p.d_y);
  p.k.K = std::move(K);
  p.k.L_xy = L_xy;
  p.k.mu_xy = mu_xy;
  return p;
}

}  // namespace

TEST_CASE("apply_k examples") {
  Matrix K1(1, 1);
  K1 << 1;
  auto p1 = tiny_problem(K1, 1, 1);
  Vector x1(1);
  x1 << 3;
  CHECK(apply_k(p1, x1)(0) == doctest::Approx(3));

  Matrix K2(2, 2);
  K2 << 1, 2, 0, 1;
  auto p2 = tiny_problem(K2, 3, 0.5);
  Vector x2(2);
  x2 << 1, 1;
  Vector r = apply_k(p2, x2);
  CHECK(r(0) == doctest::Approx(3));
  CHECK(r(1) == doctest::Approx(1));

  auto p3 = tiny_problem(Matrix::Zero(2, 2), 1, 0.5);
  Vector x3(2);
  x3 << 5, 7;
  CHECK(apply_k(p3, x3).norm() == doctest::Approx(0));

  CHECK_THROWS_AS(apply_k(p2, x1), ShapeError);
}

TEST_CASE("apply_kt examples") {
  Matrix K(2, 2);
  K << 1, 2, 0, 1;
  auto p = tiny_problem(K, 3, 0.5);
  Vector y(2);
  y << 1, 0;
  Vector r = apply_kt(p, y);
  CHECK(r(0) == doctest::Approx(1));
  CHECK(r(1) == doctest::Approx(2));

  Matrix K1(1, 1);
  K1 << 1;
  auto p1 = tiny_problem(K1, 1, 1);
  Vector y1(1);
  y1 << -4;
  CHECK(apply_kt(p1, y1)(0) == doctest::Approx(-4));
}

TEST_CASE("validate_problem: declared constants equal eigenvalue extremes") {
  SaddleProblem p;
  p.d_x = p.d_y = 2;
  Matrix A(2, 2);
  A << 1, 0, 0, 4;
  p.g = SmoothOracle::quadratic(A, Vector::Zero(2), 1, 4);
  p.fstar = DualOracle::zero(2);
  p.k.K = Matrix::Identity(2, 2);
  p.k.L_xy = 1;
  p.k.mu_xy = 1;
  auto rep = validate_problem(p);
  CHECK(rep.all_passed());
}

TEST_CASE("validate_problem: constructed mu_xy violation") {
  SaddleProblem p;
  p.d_x = p.d_y = 2;
  p.g = SmoothOracle::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 1, 1);
  p.fstar = DualOracle::zero(2);
  p.k.K = Matrix::Identity(2, 2);
  p.k.L_xy = 1;
  p.k.mu_xy = 2;  // identity has eigenvalue 1
  auto rep = validate_problem(p);
  CHECK_FALSE(rep.all_passed());
  bool found = false;
  for (const auto& c : rep.checks)
    if (c.name == "k_mu_xy") {
      found = true;
      CHECK_FALSE(c.pass);
      CHECK(c.measured == doctest::Approx(1.0));
    }
  CHECK(found);
}

TEST_CASE("validate_problem: range-deficient K uses lambda+_min branch") {
  SaddleProblem p;
  p.d_x = 2;
  p.d_y = 1;
  p.g = SmoothOracle::quadratic(Matrix::Identity(2, 2), Vector::Zero(2), 1, 1);
  p.fstar = DualOracle::zero(1);
  Matrix K(1, 2);
  K << 1, -1;
  p.k.K = K;
  p.k.L_xy = std::sqrt(2.0);
  p.k.mu_xy = std::sqrt(2.0);  // KK^T = [2], lambda+_min = 2
  auto rep = validate_problem(p);
  CHECK(rep.all_passed());
}

TEST_CASE("adjointness and operator-norm bound on random unit vectors") {
  Rng rng(7);
  LinearMap k = random_linear_map(rng, 5, 4, 0.5, 2.0);
  std::normal_distribution<double> normal(0, 1);
  for (int t = 0; t < 100; ++t) {
    Vector x(4), y(5);
    for (int i = 0; i < 4; ++i) x[i] = normal(rng);
    for (int i = 0; i < 5; ++i) y[i] = normal(rng);
    x.normalize();
    double lhs = (k.K * x).dot(y);
    double rhs = x.dot(k.K.transpose() * y);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK((k.K * x).norm() <= k.L_xy * (1 + 1e-12));
  }
}

TEST_CASE("prox of the zero function is the identity") {
  auto o = DualOracle::zero(3);
  Rng rng(11);
  std::normal_distribution<double> normal(0, 1);
  for (int t = 0; t < 100; ++t) {
    Vector p(3);
    for (int i = 0; i < 3; ++i) p[i] = normal(rng);
    CHECK((o.prox(p, 0.5 + t * 0.01) - p).norm() == doctest::Approx(0));
  }
}

TEST_CASE("quadratic prox matches a direct linear solve") {
  Rng rng(3);
  Matrix A = random_spd(rng, 4, 1, 10);
  Vector a(4);
  a << 1, -2, 0.5, 3;
  auto g = SmoothOracle::quadratic(A, a, 1, 10);
  Vector point(4);
  point << 0.1, 0.2, -0.3, 0.4;
  const double s = 0.7;
  Vector expect = (A + Matrix::Identity(4, 4) / s).ldlt().solve(a + point / s);
  CHECK((g.call_prox(point, s) - expect).norm() < 1e-10);
}

TEST_CASE("kronecker-form linear map matches its dense materialization") {
  LinearMap k;
  Matrix Khat(3, 3);
  Khat << 2, -1, -1, -1, 2, -1, -1, -1, 2;
  k.K = Khat;
  k.block_dim = 2;
  k.L_xy = 3;
  k.mu_xy = 1;
  Vector x(6);
  x << 1, 2, 3, 4, 5, 6;
  Matrix full = k.dense();
  CHECK((k.apply(x) - full * x).norm() < 1e-12);
  CHECK((k.apply_t(x) - full.transpose() * x).norm() < 1e-12);
}

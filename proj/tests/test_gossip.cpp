#include <doctest.h>

#include <cmath>

#include "saddlekit/gossip.hpp"
#include "saddlekit/random.hpp"

using namespace saddlekit;

TEST_CASE("build_gossip small spectra") {
  auto g2 = build_gossip(Topology::Complete, 2);
  CHECK(g2.W_hat(0, 0) == doctest::Approx(1));
  CHECK(g2.W_hat(0, 1) == doctest::Approx(-1));
  CHECK(g2.lambda_max == doctest::Approx(2));
  CHECK(g2.lambda_min_plus == doctest::Approx(2));
  CHECK(g2.chi == doctest::Approx(1));

  auto p3 = build_gossip(Topology::Path, 3);
  CHECK(p3.lambda_max == doctest::Approx(3));
  CHECK(p3.lambda_min_plus == doctest::Approx(1));
  CHECK(p3.chi == doctest::Approx(3));

  auto r3 = build_gossip(Topology::Ring, 3);
  CHECK(r3.lambda_max == doctest::Approx(3));
  CHECK(r3.lambda_min_plus == doctest::Approx(3));
  CHECK(r3.chi == doctest::Approx(1));

  auto s4 = build_gossip(Topology::Star, 4);
  CHECK(s4.lambda_max == doctest::Approx(4));
  CHECK(s4.lambda_min_plus == doctest::Approx(1));

  // complete graph on n nodes: all nonzero eigenvalues equal n
  auto c5 = build_gossip(Topology::Complete, 5);
  CHECK(c5.chi == doctest::Approx(1));
}

TEST_CASE("build_gossip rejects disconnected custom graphs") {
  CHECK_THROWS_AS(build_gossip(Topology::Custom, 4, {{0, 1}, {2, 3}}), ConfigError);
  auto ok = build_gossip(Topology::Custom, 4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(ok.chi == doctest::Approx(build_gossip(Topology::Path, 4).chi));
}

TEST_CASE("gossip matrix annihilates consensus vectors") {
  for (auto topo : {Topology::Complete, Topology::Ring, Topology::Path, Topology::Star}) {
    auto g = build_gossip(topo, 5);
    Vector ones = Vector::Ones(5);
    CHECK((g.W_hat * ones).norm() < 1e-12);
    // stacked form with d = 2
    Vector stacked = Vector::Ones(10);
    CHECK(g.apply(stacked, 2).norm() < 1e-12);
  }
}

TEST_CASE("sqrt_w squares back to W_hat") {
  auto g = build_gossip(Topology::Path, 4);
  Matrix S = sqrt_w(g);
  CHECK((S * S - g.W_hat).norm() < 1e-10);
  CHECK((S - S.transpose()).norm() < 1e-12);
}

TEST_CASE("ag_params path n=3") {
  auto g = build_gossip(Topology::Path, 3);
  auto p = ag_params(g);
  CHECK_FALSE(p.degenerate);
  CHECK(p.N == 1);
  CHECK(p.c1 == doctest::Approx(2 - std::sqrt(3.0)));
  CHECK(p.c3 == doctest::Approx(0.5));
  CHECK(p.lambda1 + p.lambda2 == doctest::Approx(2));
  double c1N = p.c1;  // N = 1
  CHECK(p.lambda1 == doctest::Approx(1 + 2 * c1N / (1 + c1N * c1N)));
  CHECK(p.lambda2 == doctest::Approx(1 - 2 * c1N / (1 + c1N * c1N)));
}

TEST_CASE("ag_params degenerate on chi = 1 topologies") {
  auto g = build_gossip(Topology::Complete, 4);
  auto p = ag_params(g);
  CHECK(p.degenerate);
  CHECK(p.N == 1);
  CHECK(p.lambda1 == doctest::Approx(1));
  CHECK(p.lambda2 == doctest::Approx(1));
}

TEST_CASE("accelerated gossip sends consensus vectors to zero") {
  // the a-recurrence and x-recurrence coincide on the kernel of W, so the
  // returned x - x_N/a_N vanishes on consensus inputs
  for (auto topo : {Topology::Path, Topology::Ring, Topology::Star}) {
    for (Index n = 3; n <= 8; ++n) {
      auto g = build_gossip(topo, n);
      auto p = ag_params(g);
      Vector ones = Vector::Ones(n);
      CHECK(accelerated_gossip(g, ones, 1, p).norm() <= 1e-12);
      // stacked blocks
      Vector stacked = Vector::Ones(2 * n) * 3.5;
      CHECK(accelerated_gossip(g, stacked, 2, p).norm() <= 1e-12);
    }
  }
  // complete graph: the degenerate single step extracts the disagreement part
  auto g = build_gossip(Topology::Complete, 6);
  auto p = ag_params(g);
  Vector x = Vector::LinSpaced(6, -1, 4);
  Vector out = accelerated_gossip(g, x, 1, p);
  Vector mean = Vector::Constant(6, x.mean());
  CHECK((out - (x - mean)).norm() <= 1e-12);
}

TEST_CASE("accelerated gossip is linear") {
  auto g = build_gossip(Topology::Ring, 5);
  auto p = ag_params(g);
  Rng rng(3);
  std::normal_distribution<double> normal(0, 1);
  Vector a(5), b(5);
  for (int i = 0; i < 5; ++i) {
    a[i] = normal(rng);
    b[i] = normal(rng);
  }
  Vector lhs = accelerated_gossip(g, Vector(2 * a + 3 * b), 1, p);
  Vector rhs = 2 * accelerated_gossip(g, a, 1, p) + 3 * accelerated_gossip(g, b, 1, p);
  CHECK((lhs - rhs).norm() < 1e-10);
}

namespace {

// dense matrix of the effective gossip operator via basis vectors
Matrix effective_operator(const GossipMatrix& g, const AgParams& p, bool literal) {
  Index n = g.n();
  Matrix M(n, n);
  for (Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = 1;
    M.col(j) = accelerated_gossip(g, e, 1, p, literal);
  }
  return M;
}

}  // namespace

TEST_CASE("effective operator spectrum lies in [lambda2, lambda1]") {
  for (auto topo : {Topology::Path, Topology::Ring}) {
    Index n0 = topo == Topology::Ring ? 4 : 3;
    for (Index n = n0; n <= 8; ++n) {
      auto g = build_gossip(topo, n);
      auto p = ag_params(g);
      Matrix M = effective_operator(g, p, false);
      CHECK((M - M.transpose()).norm() < 1e-10);
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
      for (Index i = 0; i < n; ++i) {
        double ev = es.eigenvalues()[i];
        if (std::abs(ev) < 1e-10) continue;  // consensus kernel direction
        CHECK(ev >= p.lambda2 - 1e-9);
        CHECK(ev <= p.lambda1 + 1e-9);
      }
    }
  }
}

TEST_CASE("path n=3 effective operator has eigenvalues {0, 1/2, 3/2}") {
  auto g = build_gossip(Topology::Path, 3);
  auto p = ag_params(g);
  Matrix M = effective_operator(g, p, false);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  CHECK(es.eigenvalues()[0] == doctest::Approx(0).epsilon(1e-9));
  CHECK(es.eigenvalues()[1] == doctest::Approx(0.5));
  CHECK(es.eigenvalues()[2] == doctest::Approx(1.5));
}

TEST_CASE("literal recurrence flag changes the operator on chi > 1 graphs") {
  auto g = build_gossip(Topology::Path, 5);
  auto p = ag_params(g);
  Matrix a = effective_operator(g, p, false);
  Matrix b = effective_operator(g, p, true);
  if (p.N > 1) CHECK((a - b).norm() > 1e-8);
}

#include <doctest.h>

#include <cmath>

#include "saddlekit/fedsim.hpp"
#include "saddlekit/oracles.hpp"
#include "saddlekit/random.hpp"

using namespace saddlekit;

namespace {

ConsensusProblem small_consensus(Topology topo, Index n, Index d, double kappa,
                                 unsigned long long seed) {
  Rng rng(seed);
  auto locals = random_local_functions(rng, n, d, 1, kappa);
  return build_consensus(std::move(locals), build_gossip(topo, n));
}

}  // namespace

TEST_CASE("build_consensus wiring") {
  auto cp = small_consensus(Topology::Path, 3, 2, 4, 1);
  CHECK(cp.n() == 3);
  CHECK(cp.saddle.d_x == 6);
  CHECK(cp.saddle.d_y == 6);
  CHECK(cp.saddle.g.mu == doctest::Approx(1));
  CHECK(cp.saddle.g.L == doctest::Approx(4));
  CHECK(cp.saddle.k.L_xy == doctest::Approx(std::sqrt(3.0)));
  CHECK(cp.saddle.k.mu_xy == doctest::Approx(1.0));
  CHECK(cp.saddle.fstar.variant == DualVariant::Zero);

  // K^T K = W_hat (x) I_d
  Matrix Kd = cp.saddle.k.dense();
  Matrix W = Matrix::Zero(6, 6);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      W.block(2 * i, 2 * j, 2, 2) = cp.gossip.W_hat(i, j) * Matrix::Identity(2, 2);
  CHECK((Kd.transpose() * Kd - W).norm() < 1e-9);
}

TEST_CASE("grad_p is block separable") {
  auto cp = small_consensus(Topology::Ring, 4, 3, 8, 2);
  Rng rng(5);
  std::normal_distribution<double> normal(0, 1);
  Vector x(12);
  for (int i = 0; i < 12; ++i) x[i] = normal(rng);
  Vector g = cp.grad_p(x);
  for (Index i = 0; i < 4; ++i) {
    Vector xi = x.segment(3 * i, 3);
    Vector gi = cp.locals[i].A * xi - cp.locals[i].b;
    CHECK((g.segment(3 * i, 3) - gi).norm() < 1e-14);
  }
  CHECK((cp.saddle.g.gradient(x) - g).norm() < 1e-14);
}

TEST_CASE("consensus saddle point has agreeing blocks") {
  auto cp = small_consensus(Topology::Path, 4, 2, 6, 3);
  auto sol = kkt_solve(cp.saddle);
  Vector mean = Vector::Zero(2);
  for (Index i = 0; i < 4; ++i) mean += sol.x_star.segment(2 * i, 2);
  mean /= 4;
  for (Index i = 0; i < 4; ++i)
    CHECK((sol.x_star.segment(2 * i, 2) - mean).norm() < 1e-8);
  // the consensus point minimizes the sum of the locals
  Vector gsum = Vector::Zero(2);
  for (const auto& l : cp.locals) gsum += l.A * mean - l.b;
  CHECK(gsum.norm() < 1e-7);
}

TEST_CASE("fed apda-inexact converges and counts 3 rounds per iteration") {
  auto cp = small_consensus(Topology::Ring, 4, 2, 4, 7);
  auto ft = solve_fed_apda_inexact(cp, InnerMethod::make(InnerKind::FGD_GD),
                                   {4000, 1e-10});
  CHECK(ft.trace.converged);
  REQUIRE(ft.trace.rows.size() >= 2);
  const auto& rows = ft.trace.rows;
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].comm_rounds == 3 * rows[i].k);
    CHECK(rows[i].local_steps == static_cast<long>(ft.params.T) * rows[i].k);
  }
  CHECK(ft.consensus_error.size() == rows.size());
  CHECK(ft.consensus_error.back() < 1e-4);
  // Lyapunov contraction along the whole run
  const double floor = *rows[0].lyapunov * 1e-24;
  for (size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].lyapunov.has_value());
    if (*rows[i - 1].lyapunov < floor) break;
    CHECK(*rows[i].lyapunov <=
          *rows[i - 1].lyapunov * ft.params.theta * (1 + 1e-9));
  }
}

TEST_CASE("fed apda-gossip converges and counts 4N rounds per iteration") {
  auto cp = small_consensus(Topology::Path, 4, 2, 4, 11);
  auto ft = solve_fed_apda_gossip(cp, InnerMethod::make(InnerKind::GD),
                                  {20000, 1e-10});
  CHECK(ft.trace.converged);
  auto ag = ag_params(cp.gossip);
  const auto& rows = ft.trace.rows;
  for (size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].comm_rounds == 4L * ag.N * rows[i].k);

  auto lit = solve_fed_apda_gossip(cp, InnerMethod::make(InnerKind::GD),
                                   {50, 0}, /*count_literal=*/true);
  for (const auto& r : lit.trace.rows)
    CHECK(r.comm_rounds == 5L * ag.N * r.k);
}

TEST_CASE("gossip and inexact variants agree on the complete graph") {
  // chi = 1: accelerated gossip degenerates to one exact scaled step, so both
  // algorithms follow the same trajectory up to the parameter choices.
  auto cp = small_consensus(Topology::Complete, 3, 2, 4, 13);
  auto a = solve_fed_apda_inexact(cp, InnerMethod::make(InnerKind::FGD_FSFOM),
                                  {6000, 1e-12});
  auto b = solve_fed_apda_gossip(cp, InnerMethod::make(InnerKind::FGD_FSFOM),
                                 {6000, 1e-12});
  CHECK(a.trace.converged);
  CHECK(b.trace.converged);
  auto sol = kkt_solve(cp.saddle);
  CHECK((a.trace.final_state.x - sol.x_star).norm() < 1e-4);
  CHECK((b.trace.final_state.x - sol.x_star).norm() < 1e-4);
}

TEST_CASE("scaling_study slopes and row bookkeeping") {
  ProblemFactory factory = [](double kappa) {
    return small_consensus(Topology::Complete, 4, 3, kappa,
                           static_cast<unsigned long long>(kappa) + 100);
  };
  std::vector<InnerMethod> inners = {InnerMethod::make(InnerKind::GD),
                                     InnerMethod::make(InnerKind::FGD_FSFOM)};
  auto table = scaling_study(factory, {16, 64}, inners, 1e-8);
  CHECK(table.rows.size() == 4);
  for (const auto& r : table.rows) {
    CHECK(r.converged);
    CHECK(r.local_steps_per_round > 0);
    CHECK(r.outer_iters > 0);
  }
  // T grows with kappa at roughly kappa^{1/alpha}
  double sT_gd = table.slope_T("gd");
  double sT_ff = table.slope_T("fgd-fsfom");
  CHECK(sT_gd > sT_ff);
  CHECK(sT_gd > 0.2);
  CHECK(sT_ff > 0.05);
  CHECK(table.slope_outer("gd") > 0.2);
}

#pragma once

#include <functional>
#include <vector>

#include "saddlekit/gossip.hpp"
#include "saddlekit/solvers.hpp"

namespace saddlekit {

struct LocalFunction {
  Matrix A;  // d x d, eigenvalues in [mu, L]
  Vector b;
  double mu = 0;
  double L = 0;
};

struct ConsensusProblem {
  std::vector<LocalFunction> locals;
  GossipMatrix gossip;
  Index d = 0;  // per-node dimension

  SaddleProblem saddle;  // induced view with K = sqrt(W), F* = 0

  Index n() const { return static_cast<Index>(locals.size()); }
  Vector grad_p(const Vector& x) const;  // block-separable gradient
};

ConsensusProblem build_consensus(std::vector<LocalFunction> locals,
                                 GossipMatrix gossip);

struct FedTrace {
  RunTrace trace;
  std::vector<double> consensus_error;  // max_i ||x_i - mean|| per row
  SolverParams params;
};

/// Algorithm 2 on the consensus saddle problem; 3 communication rounds
/// (sqrt(W) applications, a simulation accounting unit) per outer iteration.
FedTrace solve_fed_apda_inexact(const ConsensusProblem& cp, const InnerMethod& inner,
                                const StopRule& stop);

/// Algorithm 3: gossip terms routed through Chebyshev accelerated gossip.
/// Lines 3 and 4 share one AG evaluation by default; count_literal charges
/// the pseudocode's duplicated call as well (5N instead of 4N per iteration).
FedTrace solve_fed_apda_gossip(const ConsensusProblem& cp, const InnerMethod& inner,
                               const StopRule& stop, bool count_literal = false);

struct ScalingRow {
  double kappa = 0;
  double chi = 0;
  std::string inner;
  long outer_iters = 0;
  long comm_rounds = 0;
  int local_steps_per_round = 0;
  bool converged = false;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  /// least-squares slope of log(field) vs log(kappa) for one inner method
  double slope_T(const std::string& inner) const;
  double slope_outer(const std::string& inner) const;
};

using ProblemFactory = std::function<ConsensusProblem(double kappa)>;

ScalingTable scaling_study(const ProblemFactory& factory,
                           const std::vector<double>& kappas,
                           const std::vector<InnerMethod>& inners, double eps,
                           long max_iters = 200000);

}  // namespace saddlekit

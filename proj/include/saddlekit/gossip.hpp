#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "saddlekit/types.hpp"

namespace saddlekit {

enum class Topology { Complete, Ring, Path, Star, Custom };
std::optional<Topology> parse_topology(const std::string& name);
std::string topology_name(Topology t);

struct GossipMatrix {
  Matrix W_hat;  // n x n Laplacian (or any Assumption-compatible matrix)
  double lambda_max = 0;
  double lambda_min_plus = 0;
  double chi = 1;
  Topology topology = Topology::Custom;

  Index n() const { return W_hat.rows(); }
  /// (W_hat (x) I_d) x for a stacked vector of n blocks of size d.
  Vector apply(const Vector& x, Index d) const;
};

GossipMatrix build_gossip(Topology topology, Index n,
                          const std::vector<std::pair<Index, Index>>& edges = {});

/// Symmetric PSD square root of W_hat via eigendecomposition.
Matrix sqrt_w(const GossipMatrix& g);

struct AgParams {
  int N = 1;
  double c1 = 0, c2 = 0, c3 = 0;
  double lambda1 = 1, lambda2 = 1;
  bool degenerate = false;  // chi ~ 1: single scaled gossip step
};

AgParams ag_params(const GossipMatrix& g);

/// Chebyshev accelerated gossip on a stacked vector of n blocks of size d.
/// Maps consensus vectors to zero; nonzero spectrum of the effective operator
/// lies in [lambda2, lambda1]. literal_recurrence reproduces the printed
/// pseudocode (multiplier c2 and inner factor (I - c2 W)) instead of the
/// Chebyshev-consistent multiplier (chi+1)/(chi-1) with (I - c3 W).
Vector accelerated_gossip(const GossipMatrix& g, const Vector& x, Index d,
                          const AgParams& params, bool literal_recurrence = false);

}  // namespace saddlekit

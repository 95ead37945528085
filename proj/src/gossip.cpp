#include "saddlekit/gossip.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace saddlekit {

std::optional<Topology> parse_topology(const std::string& name) {
  if (name == "complete") return Topology::Complete;
  if (name == "ring") return Topology::Ring;
  if (name == "path") return Topology::Path;
  if (name == "star") return Topology::Star;
  if (name == "custom") return Topology::Custom;
  return std::nullopt;
}

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::Complete: return "complete";
    case Topology::Ring: return "ring";
    case Topology::Path: return "path";
    case Topology::Star: return "star";
    case Topology::Custom: return "custom";
  }
  return "?";
}

Vector GossipMatrix::apply(const Vector& x, Index d) const {
  if (x.size() != n() * d) throw ShapeError("GossipMatrix::apply: bad stacked size");
  Eigen::Map<const Matrix> X(x.data(), d, n());
  Matrix Y = X * W_hat;  // W_hat symmetric
  return Eigen::Map<const Vector>(Y.data(), Y.size());
}

GossipMatrix build_gossip(Topology topology, Index n,
                          const std::vector<std::pair<Index, Index>>& edges_in) {
  if (n < 2) throw ConfigError("build_gossip: need n >= 2");
  std::vector<std::pair<Index, Index>> edges;
  switch (topology) {
    case Topology::Complete:
      for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case Topology::Ring:
      for (Index i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      break;
    case Topology::Path:
      for (Index i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case Topology::Star:
      for (Index i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case Topology::Custom:
      edges = edges_in;
      break;
  }

  Matrix W = Matrix::Zero(n, n);
  for (auto [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      throw ConfigError("build_gossip: invalid edge");
    if (W(i, j) != 0) continue;  // duplicate edge
    W(i, j) = W(j, i) = -1;
    W(i, i) += 1;
    W(j, j) += 1;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(W);
  const Vector& ev = es.eigenvalues();
  double lam_max = ev.maxCoeff();
  double cutoff = 1e-8 * std::max(1.0, lam_max);
  Index kernel_dim = 0;
  double lam_min_plus = lam_max;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= cutoff)
      ++kernel_dim;
    else
      lam_min_plus = std::min(lam_min_plus, ev[i]);
  }
  if (kernel_dim != 1)
    throw ConfigError("build_gossip: graph is disconnected (kernel dimension " +
                      std::to_string(kernel_dim) + ")");

  GossipMatrix g;
  g.W_hat = std::move(W);
  g.lambda_max = lam_max;
  g.lambda_min_plus = lam_min_plus;
  g.chi = lam_max / lam_min_plus;
  g.topology = topology;
  return g;
}

Matrix sqrt_w(const GossipMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.W_hat);
  Vector sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
}

AgParams ag_params(const GossipMatrix& g) {
  AgParams p;
  double sqrt_chi = std::sqrt(g.chi);
  if (sqrt_chi - 1 < 1e-9) {
    // c2 is undefined at chi = 1; a single scaled gossip keeps the
    // spectral contract [lambda2, lambda1] = [1, 1]
    p.degenerate = true;
    p.N = 1;
    p.lambda1 = p.lambda2 = 1;
    return p;
  }
  p.N = std::max<int>(1, static_cast<int>(std::floor(sqrt_chi)));
  p.c1 = (sqrt_chi - 1) / (sqrt_chi + 1);
  p.c2 = (sqrt_chi + 1) / (sqrt_chi - 1);
  p.c3 = 2 * g.chi / ((1 + g.chi) * g.lambda_max);
  double c1N = std::pow(p.c1, p.N);
  p.lambda1 = 1 + 2 * c1N / (1 + c1N * c1N);
  p.lambda2 = 1 - 2 * c1N / (1 + c1N * c1N);
  return p;
}

Vector accelerated_gossip(const GossipMatrix& g, const Vector& x, Index d,
                          const AgParams& params, bool literal_recurrence) {
  if (params.N < 1) throw ConfigError("accelerated_gossip: N must be >= 1");
  if (params.degenerate) {
    double scale = 2 / (g.lambda_max + g.lambda_min_plus);
    return scale * g.apply(x, d);
  }
  // Chebyshev recurrence multiplier: T_i evaluated at the image of lambda = 0,
  // nu0 = (chi+1)/(chi-1) = (c2 + 1/c2)/2. With this choice a_N = T_N(nu0) and
  // the effective spectrum lands exactly in [lambda2, lambda1]. The printed
  // pseudocode uses c2 itself; the literal flag reproduces that text.
  const double nu0 = (params.c2 + 1 / params.c2) / 2;
  const double mult = literal_recurrence ? params.c2 : nu0;
  const double c_inner = literal_recurrence ? params.c2 : params.c3;
  double a_prev = 1, a_cur = mult;
  Vector x_prev = x;
  Vector x_cur = mult * (x - params.c3 * g.apply(x, d));
  for (int i = 1; i < params.N; ++i) {
    double a_next = 2 * mult * a_cur - a_prev;
    Vector x_next = 2 * mult * (x_cur - c_inner * g.apply(x_cur, d)) - x_prev;
    a_prev = a_cur;
    a_cur = a_next;
    x_prev = std::move(x_cur);
    x_cur = std::move(x_next);
  }
  return x - x_cur / a_cur;
}

}  // namespace saddlekit

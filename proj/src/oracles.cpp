#include "saddlekit/oracles.hpp"

#include <cmath>

namespace saddlekit {

SaddleSolution kkt_solve(const SaddleProblem& p) {
  if (!p.g.quad)
    throw UnsupportedOracleError("kkt_solve: quadratic G required");
  const Matrix& A = p.g.quad->A;
  const Vector& a = p.g.quad->a;
  const Matrix K = p.k.dense();

  Matrix M(p.d_x + p.d_y, p.d_x + p.d_y);
  Vector rhs(p.d_x + p.d_y);
  M.topLeftCorner(p.d_x, p.d_x) = A;
  M.topRightCorner(p.d_x, p.d_y) = K.transpose();
  M.bottomLeftCorner(p.d_y, p.d_x) = K;
  rhs.head(p.d_x) = a;
  if (p.fstar.variant == DualVariant::Zero) {
    // stationarity A x + K^T y = a with the constraint K x = 0
    M.bottomRightCorner(p.d_y, p.d_y).setZero();
    rhs.tail(p.d_y).setZero();
  } else if (p.fstar.variant == DualVariant::Quadratic) {
    // dual feasibility K x = B y - b
    M.bottomRightCorner(p.d_y, p.d_y) = -p.fstar.quad->A;
    rhs.tail(p.d_y) = -p.fstar.quad->a;
  } else {
    throw UnsupportedOracleError("kkt_solve: quadratic or zero F* required");
  }

  // minimum-norm solve; K may be range deficient (e.g. K = sqrt(W))
  Vector z = M.completeOrthogonalDecomposition().solve(rhs);

  SaddleSolution sol;
  sol.x_star = z.head(p.d_x);
  sol.y_star = z.tail(p.d_y);

  double scale = 1 + a.norm() +
                 (p.fstar.variant == DualVariant::Quadratic ? p.fstar.quad->a.norm() : 0.0);
  double r1 = (A * sol.x_star - a + K.transpose() * sol.y_star).norm();
  Vector kx = K * sol.x_star;
  double r2 = (sol.y_star - p.fstar.prox(sol.y_star + kx, 1.0)).norm();
  sol.residual = std::max(r1, r2);
  if (sol.residual > 1e-9 * scale) {
    auto cod = M.completeOrthogonalDecomposition();
    throw NumericalError("kkt_solve: residual " + std::to_string(sol.residual) +
                         " exceeds tolerance; system rank " +
                         std::to_string(cod.rank()) + " of " +
                         std::to_string(M.rows()) +
                         " (declared mu_xy likely too large for this K)");
  }
  return sol;
}

Vector exact_prox_psi(const SaddleProblem& p, const Vector& x_k,
                      const Vector& y_bar, double eta_x) {
  if (!p.g.quad)
    throw UnsupportedOracleError("exact_prox_psi: quadratic G required");
  Vector shift = x_k - eta_x * p.k.apply_t(y_bar);
  Matrix M = p.g.quad->A + Matrix::Identity(p.d_x, p.d_x) / eta_x;
  return M.ldlt().solve(p.g.quad->a + shift / eta_x);
}

double fd_check(const SmoothOracle& oracle, const std::vector<Vector>& points,
                double h) {
  if (!oracle.value)
    throw UnsupportedOracleError("fd_check: value oracle required");
  double worst = 0;
  for (const Vector& x : points) {
    Vector g = oracle.gradient(x);
    Vector fd(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      Vector e = Vector::Zero(x.size());
      e[i] = h;
      fd[i] = ((*oracle.value)(x + e) - (*oracle.value)(x - e)) / (2 * h);
    }
    worst = std::max(worst, (g - fd).norm());
  }
  return worst;
}

}  // namespace saddlekit

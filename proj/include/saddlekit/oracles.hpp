#pragma once

#include <vector>

#include "saddlekit/problem.hpp"

namespace saddlekit {

/// Direct solve of the first-order optimality system for quadratic/zero
/// oracle forms. For F* = 0 it solves A x + K^T y = a subject to K x = 0.
SaddleSolution kkt_solve(const SaddleProblem& p);

/// Exact minimizer of Psi^k(w) = G(w) + ||w - (x_k - eta_x K^T y_bar)||^2/(2 eta_x).
Vector exact_prox_psi(const SaddleProblem& p, const Vector& x_k,
                      const Vector& y_bar, double eta_x);

/// Max central-difference deviation of the gradient oracle over the points.
double fd_check(const SmoothOracle& oracle, const std::vector<Vector>& points,
                double h);

}  // namespace saddlekit

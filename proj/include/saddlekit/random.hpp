#pragma once

#include <random>

#include "saddlekit/fedsim.hpp"
#include "saddlekit/problem.hpp"

namespace saddlekit {

using Rng = std::mt19937_64;

Matrix random_orthogonal(Rng& rng, Index n);

/// SPD matrix with eigenvalues log-uniform in [mu, L]; the endpoints mu and L
/// are always present so the declared constants are tight.
Matrix random_spd(Rng& rng, Index n, double mu, double L);

/// Dense map with singular values log-uniform in [mu_xy, L_xy], endpoints forced.
LinearMap random_linear_map(Rng& rng, Index d_y, Index d_x, double mu_xy,
                            double L_xy);

struct QuadraticInstanceOptions {
  Index d_x = 20;
  Index d_y = 20;
  double kappa = 4;       // L_x / mu_x with mu_x = 1
  double kappa_xy = 2;    // L_xy / mu_xy with mu_xy = 1
  bool quadratic_fstar = false;  // else F* = 0
  double mu_y = 1;        // strong convexity of quadratic F*
};

/// Seeded random saddle-point instance with tight declared constants.
SaddleProblem random_quadratic_problem(Rng& rng, const QuadraticInstanceOptions& opt);

/// Local quadratics with eigenvalues log-uniform in [mu, L].
std::vector<LocalFunction> random_local_functions(Rng& rng, Index n, Index d,
                                                  double mu, double L);

}  // namespace saddlekit

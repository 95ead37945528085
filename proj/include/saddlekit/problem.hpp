#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/types.hpp"

namespace saddlekit {

/// Bilinear coupling term. The operator is either a dense matrix K, or
/// Khat (x) I_d in Kronecker form when block_dim > 1 (Khat is then square
/// and symmetric in all uses here; rows/cols scale by block_dim).
struct LinearMap {
  Matrix K;          // d_y x d_x, or Khat when block_dim > 1
  double L_xy = 0;   // operator norm bound
  double mu_xy = 0;  // smallest positive singular value bound
  Index block_dim = 1;

  Index rows() const { return K.rows() * block_dim; }
  Index cols() const { return K.cols() * block_dim; }

  Vector apply(const Vector& x) const;    // K x
  Vector apply_t(const Vector& y) const;  // K^T y

  /// Dense materialization of the full operator (test/oracle use).
  Matrix dense() const;
};

struct QuadraticForm {
  Matrix A;  // SPD (or PSD for F* variants)
  Vector a;  // linear term, value(x) = x'Ax/2 - a'x
};

/// Gradient oracle for the mu-strongly-convex, L-smooth term G.
struct SmoothOracle {
  std::function<Vector(const Vector&)> gradient;
  double mu = 0;
  double L = 0;
  std::optional<std::function<double(const Vector&)>> value;
  std::optional<std::function<Vector(const Vector&, double)>> prox;
  std::optional<QuadraticForm> quad;
  Index dim = 0;

  static SmoothOracle quadratic(Matrix A, Vector a, double mu, double L);

  bool has_prox() const { return prox.has_value(); }
  Vector call_prox(const Vector& p, double step) const;
};

enum class DualVariant { Zero, Quadratic, Custom };

/// F* enters every algorithm only through its prox map.
struct DualOracle {
  DualVariant variant = DualVariant::Zero;
  std::function<Vector(const Vector&, double)> prox;
  double mu_y = 0;  // used only by PPM / Chambolle-Pock
  std::optional<QuadraticForm> quad;
  Index dim = 0;

  static DualOracle zero(Index dim);
  static DualOracle quadratic(Matrix B, Vector b, double mu_y);
  static DualOracle custom(Index dim,
                           std::function<Vector(const Vector&, double)> prox,
                           double mu_y = 0);
};

struct SaddleProblem {
  SmoothOracle g;
  DualOracle fstar;
  LinearMap k;
  Index d_x = 0;
  Index d_y = 0;

  double kappa() const { return g.L / g.mu; }
  double kappa_xy() const { return k.L_xy / k.mu_xy; }
};

struct SaddleSolution {
  Vector x_star;
  Vector y_star;
  double residual = 0;
};

Vector apply_k(const SaddleProblem& p, const Vector& x);
Vector apply_kt(const SaddleProblem& p, const Vector& y);

struct CheckResult {
  std::string name;
  bool checked = true;  // false when not algorithmically checkable
  bool pass = false;
  double measured = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Checks Assumptions on the declared constants against the oracles:
/// eigenvalue bounds of K K^T vs (L_xy, mu_xy), spectrum of A vs (mu_x, L_x),
/// finite-difference gradient deviation when a value oracle is present.
/// Failures are reported, never thrown.
ValidationReport validate_problem(const SaddleProblem& p);

}  // namespace saddlekit

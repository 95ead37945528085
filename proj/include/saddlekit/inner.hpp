#pragma once

#include <functional>
#include <optional>
#include <string>

#include "saddlekit/types.hpp"

namespace saddlekit {

enum class InnerKind { GD, FGD_GD, FGD_FSFOM };

/// Certified gradient-norm decrease: ||grad Psi(w_T)||^2 <= A L^2 ||w0-w*||^2 / T^alpha.
struct InnerMethod {
  InnerKind kind = InnerKind::GD;
  int alpha = 2;
  double A = 4;

  static InnerMethod make(InnerKind kind);
  static std::optional<InnerMethod> parse(const std::string& name);
  std::string name() const;
};

struct SmoothConvexSubproblem {
  std::function<Vector(const Vector&)> gradient;
  double L = 0;
  std::optional<std::function<double(const Vector&)>> value;
  std::optional<Matrix> H;  // exact quadratic form: grad = H w - h
  std::optional<Vector> h;
};

struct InnerResult {
  Vector w_T;
  long grad_evals = 0;
  double grad_norm_sq = 0;
};

InnerResult gd_run(const SmoothConvexSubproblem& sub, const Vector& w0, int T);
InnerResult fgd_run(const SmoothConvexSubproblem& sub, const Vector& w0, int K);
/// OGM-G with horizon K: fixed-step method minimizing the final gradient norm.
InnerResult fsfom_run(const SmoothConvexSubproblem& sub, const Vector& wK, int K);

/// GD: T plain steps. FGD_GD: ceil(T/2) FGD steps then floor(T/2) GD steps.
/// FGD_FSFOM: ceil(T/2) FGD then floor(T/2) OGM-G steps.
InnerResult schedule_run(const InnerMethod& method, const SmoothConvexSubproblem& sub,
                         const Vector& w0, int T);

/// Checks the Lemma certificate against the exact minimizer (requires H, h).
bool certify(const InnerMethod& method, const SmoothConvexSubproblem& sub,
             const Vector& w0, int T);

}  // namespace saddlekit

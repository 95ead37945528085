#include "saddlekit/inner.hpp"

#include <cmath>
#include <vector>

namespace saddlekit {

InnerMethod InnerMethod::make(InnerKind kind) {
  switch (kind) {
    case InnerKind::GD:
      return {InnerKind::GD, 2, 4};
    case InnerKind::FGD_GD:
      return {InnerKind::FGD_GD, 3, 64};
    case InnerKind::FGD_FSFOM:
      return {InnerKind::FGD_FSFOM, 4, 256};
  }
  throw std::logic_error("unreachable");
}

std::optional<InnerMethod> InnerMethod::parse(const std::string& name) {
  if (name == "gd") return make(InnerKind::GD);
  if (name == "fgd-gd") return make(InnerKind::FGD_GD);
  if (name == "fgd-fsfom") return make(InnerKind::FGD_FSFOM);
  return std::nullopt;
}

std::string InnerMethod::name() const {
  switch (kind) {
    case InnerKind::GD:
      return "gd";
    case InnerKind::FGD_GD:
      return "fgd-gd";
    case InnerKind::FGD_FSFOM:
      return "fgd-fsfom";
  }
  return "?";
}

namespace {

void check_finite(const Vector& g, int iter) {
  if (!g.allFinite())
    throw NumericalError("non-finite gradient at inner iteration " +
                         std::to_string(iter));
}

}  // namespace

InnerResult gd_run(const SmoothConvexSubproblem& sub, const Vector& w0, int T) {
  if (T < 1) throw ConfigError("gd_run: T must be >= 1");
  const double step = 1.0 / sub.L;
  Vector w = w0;
  long evals = 0;
  for (int t = 0; t < T; ++t) {
    Vector g = sub.gradient(w);
    ++evals;
    check_finite(g, t);
    w -= step * g;
  }
  Vector gT = sub.gradient(w);
  ++evals;
  return {std::move(w), evals, gT.squaredNorm()};
}

InnerResult fgd_run(const SmoothConvexSubproblem& sub, const Vector& w0, int K) {
  if (K < 1) throw ConfigError("fgd_run: K must be >= 1");
  const double step = 1.0 / sub.L;
  Vector x = w0, z = w0;  // z is the extrapolated point
  double t = 1;
  long evals = 0;
  for (int k = 0; k < K; ++k) {
    Vector g = sub.gradient(z);
    ++evals;
    check_finite(g, k);
    Vector x_next = z - step * g;
    double t_next = 0.5 * (1 + std::sqrt(1 + 4 * t * t));
    z = x_next + ((t - 1) / t_next) * (x_next - x);
    x = x_next;
    t = t_next;
  }
  Vector gK = sub.gradient(x);
  ++evals;
  return {std::move(x), evals, gK.squaredNorm()};
}

InnerResult fsfom_run(const SmoothConvexSubproblem& sub, const Vector& wK, int K) {
  if (K < 1) throw ConfigError("fsfom_run: K must be >= 1");
  // OGM-G coefficients depend on the horizon and are computed backwards.
  std::vector<double> th(static_cast<size_t>(K) + 1);
  th[K] = 1;
  for (int i = K - 1; i >= 1; --i)
    th[i] = 0.5 * (1 + std::sqrt(1 + 4 * th[i + 1] * th[i + 1]));
  th[0] = 0.5 * (1 + std::sqrt(1 + 8 * th[1] * th[1]));

  const double step = 1.0 / sub.L;
  Vector x = wK, y = wK;
  long evals = 0;
  for (int i = 0; i < K; ++i) {
    Vector g = sub.gradient(x);
    ++evals;
    check_finite(g, i);
    Vector y_next = x - step * g;
    double c1 = (th[i] - 1) * (2 * th[i + 1] - 1) / (th[i] * (2 * th[i] - 1));
    double c2 = (2 * th[i + 1] - 1) / (2 * th[i] - 1);
    x = y_next + c1 * (y_next - y) + c2 * (y_next - x);
    y = y_next;
  }
  Vector gK = sub.gradient(x);
  ++evals;
  return {std::move(x), evals, gK.squaredNorm()};
}

InnerResult schedule_run(const InnerMethod& method, const SmoothConvexSubproblem& sub,
                         const Vector& w0, int T) {
  if (method.kind == InnerKind::GD) {
    if (T < 1) throw ConfigError("schedule_run: T must be >= 1");
    return gd_run(sub, w0, T);
  }
  if (T < 2) throw ConfigError("schedule_run: composite schedules need T >= 2");
  const int k1 = (T + 1) / 2;  // FGD gets the odd iteration
  const int k2 = T - k1;
  InnerResult first = fgd_run(sub, w0, k1);
  InnerResult second = method.kind == InnerKind::FGD_GD
                           ? gd_run(sub, first.w_T, k2)
                           : fsfom_run(sub, first.w_T, k2);
  second.grad_evals += first.grad_evals - 1;  // first phase's final eval is reused
  return second;
}

bool certify(const InnerMethod& method, const SmoothConvexSubproblem& sub,
             const Vector& w0, int T) {
  if (!sub.H || !sub.h)
    throw UnsupportedOracleError("certify: exact quadratic form required");
  Vector w_star = sub.H->ldlt().solve(*sub.h);
  InnerResult res = schedule_run(method, sub, w0, T);
  double bound = method.A * sub.L * sub.L * (w0 - w_star).squaredNorm() /
                 std::pow(static_cast<double>(T), method.alpha);
  return res.grad_norm_sq <= bound * (1 + 1e-12) + 1e-300;
}

}  // namespace saddlekit

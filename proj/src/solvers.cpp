#include "saddlekit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace saddlekit {

SolverState SolverState::init(const Vector& x0, const Vector& y0) {
  SolverState s;
  s.x = x0;
  s.y = y0;
  s.y_bar = y0;
  return s;
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "ppm") return Algorithm::PPM;
  if (name == "cp") return Algorithm::CP;
  if (name == "apda") return Algorithm::APDA;
  if (name == "apda-inexact") return Algorithm::APDA_INEXACT;
  return std::nullopt;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::PPM: return "ppm";
    case Algorithm::CP: return "cp";
    case Algorithm::APDA: return "apda";
    case Algorithm::APDA_INEXACT: return "apda-inexact";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// parameters

double ppm_params(double mu_x, double mu_y, double eta_x, double eta_y) {
  if (mu_x <= 0 || eta_x <= 0 || eta_y <= 0)
    throw ConfigError("ppm_params: inputs must be positive");
  if (mu_y <= 0)
    throw UnsupportedOracleError("ppm_params: requires strongly convex F*");
  return 1.0 / std::min(1 + 2 * mu_x * eta_x, 1 + 2 * mu_y * eta_y);
}

SolverParams cp_params(const SaddleProblem& p, double mu_y, CpVariant variant) {
  if (mu_y <= 0)
    throw UnsupportedOracleError("cp_params: requires strongly convex F*");
  const double mu_x = p.g.mu, L_xy = p.k.L_xy;
  SolverParams sp;
  if (variant == CpVariant::Theta0) {
    sp.eta_x = mu_y / (L_xy * L_xy);
    sp.eta_y = mu_x / (L_xy * L_xy);
    sp.theta = 0;
  } else {
    sp.eta_x = std::sqrt(mu_y / mu_x) / L_xy;
    sp.eta_y = std::sqrt(mu_x / mu_y) / L_xy;
    sp.theta = std::max(1.0 / (1 + 2 * mu_x * sp.eta_x),
                        1.0 / (1 + 2 * mu_y * sp.eta_y));
  }
  return sp;
}

SolverParams apda_params(const SaddleProblem& p) {
  const double L_x = p.g.L, mu_x = p.g.mu;
  const double L_xy = p.k.L_xy, mu_xy = p.k.mu_xy;
  SolverParams sp;
  sp.eta_x = mu_xy / (2 * std::sqrt(L_x * mu_x) * L_xy);
  sp.eta_y = std::sqrt(L_x * mu_x) / (L_xy * mu_xy);
  sp.beta_y = std::min(1 / L_x, 1 / (2 * L_xy * L_xy * sp.eta_y));
  sp.theta = std::max(1 / (1 + mu_x * sp.eta_x),
                      1 - mu_xy * mu_xy * sp.beta_y * sp.eta_y);
  return sp;
}

SolverParams apda_inexact_params(const SaddleProblem& p, const InnerMethod& inner) {
  const double L_x = p.g.L, mu_x = p.g.mu;
  const double L_xy = p.k.L_xy, mu_xy = p.k.mu_xy;
  SolverParams sp;
  sp.eta_x = mu_xy / (4 * std::sqrt(L_x * mu_x) * L_xy);
  sp.eta_y = std::sqrt(L_x * mu_x) / (8 * L_xy * mu_xy);
  sp.beta_y = std::min(1 / L_x, 1 / (2 * L_xy * L_xy * sp.eta_y));
  sp.theta = std::max(2 / (2 + mu_x * sp.eta_x),
                      1 - mu_xy * mu_xy * sp.beta_y * sp.eta_y);
  sp.inner = inner;
  sp.T = static_cast<int>(std::ceil(
      std::pow(20 * inner.A, 1.0 / inner.alpha) *
      std::pow(1 + std::sqrt(L_x / mu_x), 2.0 / inner.alpha)));
  return sp;
}

// ---------------------------------------------------------------------------
// steps

SolverState ppm_step(const SaddleProblem& p, const SolverState& s,
                     double eta_x, double eta_y) {
  if (!p.g.quad)
    throw UnsupportedOracleError("ppm_step: quadratic G required");
  Matrix B;
  Vector b;
  if (p.fstar.variant == DualVariant::Zero) {
    B = Matrix::Zero(p.d_y, p.d_y);
    b = Vector::Zero(p.d_y);
  } else if (p.fstar.variant == DualVariant::Quadratic) {
    B = p.fstar.quad->A;
    b = p.fstar.quad->a;
  } else {
    throw UnsupportedOracleError("ppm_step: quadratic or zero F* required");
  }
  const Matrix& A = p.g.quad->A;
  const Vector& a = p.g.quad->a;
  const Matrix K = p.k.dense();

  // implicit resolvent: [(I+hx A)  hx K^T; -hy K  (I+hy B)] [x'; y'] = rhs
  Matrix M(p.d_x + p.d_y, p.d_x + p.d_y);
  M.topLeftCorner(p.d_x, p.d_x) = Matrix::Identity(p.d_x, p.d_x) + eta_x * A;
  M.topRightCorner(p.d_x, p.d_y) = eta_x * K.transpose();
  M.bottomLeftCorner(p.d_y, p.d_x) = -eta_y * K;
  M.bottomRightCorner(p.d_y, p.d_y) = Matrix::Identity(p.d_y, p.d_y) + eta_y * B;
  Vector rhs(p.d_x + p.d_y);
  rhs.head(p.d_x) = s.x + eta_x * a;
  rhs.tail(p.d_y) = s.y + eta_y * b;
  Vector z = M.partialPivLu().solve(rhs);

  SolverState out = s;
  out.x_prev = s.x;
  out.y_prev = s.y;
  out.x = z.head(p.d_x);
  out.y = z.tail(p.d_y);
  out.y_bar = out.y;
  // counters unchanged: PPM is a reference oracle
  return out;
}

SolverState cp_step(const SaddleProblem& p, const SolverState& s,
                    const SolverParams& params) {
  if (!p.g.has_prox())
    throw UnsupportedOracleError("cp_step: prox of G required");
  SolverState out = s;
  out.x_prev = s.x;
  out.y_prev = s.y;
  out.x = p.g.call_prox(s.x - params.eta_x * apply_kt(p, s.y_bar), params.eta_x);
  out.y = p.fstar.prox(s.y + params.eta_y * apply_k(p, out.x), params.eta_y);
  out.y_bar = out.y + params.theta * (out.y - s.y);
  out.prox_evals += 2;
  return out;
}

SolverState apda_step(const SaddleProblem& p, const SolverState& s,
                      const SolverParams& params) {
  if (!p.g.has_prox())
    throw UnsupportedOracleError(
        "apda_step: prox of G unavailable; use apda_inexact_step");
  SolverState out = s;
  out.x_prev = s.x;
  out.y_prev = s.y;
  out.x = p.g.call_prox(s.x - params.eta_x * apply_kt(p, s.y_bar), params.eta_x);
  Vector grad = p.g.gradient(out.x);
  Vector correction = apply_k(p, apply_kt(p, s.y) + grad);
  out.y = p.fstar.prox(
      s.y + params.eta_y * apply_k(p, out.x) - params.eta_y * params.beta_y * correction,
      params.eta_y);
  out.y_bar = out.y + params.theta * (out.y - s.y);
  out.x_hat = out.x;
  out.prox_evals += 2;
  out.grad_evals += 1;
  return out;
}

SolverState apda_inexact_step(const SaddleProblem& p, const SolverState& s,
                              const SolverParams& params, bool use_exact_prox) {
  const double eta_x = params.eta_x;
  const Vector kty_bar = apply_kt(p, s.y_bar);
  const Vector shift = s.x - eta_x * kty_bar;

  SolverState out = s;
  out.x_prev = s.x;
  out.y_prev = s.y;

  Vector x_hat;
  if (use_exact_prox) {
    if (!p.g.quad)
      throw UnsupportedOracleError("apda_inexact_step: exact prox needs quadratic G");
    const Matrix& A = p.g.quad->A;
    Matrix M = A + Matrix::Identity(p.d_x, p.d_x) / eta_x;
    x_hat = M.ldlt().solve(p.g.quad->a + shift / eta_x);
  } else {
    SmoothConvexSubproblem sub;
    sub.L = p.g.L + 1 / eta_x;
    sub.gradient = [&](const Vector& w) -> Vector {
      return p.g.gradient(w) + (w - shift) / eta_x;
    };
    InnerResult res = schedule_run(params.inner, sub, s.x, params.T);
    x_hat = std::move(res.w_T);
    out.local_steps += params.T;
  }

  // diagnostic: exact subproblem minimizer for the Lyapunov ||x^k - w*^k|| term
  if (p.g.quad) {
    Matrix M = p.g.quad->A + Matrix::Identity(p.d_x, p.d_x) / eta_x;
    out.w_star_k = M.ldlt().solve(p.g.quad->a + shift / eta_x);
  } else {
    out.w_star_k.reset();
  }

  Vector grad = p.g.gradient(x_hat);
  out.x = s.x - eta_x * (grad + kty_bar);
  Vector correction = apply_k(p, apply_kt(p, s.y) + grad);
  out.y = p.fstar.prox(
      s.y + params.eta_y * apply_k(p, x_hat) - params.eta_y * params.beta_y * correction,
      params.eta_y);
  out.y_bar = out.y + params.theta * (out.y - s.y);
  out.x_hat = std::move(x_hat);
  out.grad_evals += params.T + 2;
  out.prox_evals += 1;
  return out;
}

// ---------------------------------------------------------------------------
// Lyapunov diagnostics

namespace {

LyapunovValue finish(LyapunovValue lv) {
  double total = 0;
  for (const auto& [name, v] : lv.components) total += v;
  lv.value = total;
  return lv;
}

}  // namespace

LyapunovValue lyapunov_distance(const SolverState& s, double eta_x, double eta_y,
                                const SaddleSolution& sol) {
  LyapunovValue lv;
  lv.components["dist_x"] = (s.x - sol.x_star).squaredNorm() / eta_x;
  lv.components["dist_y"] = (s.y - sol.y_star).squaredNorm() / eta_y;
  return finish(lv);
}

LyapunovValue lyapunov_cp(const SaddleProblem& p, const SolverState& s,
                          const SolverParams& params, double mu_y,
                          const SaddleSolution& sol) {
  const double mu_x = p.g.mu;
  LyapunovValue lv;
  lv.components["dist_x"] =
      (1 + 2 * mu_x * params.eta_x) * (s.x - sol.x_star).squaredNorm() / params.eta_x;
  lv.components["dist_y"] =
      (1 + 2 * mu_y * params.eta_y) * (s.y - sol.y_star).squaredNorm() / params.eta_y;
  if (s.y_prev.size() > 0) {
    Vector dy = s.y - s.y_prev;
    lv.components["dual_momentum"] = dy.squaredNorm() / params.eta_y;
    lv.components["cross"] = -2 * p.k.apply_t(dy).dot(s.x - sol.x_star);
  }
  return finish(lv);
}

LyapunovValue lyapunov_apda(const SaddleProblem& p, const SolverState& s,
                            const SolverParams& params, const SaddleSolution& sol) {
  const double mu_x = p.g.mu;
  LyapunovValue lv;
  lv.components["dist_x"] =
      (1 + mu_x * params.eta_x) * (s.x - sol.x_star).squaredNorm() / params.eta_x;
  lv.components["dist_y"] = (s.y - sol.y_star).squaredNorm() / params.eta_y;
  if (s.y_prev.size() > 0) {
    Vector dy = s.y - s.y_prev;
    lv.components["dual_momentum"] = dy.squaredNorm() / (2 * params.eta_y);
    lv.components["cross"] = -2 * p.k.apply_t(dy).dot(s.x - sol.x_star);
  }
  return finish(lv);
}

LyapunovValue lyapunov_apda_inexact(const SaddleProblem& p, const SolverState& s,
                                    const SolverParams& params,
                                    const SaddleSolution& sol,
                                    const Vector& w_star_k) {
  const double mu_x = p.g.mu;
  LyapunovValue lv;
  lv.components["dist_x"] = (1 + mu_x * params.eta_x / 2) *
                            (s.x - sol.x_star).squaredNorm() / params.eta_x;
  lv.components["dist_y"] = (s.y - sol.y_star).squaredNorm() / params.eta_y;
  if (s.y_prev.size() > 0) {
    // index convention: the prox-error term pairs x^k (= x_prev) with w*^k,
    // the cross term uses the inexact iterate x_hat^k of the same step
    Vector dy = s.y - s.y_prev;
    lv.components["dual_momentum"] = dy.squaredNorm() / (2 * params.eta_y);
    lv.components["prox_error"] =
        (s.x_prev - w_star_k).squaredNorm() / (8 * params.eta_x);
    lv.components["cross"] = -2 * p.k.apply_t(dy).dot(s.x_hat - sol.x_star);
  }
  return finish(lv);
}

// ---------------------------------------------------------------------------
// driver

const char* RunTrace::csv_header() {
  return "k,comm_rounds,grad_evals,prox_evals,local_steps,dist_x_sq,dist_y_sq,"
         "lyapunov,theta_bound";
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string RunTrace::to_csv(std::optional<unsigned long long> seed) const {
  std::ostringstream os;
  if (seed) os << "# seed=" << *seed << "\n";
  os << csv_header() << "\n";
  for (const auto& r : rows) {
    os << r.k << ',' << r.comm_rounds << ',' << r.grad_evals << ',' << r.prox_evals
       << ',' << r.local_steps << ',' << fmt_double(r.dist_x_sq) << ','
       << fmt_double(r.dist_y_sq) << ',';
    if (r.lyapunov) os << fmt_double(*r.lyapunov);
    os << ',' << fmt_double(r.theta_bound) << "\n";
  }
  return os.str();
}

RunTrace run(const SaddleProblem& p, Algorithm algorithm, const SolverParams& params,
             const Vector& x0, const Vector& y0, const StopRule& stop,
             const std::optional<SaddleSolution>& sol) {
  require_size(x0, p.d_x, "run: x0");
  require_size(y0, p.d_y, "run: y0");

  double theta_bound = params.theta;
  if (algorithm == Algorithm::PPM)
    theta_bound = ppm_params(p.g.mu, p.fstar.mu_y, params.eta_x, params.eta_y);
  else if (algorithm == Algorithm::CP && params.theta == 0)
    theta_bound = 1 / (1 + p.g.mu * p.fstar.mu_y / (p.k.L_xy * p.k.L_xy));

  const bool lyapunov_ok =
      sol.has_value() && (algorithm != Algorithm::APDA_INEXACT || p.g.quad.has_value());

  SolverState state = SolverState::init(x0, y0);
  RunTrace trace;

  auto eval_lyapunov = [&](const SolverState& s) -> std::optional<double> {
    if (!lyapunov_ok) return std::nullopt;
    switch (algorithm) {
      case Algorithm::PPM:
        return lyapunov_distance(s, params.eta_x, params.eta_y, *sol).value;
      case Algorithm::CP:
        if (params.theta == 0)
          return lyapunov_distance(s, params.eta_x, params.eta_y, *sol).value;
        return lyapunov_cp(p, s, params, p.fstar.mu_y, *sol).value;
      case Algorithm::APDA:
        return lyapunov_apda(p, s, params, *sol).value;
      case Algorithm::APDA_INEXACT:
        if (!s.w_star_k && s.y_prev.size() > 0) return std::nullopt;
        return lyapunov_apda_inexact(p, s, params, *sol,
                                     s.w_star_k ? *s.w_star_k : Vector())
            .value;
    }
    return std::nullopt;
  };

  auto record = [&](long k) {
    TraceRow r;
    r.k = k;
    r.comm_rounds = state.comm_rounds;
    r.grad_evals = state.grad_evals;
    r.prox_evals = state.prox_evals;
    r.local_steps = state.local_steps;
    if (sol) {
      r.dist_x_sq = (state.x - sol->x_star).squaredNorm();
      r.dist_y_sq = (state.y - sol->y_star).squaredNorm();
    }
    r.lyapunov = eval_lyapunov(state);
    r.theta_bound = theta_bound;
    trace.rows.push_back(std::move(r));
  };

  const double ref = sol ? std::max(1e-300, (x0 - sol->x_star).squaredNorm() +
                                                (y0 - sol->y_star).squaredNorm())
                         : 1 + x0.squaredNorm() + y0.squaredNorm();
  record(0);

  for (long k = 0; k < stop.max_iters; ++k) {
    switch (algorithm) {
      case Algorithm::PPM:
        state = ppm_step(p, state, params.eta_x, params.eta_y);
        break;
      case Algorithm::CP:
        state = cp_step(p, state, params);
        break;
      case Algorithm::APDA:
        state = apda_step(p, state, params);
        break;
      case Algorithm::APDA_INEXACT:
        state = apda_inexact_step(p, state, params);
        break;
    }
    record(k + 1);

    double measure = sol ? trace.rows.back().dist_x_sq + trace.rows.back().dist_y_sq
                         : state.x.squaredNorm() + state.y.squaredNorm();
    if (measure > 1e12 * ref) {  // harness guard against blowup
      trace.diverged = true;
      break;
    }
    if (sol && stop.eps > 0 && measure <= stop.eps * ref) {
      trace.converged = true;
      break;
    }
  }
  trace.final_state = std::move(state);
  return trace;
}

}  // namespace saddlekit

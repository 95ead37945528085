#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddlekit/inner.hpp"
#include "saddlekit/problem.hpp"

namespace saddlekit {

struct SolverParams {
  double eta_x = 0;
  double eta_y = 0;
  double beta_y = 0;
  double theta = 0;
  int T = 0;  // inner budget (inexact prox only)
  InnerMethod inner = InnerMethod::make(InnerKind::GD);
};

struct SolverState {
  Vector x, y, y_bar;
  Vector x_prev, y_prev;
  Vector x_hat;                  // inexact-prox iterate of the latest step
  std::optional<Vector> w_star_k;  // exact Psi^k minimizer, diagnostic only
  long grad_evals = 0;
  long prox_evals = 0;
  long local_steps = 0;
  long comm_rounds = 0;

  static SolverState init(const Vector& x0, const Vector& y0);
};

struct LyapunovValue {
  double value = 0;
  std::map<std::string, double> components;
};

enum class Algorithm { PPM, CP, APDA, APDA_INEXACT };
std::optional<Algorithm> parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm a);

// -- theorem-prescribed parameters ------------------------------------------

double ppm_params(double mu_x, double mu_y, double eta_x, double eta_y);

enum class CpVariant { Theta0, Extrapolated };
SolverParams cp_params(const SaddleProblem& p, double mu_y, CpVariant variant);

SolverParams apda_params(const SaddleProblem& p);
SolverParams apda_inexact_params(const SaddleProblem& p, const InnerMethod& inner);

// -- single steps -------------------------------------------------------------

SolverState ppm_step(const SaddleProblem& p, const SolverState& s,
                     double eta_x, double eta_y);
SolverState cp_step(const SaddleProblem& p, const SolverState& s,
                    const SolverParams& params);
SolverState apda_step(const SaddleProblem& p, const SolverState& s,
                      const SolverParams& params);
/// use_exact_prox replaces the inner method by the exact Psi^k minimizer
/// (quadratic G only); used by the oracle-equivalence checks.
SolverState apda_inexact_step(const SaddleProblem& p, const SolverState& s,
                              const SolverParams& params,
                              bool use_exact_prox = false);

// -- Lyapunov diagnostics -------------------------------------------------------

/// PPM and CP(theta=0) share the plain distance potential.
LyapunovValue lyapunov_distance(const SolverState& s, double eta_x, double eta_y,
                                const SaddleSolution& sol);
/// CP theta>0 potential; k=0 form used when y_prev is absent (size 0).
LyapunovValue lyapunov_cp(const SaddleProblem& p, const SolverState& s,
                          const SolverParams& params, double mu_y,
                          const SaddleSolution& sol);
LyapunovValue lyapunov_apda(const SaddleProblem& p, const SolverState& s,
                            const SolverParams& params, const SaddleSolution& sol);
LyapunovValue lyapunov_apda_inexact(const SaddleProblem& p, const SolverState& s,
                                    const SolverParams& params,
                                    const SaddleSolution& sol,
                                    const Vector& w_star_k);

// -- iteration driver -----------------------------------------------------------

struct StopRule {
  long max_iters = 1000;
  double eps = 0;  // relative squared-distance target; 0 disables
};

struct TraceRow {
  long k = 0;
  long comm_rounds = 0;
  long grad_evals = 0;
  long prox_evals = 0;
  long local_steps = 0;
  double dist_x_sq = 0;
  double dist_y_sq = 0;
  std::optional<double> lyapunov;
  double theta_bound = 0;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  bool converged = false;
  bool diverged = false;
  SolverState final_state;

  static const char* csv_header();  // bit-exact schema
  std::string to_csv(std::optional<unsigned long long> seed = std::nullopt) const;
};

RunTrace run(const SaddleProblem& p, Algorithm algorithm, const SolverParams& params,
             const Vector& x0, const Vector& y0, const StopRule& stop,
             const std::optional<SaddleSolution>& sol = std::nullopt);

}  // namespace saddlekit

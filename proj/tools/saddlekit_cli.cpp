#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "saddlekit/config.hpp"
#include "saddlekit/fedsim.hpp"
#include "saddlekit/oracles.hpp"
#include "saddlekit/random.hpp"
#include "saddlekit/solvers.hpp"

using namespace saddlekit;

namespace {

int log_level() {
  static int level = [] {
    const char* e = std::getenv("SADDLEKIT_LOG");
    if (!e) return 0;
    std::string s = e;
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file: " + out_path);
  f << payload;
}

int exit_code_for(const RunTrace& trace) {
  if (trace.diverged) return 3;
  if (trace.converged) return 0;
  return 2;  // budget exhausted
}

// ---------------------------------------------------------------------------
// solve

int cmd_solve(const std::string& config_path, long max_iters_override) {
  KvFile kv = KvFile::parse_file(config_path);
  kv.require_format_version();
  SaddleProblem p = load_problem(kv);

  std::string algo_name = kv.get_string("run", "algorithm");
  long max_iters = kv.get_long("run", "max_iters");
  if (max_iters_override >= 0) max_iters = max_iters_override;
  double eps = 0;
  if (auto v = kv.get_optional("run", "eps")) eps = kv.get_double("run", "eps");
  std::optional<unsigned long long> seed;
  if (kv.get_optional("run", "seed"))
    seed = static_cast<unsigned long long>(kv.get_long("run", "seed"));
  std::string out;
  if (auto v = kv.get_optional("run", "out")) out = *v;

  Algorithm algorithm;
  SolverParams params;
  if (algo_name == "ppm") {
    algorithm = Algorithm::PPM;
    params.eta_x = kv.get_double("run", "eta_x");
    params.eta_y = kv.get_double("run", "eta_y");
    ppm_params(p.g.mu, p.fstar.mu_y, params.eta_x, params.eta_y);
  } else if (algo_name == "cp0" || algo_name == "cp") {
    algorithm = Algorithm::CP;
    params = cp_params(p, p.fstar.mu_y,
                       algo_name == "cp0" ? CpVariant::Theta0 : CpVariant::Extrapolated);
  } else if (algo_name == "apda") {
    algorithm = Algorithm::APDA;
    params = apda_params(p);
  } else if (algo_name == "apda-inexact") {
    algorithm = Algorithm::APDA_INEXACT;
    std::string inner_name = "gd";
    if (auto v = kv.get_optional("run", "inner")) inner_name = *v;
    auto inner = InnerMethod::parse(inner_name);
    if (!inner) throw ConfigError("unknown inner method: " + inner_name);
    params = apda_inexact_params(p, *inner);
  } else {
    throw ConfigError("unknown algorithm: " + algo_name);
  }

  if (kv.get_optional("run", "theta")) {
    double theta = kv.get_double("run", "theta");
    if (theta < 0 || theta > 1) throw ConfigError("theta out of [0,1]");
    params.theta = theta;
  }

  Vector x0 = Vector::Ones(p.d_x);
  Vector y0 = Vector::Zero(p.d_y);
  if (kv.get_optional("run", "x0")) x0 = kv.get_vector("run", "x0", p.d_x);
  if (kv.get_optional("run", "y0")) y0 = kv.get_vector("run", "y0", p.d_y);

  kv.reject_unconsumed();

  log_info("solve: algorithm=" + algo_name + " max_iters=" + std::to_string(max_iters));
  auto sol = kkt_solve(p);
  RunTrace trace = run(p, algorithm, params, x0, y0, {max_iters, eps}, sol);
  emit(out, trace.to_csv(seed));
  log_info("solve: converged=" + std::to_string(trace.converged) +
           " rows=" + std::to_string(trace.rows.size()));
  return exit_code_for(trace);
}

// ---------------------------------------------------------------------------
// fedsim

int cmd_fedsim(const std::string& topology_name_, long nodes, long dim, double kappa,
               const std::string& inner_name, const std::string& algo,
               double eps, long max_iters, unsigned long long seed,
               const std::string& out) {
  auto topo = parse_topology(topology_name_);
  if (!topo) throw ConfigError("unknown topology: " + topology_name_);
  auto inner = InnerMethod::parse(inner_name);
  if (!inner) throw ConfigError("unknown inner method: " + inner_name);
  if (algo != "apda-inexact" && algo != "apda-gossip")
    throw ConfigError("unknown fedsim algorithm: " + algo);

  Rng rng(seed);
  auto locals = random_local_functions(rng, nodes, dim, 1, kappa);
  auto cp = build_consensus(std::move(locals), build_gossip(*topo, nodes));
  log_info("fedsim: n=" + std::to_string(nodes) + " d=" + std::to_string(dim) +
           " chi=" + fmt(cp.gossip.chi));

  StopRule stop{max_iters, eps};
  FedTrace ft = algo == "apda-inexact"
                    ? solve_fed_apda_inexact(cp, *inner, stop)
                    : solve_fed_apda_gossip(cp, *inner, stop);
  emit(out, ft.trace.to_csv(seed));
  log_info("fedsim: converged=" + std::to_string(ft.trace.converged) +
           " consensus_error=" + fmt(ft.consensus_error.back()));
  return exit_code_for(ft.trace);
}

// ---------------------------------------------------------------------------
// rates

int cmd_rates(const std::string& suite, unsigned long long base_seed,
              const std::string& out) {
  std::ostringstream report;
  report << "suite=" << suite << " seeds=" << base_seed << ".." << base_seed + 19
         << "\n";
  double worst_overall = 0;
  std::vector<unsigned long long> violations;

  for (int i = 0; i < 20; ++i) {
    unsigned long long seed = base_seed + i;
    Rng rng(seed);
    QuadraticInstanceOptions opt;
    opt.d_x = opt.d_y = 20;
    opt.kappa = (i % 2 == 0) ? 4 : 100;
    opt.quadratic_fstar = (suite == "ppm" || suite == "cp0" || suite == "cp");
    auto p = random_quadratic_problem(rng, opt);
    auto sol = kkt_solve(p);

    Algorithm algorithm;
    SolverParams params;
    if (suite == "ppm") {
      algorithm = Algorithm::PPM;
      const double etas[3] = {0.1, 1, 100};
      params.eta_x = etas[i % 3];
      params.eta_y = etas[(i + 1) % 3];
    } else if (suite == "cp0") {
      algorithm = Algorithm::CP;
      params = cp_params(p, p.fstar.mu_y, CpVariant::Theta0);
    } else if (suite == "cp") {
      algorithm = Algorithm::CP;
      params = cp_params(p, p.fstar.mu_y, CpVariant::Extrapolated);
    } else if (suite == "apda") {
      algorithm = Algorithm::APDA;
      params = apda_params(p);
    } else if (suite == "apda_inexact") {
      algorithm = Algorithm::APDA_INEXACT;
      params = apda_inexact_params(p, InnerMethod::make(InnerKind::FGD_GD));
    } else {
      throw ConfigError("unknown rates suite: " + suite);
    }

    auto trace = run(p, algorithm, params, Vector::Ones(p.d_x),
                     Vector::Zero(p.d_y), {300, 0}, sol);
    double worst = 0;
    bool violated = false;
    const double floor =
        trace.rows[0].lyapunov ? *trace.rows[0].lyapunov * 1e-24 : 0;
    for (size_t k = 1; k < trace.rows.size(); ++k) {
      if (!trace.rows[k - 1].lyapunov || !trace.rows[k].lyapunov) continue;
      double prev = *trace.rows[k - 1].lyapunov;
      if (prev < floor) break;  // below this the quotient is roundoff noise
      double ratio = *trace.rows[k].lyapunov / (prev * trace.rows[k].theta_bound);
      worst = std::max(worst, ratio);
      if (ratio > 1 + 1e-9) violated = true;
    }
    worst_overall = std::max(worst_overall, worst);
    report << "seed=" << seed << " kappa=" << fmt(opt.kappa)
           << " theta=" << fmt(trace.rows[0].theta_bound)
           << " worst_ratio=" << fmt(worst) << (violated ? " VIOLATION" : "")
           << "\n";
    if (violated) violations.push_back(seed);
    log_debug("rates: seed " + std::to_string(seed) + " done");
  }

  report << "worst_ratio_overall=" << fmt(worst_overall) << "\n";
  if (!violations.empty()) {
    report << "violations:";
    for (auto s : violations) report << ' ' << s;
    report << "\n";
  }
  emit(out, report.str());
  return violations.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scaling

int cmd_scaling(const std::string& topology_name_, long nodes, long dim, double eps,
                unsigned long long seed, int jobs, const std::string& out) {
  auto topo = parse_topology(topology_name_);
  if (!topo) throw ConfigError("unknown topology: " + topology_name_);

  const std::vector<double> kappas = {16, 64, 256, 1024};
  const std::vector<InnerMethod> inners = {InnerMethod::make(InnerKind::GD),
                                           InnerMethod::make(InnerKind::FGD_GD),
                                           InnerMethod::make(InnerKind::FGD_FSFOM)};

  std::vector<ConsensusProblem> problems;
  for (size_t i = 0; i < kappas.size(); ++i) {
    Rng rng(seed + i);
    auto locals = random_local_functions(rng, nodes, dim, 1, kappas[i]);
    problems.push_back(build_consensus(std::move(locals), build_gossip(*topo, nodes)));
  }

  const size_t cells = kappas.size() * inners.size();
  ScalingTable table;
  table.rows.resize(cells);
  auto run_cell = [&](size_t c) {
    size_t ki = c / inners.size(), ii = c % inners.size();
    FedTrace ft = solve_fed_apda_inexact(problems[ki], inners[ii], {200000, eps});
    ScalingRow row;
    row.kappa = kappas[ki];
    row.chi = problems[ki].gossip.chi;
    row.inner = inners[ii].name();
    row.outer_iters = static_cast<long>(ft.trace.rows.size()) - 1;
    row.comm_rounds = ft.trace.rows.back().comm_rounds;
    row.local_steps_per_round = ft.params.T;
    row.converged = ft.trace.converged;
    table.rows[c] = std::move(row);
  };

  if (jobs <= 1) {
    for (size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::vector<std::future<void>> pending;
    for (size_t c = 0; c < cells; ++c) {
      if (pending.size() >= static_cast<size_t>(jobs)) {
        pending.front().get();
        pending.erase(pending.begin());
      }
      pending.push_back(std::async(std::launch::async, run_cell, c));
    }
    for (auto& f : pending) f.get();
  }

  std::ostringstream os;
  os << "# seed=" << seed << "\n";
  os << "kappa,chi,inner,outer_iters,comm_rounds,local_steps_per_round,converged\n";
  for (const auto& r : table.rows)
    os << fmt(r.kappa) << ',' << fmt(r.chi) << ',' << r.inner << ','
       << r.outer_iters << ',' << r.comm_rounds << ',' << r.local_steps_per_round
       << ',' << (r.converged ? 1 : 0) << "\n";
  bool all_converged = true;
  for (const auto& inner : inners) {
    os << "# slope_T_" << inner.name() << '=' << fmt(table.slope_T(inner.name()))
       << "\n";
    os << "# slope_outer_" << inner.name() << '='
       << fmt(table.slope_outer(inner.name())) << "\n";
  }
  for (const auto& r : table.rows) all_converged = all_converged && r.converged;
  emit(out, os.str());
  return all_converged ? 0 : 2;
}

// ---------------------------------------------------------------------------
// spectrum

std::vector<std::pair<Index, Index>> parse_edges(const std::string& text) {
  std::vector<std::pair<Index, Index>> edges;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    size_t comma = tok.find(',');
    if (comma == std::string::npos)
      throw ConfigError("edges must be 'i,j' pairs separated by spaces");
    edges.emplace_back(std::stol(tok.substr(0, comma)),
                       std::stol(tok.substr(comma + 1)));
  }
  return edges;
}

int cmd_spectrum(const std::string& topology_name_, long nodes,
                 const std::string& edges_text, const std::string& out) {
  auto topo = parse_topology(topology_name_);
  if (!topo) throw ConfigError("unknown topology: " + topology_name_);
  auto g = build_gossip(*topo, nodes, parse_edges(edges_text));
  auto p = ag_params(g);
  std::ostringstream os;
  os << "lambda_max=" << fmt(g.lambda_max) << "\n";
  os << "lambda_min_plus=" << fmt(g.lambda_min_plus) << "\n";
  os << "chi=" << fmt(g.chi) << "\n";
  os << "lambda1=" << fmt(p.lambda1) << "\n";
  os << "lambda2=" << fmt(p.lambda2) << "\n";
  os << "N=" << p.N << "\n";
  emit(out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------
// certify-inner

int cmd_certify_inner(unsigned long long seed, const std::string& out) {
  std::ostringstream os;
  os << "method,T,passed,total,status\n";
  bool all_ok = true;
  for (auto kind : {InnerKind::GD, InnerKind::FGD_GD, InnerKind::FGD_FSFOM}) {
    auto method = InnerMethod::make(kind);
    for (int T : {4, 8, 16, 32, 64}) {
      Rng rng(seed);
      int passed = 0;
      const int total = 50;
      for (int t = 0; t < total; ++t) {
        Index d = 5 + t % 4;
        Matrix H = random_spd(rng, d, 0.1, 2 + t % 10);
        std::normal_distribution<double> normal(0, 1);
        Vector h(d), w0(d);
        for (Index i = 0; i < d; ++i) {
          h[i] = normal(rng);
          w0[i] = normal(rng);
        }
        SmoothConvexSubproblem sub;
        Eigen::SelfAdjointEigenSolver<Matrix> es(H);
        sub.L = es.eigenvalues().maxCoeff();
        sub.gradient = [&H, &h](const Vector& w) -> Vector { return H * w - h; };
        sub.H = H;
        sub.h = h;
        if (certify(method, sub, w0, T)) ++passed;
      }
      bool ok = passed == total;
      all_ok = all_ok && ok;
      os << method.name() << ',' << T << ',' << passed << ',' << total << ','
         << (ok ? "pass" : "FAIL") << "\n";
    }
  }
  emit(out, os.str());
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saddle-point solver benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out;
  long max_iters_override = -1;
  auto* solve = app.add_subcommand("solve", "run a solver from a config file");
  solve->add_option("config", config_path, "experiment config file")->required();
  solve->add_option("--max-iters", max_iters_override, "override iteration budget");

  std::string topology = "complete", inner = "gd", algo = "apda-inexact";
  long nodes = 4, dim = 5, max_iters = 100000;
  double kappa = 16, eps = 1e-10;
  unsigned long long seed = 1;
  auto* fedsim = app.add_subcommand("fedsim", "simulate the decentralized solver");
  fedsim->add_option("--topology", topology);
  fedsim->add_option("--nodes", nodes);
  fedsim->add_option("--dim", dim);
  fedsim->add_option("--kappa", kappa);
  fedsim->add_option("--inner", inner);
  fedsim->add_option("--algorithm", algo);
  fedsim->add_option("--eps", eps);
  fedsim->add_option("--max-iters", max_iters);
  fedsim->add_option("--seed", seed);
  fedsim->add_option("--out", out);

  std::string suite;
  auto* rates = app.add_subcommand("rates", "verify per-step contraction rates");
  rates->add_option("suite", suite, "ppm|cp0|cp|apda|apda_inexact")->required();
  rates->add_option("--seed", seed);
  rates->add_option("--out", out);

  int jobs = 1;
  double scaling_eps = 1e-8;
  auto* scaling = app.add_subcommand("scaling", "local-steps scaling study");
  scaling->add_option("--topology", topology);
  scaling->add_option("--nodes", nodes);
  scaling->add_option("--dim", dim);
  scaling->add_option("--eps", scaling_eps);
  scaling->add_option("--seed", seed);
  scaling->add_option("--jobs", jobs);
  scaling->add_option("--out", out);

  std::string edges;
  auto* spectrum = app.add_subcommand("spectrum", "gossip matrix spectral report");
  spectrum->add_option("--topology", topology);
  spectrum->add_option("--nodes", nodes);
  spectrum->add_option("--edges", edges, "custom edges as 'i,j' pairs");
  spectrum->add_option("--out", out);

  auto* certify = app.add_subcommand("certify-inner", "inner solver certificates");
  certify->add_option("--seed", seed);
  certify->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) return cmd_solve(config_path, max_iters_override);
    if (fedsim->parsed())
      return cmd_fedsim(topology, nodes, dim, kappa, inner, algo, eps, max_iters,
                        seed, out);
    if (rates->parsed()) return cmd_rates(suite, seed, out);
    if (scaling->parsed())
      return cmd_scaling(topology, nodes, dim, scaling_eps, seed, jobs, out);
    if (spectrum->parsed()) return cmd_spectrum(topology, nodes, edges, out);
    if (certify->parsed()) return cmd_certify_inner(seed, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedOracleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

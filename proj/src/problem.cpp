#include "saddlekit/problem.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace saddlekit {

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != cols()) throw ShapeError("LinearMap::apply: dimension mismatch");
  if (block_dim == 1) return K * x;
  // x viewed as d x n column blocks; (Khat (x) I_d) x stacks sum_j Khat_ij x_j
  Eigen::Map<const Matrix> X(x.data(), block_dim, K.cols());
  Matrix Y = X * K.transpose();
  return Eigen::Map<const Vector>(Y.data(), Y.size());
}

Vector LinearMap::apply_t(const Vector& y) const {
  if (y.size() != rows()) throw ShapeError("LinearMap::apply_t: dimension mismatch");
  if (block_dim == 1) return K.transpose() * y;
  Eigen::Map<const Matrix> Y(y.data(), block_dim, K.rows());
  Matrix X = Y * K;
  return Eigen::Map<const Vector>(X.data(), X.size());
}

Matrix LinearMap::dense() const {
  if (block_dim == 1) return K;
  Matrix full = Matrix::Zero(rows(), cols());
  for (Index i = 0; i < K.rows(); ++i)
    for (Index j = 0; j < K.cols(); ++j)
      full.block(i * block_dim, j * block_dim, block_dim, block_dim) =
          K(i, j) * Matrix::Identity(block_dim, block_dim);
  return full;
}

SmoothOracle SmoothOracle::quadratic(Matrix A, Vector a, double mu, double L) {
  SmoothOracle o;
  o.dim = A.rows();
  o.mu = mu;
  o.L = L;
  Matrix Ac = A;
  Vector ac = a;
  o.gradient = [Ac, ac](const Vector& x) -> Vector { return Ac * x - ac; };
  o.value = [Ac, ac](const Vector& x) { return 0.5 * x.dot(Ac * x) - ac.dot(x); };
  o.prox = [Ac, ac](const Vector& p, double s) -> Vector {
    Matrix M = Ac + Matrix::Identity(Ac.rows(), Ac.cols()) / s;
    return M.ldlt().solve(ac + p / s);
  };
  o.quad = QuadraticForm{std::move(A), std::move(a)};
  return o;
}

Vector SmoothOracle::call_prox(const Vector& p, double step) const {
  if (!prox) throw UnsupportedOracleError("SmoothOracle: no prox oracle");
  return (*prox)(p, step);
}

DualOracle DualOracle::zero(Index dim) {
  DualOracle o;
  o.variant = DualVariant::Zero;
  o.dim = dim;
  o.mu_y = 0;
  o.prox = [](const Vector& p, double) { return p; };
  return o;
}

DualOracle DualOracle::quadratic(Matrix B, Vector b, double mu_y) {
  DualOracle o;
  o.variant = DualVariant::Quadratic;
  o.dim = B.rows();
  o.mu_y = mu_y;
  Matrix Bc = B;
  Vector bc = b;
  o.prox = [Bc, bc](const Vector& p, double s) -> Vector {
    Matrix M = Bc + Matrix::Identity(Bc.rows(), Bc.cols()) / s;
    return M.ldlt().solve(bc + p / s);
  };
  o.quad = QuadraticForm{std::move(B), std::move(b)};
  return o;
}

DualOracle DualOracle::custom(Index dim,
                              std::function<Vector(const Vector&, double)> prox,
                              double mu_y) {
  DualOracle o;
  o.variant = DualVariant::Custom;
  o.dim = dim;
  o.mu_y = mu_y;
  o.prox = std::move(prox);
  return o;
}

Vector apply_k(const SaddleProblem& p, const Vector& x) {
  require_size(x, p.d_x, "apply_k");
  return p.k.apply(x);
}

Vector apply_kt(const SaddleProblem& p, const Vector& y) {
  require_size(y, p.d_y, "apply_kt");
  return p.k.apply_t(y);
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (c.checked && !c.pass) return false;
  return true;
}

namespace {

// Eigenvalues of K K^T from the small factor when K is in Kronecker form.
Vector kkt_eigenvalues(const LinearMap& k) {
  Matrix KKt = k.K * k.K.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(KKt);
  return es.eigenvalues();
}

}  // namespace

ValidationReport validate_problem(const SaddleProblem& p) {
  ValidationReport rep;

  // shape
  {
    CheckResult c{"shape"};
    c.pass = p.k.rows() == p.d_y && p.k.cols() == p.d_x &&
             p.g.dim == p.d_x && p.fstar.dim == p.d_y;
    c.measured = 0;
    rep.checks.push_back(c);
  }

  // Assumptions 1-2: spectrum of A within [mu_x, L_x]
  if (p.g.quad) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.g.quad->A);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    CheckResult c1{"g_strong_convexity"};
    c1.measured = lo;
    c1.pass = lo >= p.g.mu * (1 - 1e-10) - 1e-12;
    rep.checks.push_back(c1);
    CheckResult c2{"g_smoothness"};
    c2.measured = hi;
    c2.pass = hi <= p.g.L * (1 + 1e-10) + 1e-12;
    rep.checks.push_back(c2);
  } else if (p.g.value) {
    // finite-difference gradient check on sampled points
    double worst = 0;
    const double h = 1e-5;
    for (int s = 0; s < 5; ++s) {
      Vector x = Vector::Zero(p.d_x);
      for (Index i = 0; i < p.d_x; ++i)
        x[i] = std::sin(0.7 * static_cast<double>(i + 1) * (s + 1));
      Vector g = p.g.gradient(x);
      Vector fd(p.d_x);
      for (Index i = 0; i < p.d_x; ++i) {
        Vector e = Vector::Zero(p.d_x);
        e[i] = h;
        fd[i] = ((*p.g.value)(x + e) - (*p.g.value)(x - e)) / (2 * h);
      }
      double dev = (g - fd).norm() / (1 + g.norm());
      worst = std::max(worst, dev);
    }
    CheckResult c{"g_gradient_fd"};
    c.measured = worst;
    c.pass = worst <= 1e-5;
    rep.checks.push_back(c);
  } else {
    CheckResult c{"g_oracle"};
    c.checked = false;
    c.detail = "no exact form or value oracle; unchecked";
    rep.checks.push_back(c);
  }

  // Assumption 4 / L_xy: eigenvalue bounds of K K^T
  {
    Vector ev = kkt_eigenvalues(p.k);
    double lam_max = ev.maxCoeff();
    CheckResult cl{"k_operator_norm"};
    cl.measured = std::sqrt(std::max(0.0, lam_max));
    cl.pass = p.k.L_xy * p.k.L_xy >= lam_max * (1 - 1e-10);
    rep.checks.push_back(cl);

    // smallest positive eigenvalue (range branch) vs smallest eigenvalue
    double tol = 1e-10 * std::max(1.0, lam_max);
    double lam_min = ev.minCoeff();
    double lam_min_plus = lam_max;
    bool has_positive = false;
    for (Index i = 0; i < ev.size(); ++i)
      if (ev[i] > tol) {
        lam_min_plus = std::min(lam_min_plus, ev[i]);
        has_positive = true;
      }
    CheckResult cm{"k_mu_xy"};
    bool range_branch = lam_min <= tol;
    double bound = range_branch ? (has_positive ? lam_min_plus : 0.0) : lam_min;
    cm.measured = std::sqrt(std::max(0.0, bound));
    cm.pass = p.k.mu_xy > 0 && p.k.mu_xy * p.k.mu_xy <= bound * (1 + 1e-10);
    cm.detail = range_branch ? "range branch (lambda+_min of KK^T)" : "full rank";
    // The subdifferential-range condition of Assumption 4 is only checkable
    // for the built-in F* variants.
    if (range_branch && p.fstar.variant == DualVariant::Custom) {
      cm.detail += "; dF* range condition unchecked for custom F*";
    }
    rep.checks.push_back(cm);
  }

  // Assumption 3: firm nonexpansiveness of the dual prox on sampled pairs
  {
    CheckResult c{"fstar_prox_nonexpansive"};
    double worst = 0;
    for (int s = 0; s < 20; ++s) {
      Vector u(p.d_y), v(p.d_y);
      for (Index i = 0; i < p.d_y; ++i) {
        u[i] = std::cos(1.3 * static_cast<double>(i + 1) * (s + 1));
        v[i] = std::sin(2.1 * static_cast<double>(i + 1) * (s + 2));
      }
      double step = 0.5 + 0.1 * s;
      double num = (p.fstar.prox(u, step) - p.fstar.prox(v, step)).norm();
      double den = (u - v).norm();
      if (den > 0) worst = std::max(worst, num / den);
    }
    c.measured = worst;
    c.pass = worst <= 1 + 1e-10;
    rep.checks.push_back(c);
  }

  return rep;
}

}  // namespace saddlekit

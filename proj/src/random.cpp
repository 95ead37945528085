#include "saddlekit/random.hpp"

#include <Eigen/QR>
#include <cmath>

namespace saddlekit {

Matrix random_orthogonal(Rng& rng, Index n) {
  std::normal_distribution<double> normal(0, 1);
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) M(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = qr.householderQ();
  // fix signs so the factorization is unique
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

namespace {

Vector log_uniform_spectrum(Rng& rng, Index n, double lo, double hi) {
  Vector ev(n);
  ev[0] = lo;
  if (n > 1) ev[n - 1] = hi;
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  for (Index i = 1; i + 1 < n; ++i) ev[i] = std::exp(u(rng));
  return ev;
}

}  // namespace

Matrix random_spd(Rng& rng, Index n, double mu, double L) {
  Vector ev = log_uniform_spectrum(rng, n, mu, L);
  Matrix Q = random_orthogonal(rng, n);
  return Q * ev.asDiagonal() * Q.transpose();
}

LinearMap random_linear_map(Rng& rng, Index d_y, Index d_x, double mu_xy,
                            double L_xy) {
  const Index r = std::min(d_x, d_y);
  Vector sv = log_uniform_spectrum(rng, r, mu_xy, L_xy);
  Matrix U = random_orthogonal(rng, d_y);
  Matrix V = random_orthogonal(rng, d_x);
  Matrix S = Matrix::Zero(d_y, d_x);
  for (Index i = 0; i < r; ++i) S(i, i) = sv[i];
  LinearMap k;
  k.K = U * S * V.transpose();
  k.L_xy = L_xy;
  k.mu_xy = mu_xy;
  return k;
}

SaddleProblem random_quadratic_problem(Rng& rng, const QuadraticInstanceOptions& opt) {
  std::normal_distribution<double> normal(0, 1);
  SaddleProblem p;
  p.d_x = opt.d_x;
  p.d_y = opt.d_y;
  Matrix A = random_spd(rng, opt.d_x, 1.0, opt.kappa);
  Vector a(opt.d_x);
  for (Index i = 0; i < opt.d_x; ++i) a[i] = normal(rng);
  p.g = SmoothOracle::quadratic(std::move(A), std::move(a), 1.0, opt.kappa);
  p.k = random_linear_map(rng, opt.d_y, opt.d_x, 1.0, opt.kappa_xy);
  if (opt.quadratic_fstar) {
    Matrix B = random_spd(rng, opt.d_y, opt.mu_y, 4 * opt.mu_y);
    Vector b(opt.d_y);
    for (Index i = 0; i < opt.d_y; ++i) b[i] = normal(rng);
    p.fstar = DualOracle::quadratic(std::move(B), std::move(b), opt.mu_y);
  } else {
    p.fstar = DualOracle::zero(opt.d_y);
  }
  return p;
}

std::vector<LocalFunction> random_local_functions(Rng& rng, Index n, Index d,
                                                  double mu, double L) {
  std::normal_distribution<double> normal(0, 1);
  std::vector<LocalFunction> out;
  out.reserve(n);
  for (Index i = 0; i < n; ++i) {
    LocalFunction f;
    f.A = random_spd(rng, d, mu, L);
    f.b = Vector(d);
    for (Index j = 0; j < d; ++j) f.b[j] = normal(rng);
    f.mu = mu;
    f.L = L;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace saddlekit

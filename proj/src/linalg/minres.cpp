#include "mhd/linalg/minres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mhd/linalg/kernels.hpp"

namespace mhd::linalg {

MinresResult minres(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                    const MinresOptions& options) {
  if (a.rows() != a.cols() || b.size() != static_cast<std::size_t>(a.rows())) {
    throw std::invalid_argument("minres: dimension mismatch");
  }
  if (!is_symmetric(a, 1e-12)) throw std::invalid_argument("minres: matrix is not symmetric");

  const std::size_t n = b.size();
  MinresResult res;
  res.x.assign(n, 0.0);

  std::vector<double> r1(b.begin(), b.end());
  std::vector<double> r2 = r1;
  std::vector<double> y(n);
  m(r1, y);
  const double beta1_sq = simd::dot(r1, y);
  if (beta1_sq < 0) throw std::invalid_argument("minres: preconditioner is not positive definite");
  const double beta1 = std::sqrt(beta1_sq);
  if (beta1 == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> v(n), w(n, 0.0), w1(n), w2(n, 0.0);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (int itn = 1; itn <= options.maxit; ++itn) {
    const double s = 1.0 / beta;
    for (std::size_t i = 0; i < n; ++i) v[i] = s * y[i];
    a.multiply(v, y);
    if (itn >= 2) simd::axpy(-beta / oldb, r1, y);
    const double alfa = simd::dot(v, y);
    simd::axpy(-alfa / beta, r2, y);
    std::swap(r1, r2);
    r2 = y;
    m(r2, y);
    oldb = beta;
    const double beta_sq = simd::dot(r2, y);
    if (beta_sq < 0) throw std::invalid_argument("minres: preconditioner is not positive definite");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    std::swap(w1, w2);
    std::swap(w2, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
    simd::axpy(phi, w, res.x);

    res.iterations = itn;
    res.relative_residual = phibar / beta1;
    res.history.push_back(res.relative_residual);
    if (res.relative_residual <= options.tol) {
      res.converged = true;
      break;
    }
    if (beta == 0.0) {
      // Krylov space exhausted: the current iterate is exact.
      res.converged = true;
      break;
    }
  }
  return res;
}

MinresResult minres(const SparseMatrix& a, std::span<const double> b, const MinresOptions& options) {
  return minres(
      a, b, [](std::span<const double> r, std::span<double> z) { std::copy(r.begin(), r.end(), z.begin()); },
      options);
}

}  // namespace mhd::linalg

#include "mhd/linalg/direct.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace mhd::linalg {

namespace {

using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

EigenCsc to_eigen(const SparseMatrix& a) {
  Eigen::Map<const EigenCsr> view(a.rows(), a.cols(), a.nnz(), a.row_ptr().data(), a.col_idx().data(),
                                  a.values().data());
  EigenCsc out = view;
  out.makeCompressed();
  return out;
}

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

double residual_bound(const SparseMatrix& a, std::span<const double> x, std::span<const double> b,
                      std::vector<double>& r) {
  r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return 1e-10 * (a.norm_inf() * norm_inf(x) + norm_inf(b));
}

}  // namespace

struct SparseLU::Impl {
  Eigen::SparseLU<EigenCsc, Eigen::COLAMDOrdering<int>> lu;
};

SparseLU::SparseLU(const SparseMatrix& a) : impl_(std::make_unique<Impl>()), a_(a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseLU: matrix must be square");
  const EigenCsc m = to_eigen(a);
  impl_->lu.setPivotThreshold(0.1);
  impl_->lu.analyzePattern(m);
  impl_->lu.factorize(m);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("SparseLU: factorization failed (" + impl_->lu.lastErrorMessage() + ")");
  }

  // Hager's estimate of ||A^{-1}||_1.
  const int n = a.rows();
  if (n == 0) {
    rcond_ = 1.0;
    return;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXd y = impl_->lu.solve(x);
    if (!y.allFinite()) {
      est = std::numeric_limits<double>::infinity();
      break;
    }
    const double ynorm = y.lpNorm<1>();
    if (iter > 0 && ynorm <= est) {
      est = std::max(est, ynorm);
      break;
    }
    est = ynorm;
    const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0 ? 1.0 : -1.0; });
    const Eigen::VectorXd z = impl_->lu.transpose().solve(xi);
    Eigen::Index j = 0;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= z.dot(x)) break;
    x.setZero();
    x[j] = 1.0;
  }
  const double anorm = a.norm_one();
  rcond_ = (anorm > 0 && std::isfinite(est) && est > 0) ? 1.0 / (anorm * est) : 0.0;
  if (!(rcond_ >= 1e-13)) {
    throw SingularMatrixError("SparseLU: matrix is numerically singular (rcond estimate " + std::to_string(rcond_) +
                              ")");
  }
}

SparseLU::~SparseLU() = default;
SparseLU::SparseLU(SparseLU&&) noexcept = default;
SparseLU& SparseLU::operator=(SparseLU&&) noexcept = default;

int SparseLU::size() const { return a_.rows(); }

std::vector<double> SparseLU::solve(std::span<const double> b) const {
  if (b.size() != static_cast<std::size_t>(a_.rows())) throw std::invalid_argument("SparseLU::solve: size mismatch");
  Eigen::VectorXd x = impl_->lu.solve(as_eigen(b));
  std::vector<double> xs(x.data(), x.data() + x.size());
  std::vector<double> r;
  // One refinement step always: cheap next to the factorization and it
  // brings the solution close to the rounding level of its coefficients.
  residual_bound(a_, xs, b, r);
  const Eigen::VectorXd dx = impl_->lu.solve(as_eigen(r));
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] += dx[static_cast<Eigen::Index>(i)];
  const double bound = residual_bound(a_, xs, b, r);
  if (!(norm_inf(r) <= bound)) {
    throw SingularMatrixError("SparseLU::solve: residual check failed (|r| = " + std::to_string(norm_inf(r)) + ")");
  }
  return xs;
}

std::vector<double> sparse_lu_solve(const SparseMatrix& a, std::span<const double> b) { return SparseLU(a).solve(b); }

struct SparseCholesky::Impl {
  Eigen::SimplicialLLT<EigenCsc> llt;
  int n = 0;
};

SparseCholesky::SparseCholesky(const SparseMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SparseCholesky: matrix must be square");
  if (!is_symmetric(a, 1e-12)) throw SingularMatrixError("SparseCholesky: matrix is not symmetric");
  impl_->n = a.rows();
  impl_->llt.compute(to_eigen(a));
  if (impl_->llt.info() != Eigen::Success) {
    throw SingularMatrixError("SparseCholesky: matrix is not positive definite");
  }
}

SparseCholesky::~SparseCholesky() = default;
SparseCholesky::SparseCholesky(SparseCholesky&&) noexcept = default;
SparseCholesky& SparseCholesky::operator=(SparseCholesky&&) noexcept = default;

int SparseCholesky::size() const { return impl_->n; }

void SparseCholesky::solve(std::span<const double> b, std::span<double> x) const {
  if (b.size() != static_cast<std::size_t>(impl_->n) || x.size() != b.size()) {
    throw std::invalid_argument("SparseCholesky::solve: size mismatch");
  }
  Eigen::Map<Eigen::VectorXd>(x.data(), impl_->n) = impl_->llt.solve(as_eigen(b));
}

std::vector<double> SparseCholesky::solve(std::span<const double> b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

}  // namespace mhd::linalg

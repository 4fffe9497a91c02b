#include "stringspectra/linalg.hpp"

#include <cblas.h>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace stringspectra {

SymmetricMatrix::SymmetricMatrix(std::size_t order)
    : order_(order), packed_(order * (order + 1) / 2, 0.0) {
  if (order == 0) throw std::invalid_argument("matrix order must be positive");
}

double& SymmetricMatrix::at(std::size_t i, std::size_t j) {
  if (i >= order_ || j >= order_) throw std::out_of_range("matrix index");
  return packed_[idx(i, j)];
}

double SymmetricMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= order_ || j >= order_) throw std::out_of_range("matrix index");
  return packed_[idx(i, j)];
}

std::vector<double> SymmetricMatrix::to_full() const {
  std::vector<double> full(order_ * order_);
  for (std::size_t j = 0; j < order_; ++j)
    for (std::size_t i = 0; i < order_; ++i) full[j * order_ + i] = packed_[idx(i, j)];
  return full;
}

double SymmetricMatrix::max_abs() const {
  double m = 0.0;
  for (double v : packed_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

/// residual_norms[j] = || M v_j - lambda_j v_j ||_2, all columns in one gemm.
std::vector<double> residual_norms_standard(const std::vector<double>& M_full,
                                            const EigenDecomposition& d) {
  const auto n = d.order;
  std::vector<double> R(n * n);
  // R = M * V
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, blasint(n), blasint(n),
              blasint(n), 1.0, M_full.data(), blasint(n), d.vectors.data(),
              blasint(n), 0.0, R.data(), blasint(n));
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    const double lam = d.eigenvalues[j];
    const double* v = d.vectors.data() + j * n;
    double* r = R.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = r[i] - lam * v[i];
      s += e * e;
    }
    norms[j] = std::sqrt(s);
  }
  return norms;
}

}  // namespace

EigenDecomposition eigensolve_symmetric(const SymmetricMatrix& M) {
  const auto n = M.order();
  EigenDecomposition d;
  d.order = n;
  d.eigenvalues.resize(n);
  d.vectors = M.to_full();
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', lapack_int(n), d.vectors.data(),
                     lapack_int(n), d.eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("symmetric eigensolve failed to converge (info=" +
                             std::to_string(info) + ")");
  d.residual_norms = residual_norms_standard(M.to_full(), d);
  return d;
}

EigenDecomposition eigensolve_generalized(const SymmetricMatrix& A,
                                          const SymmetricMatrix& B) {
  if (A.order() != B.order())
    throw std::invalid_argument("pencil matrices must share their order");
  const auto n = A.order();
  EigenDecomposition d;
  d.order = n;
  d.eigenvalues.resize(n);
  d.vectors = A.to_full();
  std::vector<double> b_full = B.to_full();
  const lapack_int info = LAPACKE_dsygvd(
      LAPACK_COL_MAJOR, 1, 'V', 'L', lapack_int(n), d.vectors.data(),
      lapack_int(n), b_full.data(), lapack_int(n), d.eigenvalues.data());
  if (info > lapack_int(n)) {
    const auto pivot = info - lapack_int(n);
    throw std::runtime_error(
        "right-hand matrix is not positive definite: leading minor of order " +
        std::to_string(pivot) +
        " failed Cholesky (pivot " + std::to_string(pivot) +
        "); the trial set is likely linearly dependent");
  }
  if (info != 0)
    throw std::runtime_error("generalized eigensolve failed to converge (info=" +
                             std::to_string(info) + ")");
  // pencil residuals: || A v - lambda B v ||_2
  const auto a_full = A.to_full();
  b_full = B.to_full();
  std::vector<double> AV(n * n), BV(n * n);
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, blasint(n), blasint(n),
              blasint(n), 1.0, a_full.data(), blasint(n), d.vectors.data(),
              blasint(n), 0.0, AV.data(), blasint(n));
  cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, blasint(n), blasint(n),
              blasint(n), 1.0, b_full.data(), blasint(n), d.vectors.data(),
              blasint(n), 0.0, BV.data(), blasint(n));
  d.residual_norms.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = AV[j * n + i] - d.eigenvalues[j] * BV[j * n + i];
      s += e * e;
    }
    d.residual_norms[j] = std::sqrt(s);
  }
  return d;
}

SymmetricMatrix gram_lower(const std::vector<double>& factor,
                           std::size_t order) {
  if (factor.size() != order * order)
    throw std::invalid_argument("factor size does not match order^2");
  std::vector<double> full(order * order, 0.0);
  cblas_dsyrk(CblasColMajor, CblasLower, CblasNoTrans, blasint(order),
              blasint(order), 1.0, factor.data(), blasint(order), 0.0,
              full.data(), blasint(order));
  SymmetricMatrix out(order);
  for (std::size_t j = 0; j < order; ++j)
    for (std::size_t i = j; i < order; ++i) out.at(i, j) = full[i + j * order];
  return out;
}

}  // namespace stringspectra

#pragma once

#include <cstddef>
#include <vector>

namespace stringspectra {

/// Dense real symmetric matrix. Only the lower triangle is stored, so
/// symmetry holds exactly by construction: at(i,j) and at(j,i) alias the
/// same entry.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t order);

  std::size_t order() const { return order_; }
  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;

  /// Expands to a full column-major square array (LAPACK layout).
  std::vector<double> to_full() const;
  /// max_ij |M_ij|
  double max_abs() const;

 private:
  std::size_t idx(std::size_t i, std::size_t j) const {
    if (i < j) { const auto t = i; i = j; j = t; }
    return i * (i + 1) / 2 + j;
  }
  std::size_t order_;
  std::vector<double> packed_;
};

/// Full spectrum of a symmetric (or symmetric-definite generalized)
/// eigenproblem. Eigenvalues ascend; vectors are stored column-major, the
/// j-th column belonging to eigenvalues[j]. residual_norms[j] holds
/// ||M v_j - lambda_j v_j||_2 (or the pencil analogue) measured after the
/// solve with one matrix multiply.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  std::vector<double> vectors;  // column-major, order x order
  std::vector<double> residual_norms;
  std::size_t order = 0;

  const double* vector(std::size_t j) const { return vectors.data() + j * order; }
};

/// Full symmetric eigensolve (tridiagonalization-based LAPACK driver).
/// Residual norms are computed and attached; failure to converge raises with
/// the driver's diagnostic.
EigenDecomposition eigensolve_symmetric(const SymmetricMatrix& M);

/// Symmetric-definite generalized eigensolve A v = lambda B v via Cholesky
/// reduction. A non-positive-definite B raises an error naming the failing
/// pivot index (the usual symptom of a linearly dependent trial set).
EigenDecomposition eigensolve_generalized(const SymmetricMatrix& A,
                                          const SymmetricMatrix& B);

/// F F^T for a square column-major factor F of the given order, accumulated
/// by a BLAS rank-k update. The product is symmetric positive semidefinite
/// by construction.
SymmetricMatrix gram_lower(const std::vector<double>& factor,
                           std::size_t order);

}  // namespace stringspectra

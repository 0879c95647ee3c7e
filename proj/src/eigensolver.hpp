#pragma once

// Top-k eigenpairs of a dense symmetric matrix.

#include <cstddef>

#include <Eigen/Core>

#include "ddmap/matrix.hpp"

namespace ddmap::detail {

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns
  std::size_t iterations = 0;
  bool converged = true;
};

/// LAPACK dsyevr restricted to the index range of the k largest eigenvalues.
SymmetricEigen top_eigenpairs_dense(const RowMatrix& P, std::size_t k);

/// Thick-restart Lanczos with full reorthogonalization. Converged when every
/// wanted Ritz pair has ||P x - theta x|| <= tol * max(1, |theta|).
SymmetricEigen top_eigenpairs_lanczos(const RowMatrix& P, std::size_t k, double tol = 1e-10,
                                      std::size_t max_restarts = 500);

}  // namespace ddmap::detail

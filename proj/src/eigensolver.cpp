#include "eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ddmap/error.hpp"

namespace ddmap::detail {

SymmetricEigen top_eigenpairs_dense(const RowMatrix& P, std::size_t k) {
  const auto n = static_cast<lapack_int>(P.rows());
  if (P.rows() != P.cols()) throw ConfigError("matrix must be square");
  if (k == 0 || k > static_cast<std::size_t>(n)) throw ConfigError("invalid eigenpair count");

  RowMatrix a = P;  // dsyevr overwrites its input
  std::vector<double> w(static_cast<std::size_t>(n));
  RowMatrix z(n, static_cast<Eigen::Index>(k));
  std::vector<lapack_int> support(2 * k);
  lapack_int found = 0;
  const lapack_int il = n - static_cast<lapack_int>(k) + 1;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_ROW_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, il, n, 0.0,
                     &found, w.data(), z.data(), static_cast<lapack_int>(k), support.data());
  if (info != 0 || found != static_cast<lapack_int>(k))
    throw Error("dense symmetric eigensolver failed (info " + std::to_string(info) + ")");

  SymmetricEigen out;
  out.values.resize(static_cast<Eigen::Index>(k));
  out.vectors.resize(n, static_cast<Eigen::Index>(k));
  // dsyevr returns ascending order.
  for (std::size_t j = 0; j < k; ++j) {
    const auto src = static_cast<Eigen::Index>(k - 1 - j);
    out.values(static_cast<Eigen::Index>(j)) = w[static_cast<std::size_t>(src)];
    out.vectors.col(static_cast<Eigen::Index>(j)) = z.col(src);
  }
  return out;
}

namespace {

// Orthogonalizes v against the first `cols` columns of V, twice.
double orthogonalize(const Eigen::MatrixXd& V, Eigen::Index cols, Eigen::VectorXd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (cols > 0) v -= V.leftCols(cols) * (V.leftCols(cols).transpose() * v);
  }
  return v.norm();
}

}  // namespace

SymmetricEigen top_eigenpairs_lanczos(const RowMatrix& P, std::size_t k, double tol,
                                      std::size_t max_restarts) {
  const Eigen::Index n = P.rows();
  if (P.rows() != P.cols()) throw ConfigError("matrix must be square");
  if (k == 0 || static_cast<Eigen::Index>(k) >= n) throw ConfigError("invalid eigenpair count");

  const auto kk = static_cast<Eigen::Index>(k);
  const Eigen::Index m = std::min<Eigen::Index>(n, std::max<Eigen::Index>(2 * kk + 20, kk + 32));
  if (m >= n) return top_eigenpairs_dense(P, k);  // Krylov space would be everything
  const Eigen::Index keep = std::min<Eigen::Index>(m - 2, kk + (m - kk) / 2);

  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd PV(n, m + 1);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_unit = [&](Eigen::Index cols) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
    orthogonalize(V, cols, v);
    return Eigen::VectorXd(v / v.norm());
  };

  V.col(0) = random_unit(0);
  PV.col(0) = P * V.col(0);
  Eigen::Index filled = 1;

  SymmetricEigen out;
  for (std::size_t restart = 0; restart <= max_restarts; ++restart) {
    // Extend to m columns; every new vector is P times the previous one.
    while (filled <= m) {
      Eigen::VectorXd v = PV.col(filled - 1);
      const double scale = v.norm();
      const double nrm = orthogonalize(V, filled, v);
      if (!(nrm > 1e-12 * std::max(scale, 1.0))) {
        v = random_unit(filled);
      } else {
        v /= nrm;
      }
      V.col(filled) = v;
      PV.col(filled) = P * v;
      ++filled;
    }
    // Rayleigh-Ritz on the first m columns; column m is the continuation.
    Eigen::MatrixXd H = V.leftCols(m).transpose() * PV.leftCols(m);
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd theta = es.eigenvalues().reverse();
    const Eigen::MatrixXd Y = es.eigenvectors().rowwise().reverse();

    const Eigen::MatrixXd X = V.leftCols(m) * Y.leftCols(keep);
    const Eigen::MatrixXd PX = PV.leftCols(m) * Y.leftCols(keep);
    bool done = true;
    for (Eigen::Index j = 0; j < kk; ++j) {
      const double r = (PX.col(j) - theta(j) * X.col(j)).norm();
      if (r > tol * std::max(1.0, std::abs(theta(j)))) done = false;
    }
    out.iterations = restart + 1;
    if (done || restart == max_restarts) {
      out.values = theta.head(kk);
      out.vectors = X.leftCols(kk);
      out.converged = done;
      return out;
    }

    const Eigen::VectorXd next = V.col(m);
    const Eigen::VectorXd p_next = PV.col(m);
    V.leftCols(keep) = X;
    PV.leftCols(keep) = PX;
    V.col(keep) = next;
    PV.col(keep) = p_next;
    filled = keep + 1;
  }
  return out;
}

}  // namespace ddmap::detail

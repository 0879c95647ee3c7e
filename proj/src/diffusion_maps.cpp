#include "ddmap/diffusion_maps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Dense>

#include "ddmap/diagnostics.hpp"
#include "ddmap/error.hpp"
#include "eigensolver.hpp"

namespace ddmap {
namespace {

constexpr double kUnitTol = 1e-8;
constexpr double kResidualFail = 1e-6;

Eigen::VectorXd row_sums_checked(const RowMatrix& W) {
  Eigen::VectorXd d = W.rowwise().sum();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d(i) > 0.0)) throw Error("isolated point at index " + std::to_string(i));
  return d;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

RowMatrix pairwise_sq_dists(const RowMatrix& X) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw ConfigError("need at least two points");
  if (!X.allFinite()) throw Error("non-finite entry in point cloud");
  RowMatrix D2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    D2(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = (X.row(i) - X.row(j)).squaredNorm();
      D2(i, j) = v;
      D2(j, i) = v;
    }
  }
  return D2;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw ConfigError("percentile of an empty set");
  if (!(pct >= 0.0 && pct <= 100.0)) throw ConfigError("percentile must lie in [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double select_bandwidth(const RowMatrix& D2, const BandwidthRule& rule, double zero_tolerance) {
  const Eigen::Index n = D2.rows();
  if (n < 2 || D2.cols() != n) throw ConfigError("distance matrix must be square with N >= 2");
  auto clean = [&](double v) { return v <= zero_tolerance ? 0.0 : v; };

  if (const auto* e = std::get_if<ExplicitBandwidth>(&rule)) {
    if (!(e->h > 0.0) || !std::isfinite(e->h)) throw ConfigError("bandwidth must be positive");
    return e->h;
  }
  if (const auto* q = std::get_if<QuartileAllPairs>(&rule)) {
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) all.push_back(clean(D2(i, j)));
    double h = percentile(all, 25.0);
    if (h > 0.0) return h;
    if (!q->fallback_exclude_zeros) throw Error("degenerate bandwidth");
    std::erase(all, 0.0);
    if (all.empty()) throw Error("degenerate bandwidth");
    h = percentile(std::move(all), 25.0);
    warn("quartile bandwidth resolved to 0; recomputed without zero distances (h = " + fmt(h) +
         ")");
    return h;
  }
  const auto& knn = std::get<KnnPercentile>(rule);
  if (knn.k < 1 || knn.k >= static_cast<std::size_t>(n))
    throw ConfigError("knn bandwidth needs 1 <= k < N");
  std::vector<double> kth;
  kth.reserve(static_cast<std::size_t>(n));
  std::vector<double> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) row.push_back(clean(D2(i, j)));
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(knn.k - 1), row.end());
    kth.push_back(row[knn.k - 1]);
  }
  const double h = percentile(std::move(kth), knn.percentile);
  if (!(h > 0.0)) throw Error("degenerate bandwidth");
  return h;
}

RowMatrix affinity(const RowMatrix& D2, double h, bool zero_diagonal) {
  if (!(h > 0.0)) throw ConfigError("bandwidth must be positive");
  RowMatrix W = (-D2.array() / h).exp().matrix();
  if (zero_diagonal) W.diagonal().setZero();
  return W;
}

RowMatrix alpha_normalize(const RowMatrix& W, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  const Eigen::VectorXd d = row_sums_checked(W);
  if (alpha == 0.0) return W;
  const Eigen::VectorXd s = d.array().pow(-alpha).matrix();
  return s.asDiagonal() * W * s.asDiagonal();
}

RowMatrix diffusion_operator(const RowMatrix& W_alpha) {
  const Eigen::VectorXd d = row_sums_checked(W_alpha);
  return d.cwiseInverse().asDiagonal() * W_alpha;
}

void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  if (v.size() > 0 && v(best) < 0.0) v = -v;
}

SpectralDecomposition spectral_decompose(const RowMatrix& W_alpha, std::size_t count,
                                         std::size_t dense_limit) {
  const Eigen::Index n = W_alpha.rows();
  if (W_alpha.cols() != n) throw ConfigError("kernel must be square");
  if (count < 1 || count > static_cast<std::size_t>(n))
    throw ConfigError("requested more eigenpairs than points");

  const Eigen::VectorXd d = row_sums_checked(W_alpha);
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  RowMatrix P = s.asDiagonal() * W_alpha * s.asDiagonal();
  P = (0.5 * (P + P.transpose())).eval();

  auto eig = static_cast<std::size_t>(n) <= dense_limit ? detail::top_eigenpairs_dense(P, count)
                                                        : detail::top_eigenpairs_lanczos(P, count);

  // With several components the unit eigenspace comes back in an arbitrary
  // basis. Pin psi_1 to sqrt(d), which makes phi_1 constant, and rebuild the
  // rest of that eigenspace orthogonal to it.
  Eigen::Index unit = 0;
  while (unit < eig.values.size() && eig.values(unit) >= 1.0 - kUnitTol) ++unit;
  if (unit > 1) {
    const Eigen::VectorXd q = d.cwiseSqrt().normalized();
    Eigen::MatrixXd V = eig.vectors.leftCols(unit);
    V -= q * (q.transpose() * V);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU);
    eig.vectors.col(0) = q;
    eig.vectors.middleCols(1, unit - 1) = svd.matrixU().leftCols(unit - 1);
    for (Eigen::Index k = 0; k < unit; ++k) {
      eig.values(k) = eig.vectors.col(k).dot(P * eig.vectors.col(k));
      if (k > 0) eig.values(k) = std::min(eig.values(k), eig.values(k - 1));
    }
  }

  SpectralDecomposition out;
  out.eigenvalues = eig.values;
  out.eigenvectors.resize(n, static_cast<Eigen::Index>(count));
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(count); ++k) {
    Eigen::VectorXd phi = s.cwiseProduct(eig.vectors.col(k));
    phi /= phi.norm();
    canonical_sign(phi);
    out.eigenvectors.col(k) = phi;
  }

  // ||A phi - lambda phi|| with A = D^{-1} W.
  const Eigen::VectorXd dinv = d.cwiseInverse();
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(count); ++k) {
    const Eigen::VectorXd phi = out.eigenvectors.col(k);
    const Eigen::VectorXd Aphi = dinv.cwiseProduct(W_alpha * phi);
    out.max_residual = std::max(out.max_residual, (Aphi - out.eigenvalues(k) * phi).norm());
  }
  if (!eig.converged || out.max_residual > kResidualFail)
    throw Error("eigensolver did not converge (max residual " + fmt(out.max_residual) + ")");

  if (std::abs(out.eigenvalues(0) - 1.0) > kUnitTol)
    throw Error("leading eigenvalue " + fmt(out.eigenvalues(0)) + " is not 1");
  out.component_count = 0;
  for (Eigen::Index k = 0; k < out.eigenvalues.size(); ++k)
    if (out.eigenvalues(k) >= 1.0 - kUnitTol) ++out.component_count;
  if (out.component_count > 1) {
    warn("lambda_2 within 1e-8 of 1: the kernel graph has " +
         std::to_string(out.component_count) + " (near-)disconnected components");
  } else {
    const auto phi1 = out.eigenvectors.col(0);
    const double spread = phi1.maxCoeff() - phi1.minCoeff();
    if (spread > 1e-6 * phi1.cwiseAbs().mean())
      warn("first eigenvector is not constant (relative spread " +
           fmt(spread / phi1.cwiseAbs().mean()) + ")");
  }
  return out;
}

DiffusionEmbedding embed(const SpectralDecomposition& dec, double t, std::size_t d,
                         NegativeModePolicy policy) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("diffusion time must be positive");
  if (d < 1) throw ConfigError("embedding dimension must be at least 1");
  if (static_cast<std::size_t>(dec.eigenvalues.size()) < d + 1)
    throw ConfigError("decomposition holds fewer than d + 1 eigenpairs");

  const bool integer_time = t == std::floor(t);
  std::vector<std::size_t> keep;
  std::size_t dropped = 0;
  for (std::size_t k = 1; k <= d; ++k) {
    const double lambda = dec.eigenvalues(static_cast<Eigen::Index>(k));
    if (lambda < 0.0 && !integer_time) {
      if (policy == NegativeModePolicy::Error)
        throw Error("fractional power of negative eigenvalue");
      ++dropped;
      continue;
    }
    keep.push_back(k);
  }
  if (dropped > 0)
    warn(std::to_string(dropped) +
         " mode(s) with negative eigenvalue dropped (non-integer diffusion time)");

  DiffusionEmbedding emb;
  const Eigen::Index n = dec.eigenvectors.rows();
  const auto m = static_cast<Eigen::Index>(keep.size());
  emb.coords.resize(n, m);
  emb.eigenvalues.resize(m);
  emb.eigenvectors.resize(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const auto k = static_cast<Eigen::Index>(keep[static_cast<std::size_t>(c)]);
    const double lambda = dec.eigenvalues(k);
    emb.eigenvalues(c) = lambda;
    emb.eigenvectors.col(c) = dec.eigenvectors.col(k);
    emb.coords.col(c) = std::pow(lambda, t) * dec.eigenvectors.col(k);
    emb.modes.push_back(static_cast<std::size_t>(k) + 1);
  }
  emb.lambda1 = dec.eigenvalues(0);
  emb.diffusion_time = t;
  emb.component_count = dec.component_count;
  emb.max_residual = dec.max_residual;
  return emb;
}

double diffusion_distance(const DiffusionEmbedding& emb, std::size_t i, std::size_t j) {
  if (i >= emb.size() || j >= emb.size()) throw ConfigError("point index out of range");
  if (i == j) return 0.0;
  const auto a = static_cast<Eigen::Index>(std::min(i, j));
  const auto b = static_cast<Eigen::Index>(std::max(i, j));
  return (emb.coords.row(a) - emb.coords.row(b)).norm();
}

DiffusionEmbedding diffusion_map_from_distances(const RowMatrix& D2, const KernelConfig& config,
                                                double zero_tolerance) {
  const auto n = static_cast<std::size_t>(D2.rows());
  if (config.dim < 1) throw ConfigError("embedding dimension must be at least 1");
  if (n <= config.dim)
    throw ConfigError("embedding dimension " + std::to_string(config.dim) +
                      " needs more than that many points (N = " + std::to_string(n) + ")");
  const double h = select_bandwidth(D2, config.bandwidth, zero_tolerance);
  const RowMatrix W = affinity(D2, h, config.zero_diagonal);
  const RowMatrix Wa = alpha_normalize(W, config.alpha);
  const auto dec = spectral_decompose(Wa, config.dim + 1, config.dense_limit);
  auto emb = embed(dec, config.diffusion_time, config.dim, config.negative_modes);
  emb.bandwidth = h;
  emb.alpha = config.alpha;
  return emb;
}

DiffusionEmbedding diffusion_map(const RowMatrix& X, const KernelConfig& config) {
  return diffusion_map_from_distances(pairwise_sq_dists(X), config);
}

}  // namespace ddmap

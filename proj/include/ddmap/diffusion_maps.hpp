#pragma once

// Gaussian affinity, alpha-normalization, the row-stochastic diffusion
// operator A and its truncated spectral embedding.
//
// Eigenpairs of A are computed from the similar symmetric matrix
// P = D^{-1/2} W D^{-1/2} (D the degree matrix of the alpha-normalized
// kernel) and mapped back with phi = D^{-1/2} psi.

#include <cstddef>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ddmap/matrix.hpp"

namespace ddmap {

struct QuartileAllPairs {
  /// When the 25th percentile of all N^2 entries is 0, retry without the
  /// zero entries and warn, instead of failing with "degenerate bandwidth".
  bool fallback_exclude_zeros = true;
};
struct KnnPercentile {
  std::size_t k = 40;
  double percentile = 25.0;
};
struct ExplicitBandwidth {
  double h = 1.0;
};
using BandwidthRule = std::variant<QuartileAllPairs, KnnPercentile, ExplicitBandwidth>;

/// How to treat retained modes with lambda < 0 when t is not an integer.
enum class NegativeModePolicy { Drop, Error };

struct KernelConfig {
  BandwidthRule bandwidth = QuartileAllPairs{};
  double alpha = 1.0;
  bool zero_diagonal = false;
  double diffusion_time = 1.0;
  std::size_t dim = 2;
  NegativeModePolicy negative_modes = NegativeModePolicy::Drop;
  std::size_t dense_limit = 4096;  // above this N the iterative solver is used
};

/// D2(i, j) = ||x_i - x_j||^2, computed once per unordered pair.
RowMatrix pairwise_sq_dists(const RowMatrix& X);

/// Linear-interpolation percentile (position pct/100 * (n - 1) in the
/// sorted values).
double percentile(std::vector<double> values, double pct);

/// Resolves h from D2. Entries at or below zero_tolerance count as zero for
/// the degeneracy test. Throws Error("degenerate bandwidth") if h <= 0.
double select_bandwidth(const RowMatrix& D2, const BandwidthRule& rule,
                        double zero_tolerance = 0.0);

RowMatrix affinity(const RowMatrix& D2, double h, bool zero_diagonal);

/// W(i, j) / (d_i^alpha d_j^alpha). Throws Error("isolated point") when a
/// row of W sums to 0.
RowMatrix alpha_normalize(const RowMatrix& W, double alpha);

/// D^{-1} W. Same error as alpha_normalize.
RowMatrix diffusion_operator(const RowMatrix& W_alpha);

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;  // lambda_1 >= lambda_2 >= ... (d + 1 of them)
  RowMatrix eigenvectors;       // column k: unit-norm, canonical-sign phi_{k+1}
  std::size_t component_count = 1;  // eigenvalues >= 1 - 1e-8
  double max_residual = 0.0;        // max_k ||A phi_k - lambda_k phi_k||
};

/// Top `count` eigenpairs of A. Throws Error on a failed lambda_1 = 1
/// check or on non-convergence, with the residual in the message.
SpectralDecomposition spectral_decompose(const RowMatrix& W_alpha, std::size_t count,
                                         std::size_t dense_limit = 4096);

/// Flips v so that its entry of largest magnitude (first on ties) is positive.
void canonical_sign(Eigen::Ref<Eigen::VectorXd> v);

struct DiffusionEmbedding {
  RowMatrix coords;             // N x d', column k = lambda_{k+2}^t phi_{k+2}
  Eigen::VectorXd eigenvalues;  // lambda_2 .. lambda_{d+1}, retained modes only
  RowMatrix eigenvectors;       // phi for the retained modes
  std::vector<std::size_t> modes;  // 1-based mode numbers kept (2 .. d+1)
  double lambda1 = 1.0;
  double bandwidth = 0.0;
  double alpha = 0.0;
  double diffusion_time = 1.0;
  std::size_t component_count = 1;
  double max_residual = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(coords.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(coords.cols()); }
};

/// Builds coordinates from a decomposition holding at least d + 1 pairs.
DiffusionEmbedding embed(const SpectralDecomposition& decomposition, double t, std::size_t d,
                         NegativeModePolicy policy = NegativeModePolicy::Drop);

/// Euclidean distance between rows i and j of the embedding.
double diffusion_distance(const DiffusionEmbedding& emb, std::size_t i, std::size_t j);

/// Full chain from the point cloud: distances, bandwidth, kernel,
/// normalization, decomposition, embedding. Requires N > d.
DiffusionEmbedding diffusion_map(const RowMatrix& X, const KernelConfig& config);

/// Same chain from precomputed squared distances.
DiffusionEmbedding diffusion_map_from_distances(const RowMatrix& D2, const KernelConfig& config,
                                                double zero_tolerance = 0.0);

}  // namespace ddmap

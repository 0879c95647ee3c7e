#pragma once

// CSV/JSON import and export. CSV files carry a header row; numbers are
// written with 17 significant digits so that reading them back is exact.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "ddmap/cycle_extraction.hpp"
#include "ddmap/diffusion_maps.hpp"
#include "ddmap/dynamics_recovery.hpp"
#include "ddmap/signal_synthesis.hpp"
#include "ddmap/time_series.hpp"

namespace ddmap::io {

namespace fs = std::filesystem;

std::string format_double(double v);

/// `time,value` with a header. The sampling rate is recovered from the
/// time column unless fs_override > 0. Throws ConfigError on a missing or
/// malformed file.
TimeSeries read_time_series_csv(const fs::path& path, double fs_override = 0.0);
void write_time_series_csv(const fs::path& path, const TimeSeries& x);

/// First column of a CSV with a header row, as sample indices.
std::vector<std::size_t> read_landmarks_csv(const fs::path& path);

/// `landmark_sample,a,f,class`.
void write_truth_csv(const fs::path& path, const SyntheticDataset& data);

/// `landmark_sample,time_s,coord_1..coord_d`.
void write_embedding_csv(const fs::path& path, const DiffusionEmbedding& emb,
                         const LandmarkSequence& landmarks);

/// {lambda: [...], h, alpha, t, d}.
void write_eigenvalues_json(const fs::path& path, const DiffusionEmbedding& emb, std::size_t d);

/// `time_s,value[,label]`.
void write_trace_csv(const fs::path& path, const DynamicsTrace& trace);

/// `landmark_sample,time_s,u,cluster,ectopic` (cluster 1 for U >= 0, else 2).
void write_clusters_csv(const fs::path& path, const DynamicsTrace& u,
                        const ClusterResult& clusters, const LandmarkSequence& landmarks);

/// One row per cycle plus a JSON sidecar at `path` with extension .json.
void write_cycle_matrix(const fs::path& path, const CycleMatrix& X);

struct EmbeddingTable {
  std::vector<std::size_t> landmarks;
  std::vector<double> times;
  RowMatrix coords;
};
EmbeddingTable read_embedding_csv(const fs::path& path);

/// Writes text exactly as given (binary mode, no newline translation).
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace ddmap::io

#include "ddmap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddmap/error.hpp"

namespace ddmap::io {
namespace {

using json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty())
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  return v;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

Table read_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  Table t;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected " +
                        std::to_string(t.header.size()) + " columns");
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(number);
  }
  if (t.header.empty()) throw ConfigError(path.string() + ": empty file");
  return t;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimeSeries read_time_series_csv(const fs::path& path, double fs_override) {
  const auto t = read_table(path);
  if (t.header.size() != 2) throw ConfigError(path.string() + ": expected columns time,value");
  if (t.rows.size() < 2) throw ConfigError(path.string() + ": need at least two samples");
  std::vector<double> times, values;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    times.push_back(parse_double(t.rows[r][0], path, t.line_numbers[r]));
    values.push_back(parse_double(t.rows[r][1], path, t.line_numbers[r]));
  }
  double fs = fs_override;
  if (fs <= 0.0) {
    const double span = times.back() - times.front();
    if (!(span > 0.0)) throw ConfigError(path.string() + ": time column is not increasing");
    fs = static_cast<double>(times.size() - 1) / span;
    // Rates written as k / fs come back within rounding of a round number.
    const double r = std::round(fs * 1e6) / 1e6;
    if (std::abs(r - fs) <= 1e-9 * fs) fs = r;
  }
  return TimeSeries(std::move(values), fs, times.front());
}

void write_time_series_csv(const fs::path& path, const TimeSeries& x) {
  std::string s = "time,value\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    s += format_double(x.time_at(i)) + "," + format_double(x[i]) + "\n";
  write_text(path, s);
}

std::vector<std::size_t> read_landmarks_csv(const fs::path& path) {
  const auto t = read_table(path);
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double v = parse_double(t.rows[r][0], path, t.line_numbers[r]);
    if (v < 0.0 || v != std::floor(v))
      throw ConfigError(path.string() + ": landmark is not a sample index");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void write_truth_csv(const fs::path& path, const SyntheticDataset& data) {
  std::string s = "landmark_sample,a,f,class\n";
  for (std::size_t i = 0; i < data.cycles.size(); ++i) {
    const auto& c = data.cycles[i];
    s += std::to_string(data.landmarks[i]) + "," + format_double(c.amplitude) + "," +
         format_double(c.frequency) + "," + std::to_string(c.label) + "\n";
  }
  write_text(path, s);
}

void write_embedding_csv(const fs::path& path, const DiffusionEmbedding& emb,
                         const LandmarkSequence& landmarks) {
  if (emb.size() != landmarks.size())
    throw ConfigError("embedding rows and landmarks differ in count");
  std::string s = "landmark_sample,time_s";
  for (std::size_t k = 1; k <= emb.dim(); ++k) s += ",coord_" + std::to_string(k);
  s += "\n";
  for (std::size_t i = 0; i < emb.size(); ++i) {
    s += std::to_string(landmarks[i]) + "," +
         format_double(static_cast<double>(landmarks[i]) / landmarks.fs());
    for (std::size_t k = 0; k < emb.dim(); ++k)
      s += "," + format_double(emb.coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    s += "\n";
  }
  write_text(path, s);
}

void write_eigenvalues_json(const fs::path& path, const DiffusionEmbedding& emb, std::size_t d) {
  json j;
  j["lambda"] = json::array();
  for (Eigen::Index k = 0; k < emb.eigenvalues.size(); ++k) j["lambda"].push_back(emb.eigenvalues(k));
  j["lambda_1"] = emb.lambda1;
  j["h"] = emb.bandwidth;
  j["alpha"] = emb.alpha;
  j["t"] = emb.diffusion_time;
  j["d"] = d;
  j["component_count"] = emb.component_count;
  write_text(path, j.dump(2) + "\n");
}

void write_trace_csv(const fs::path& path, const DynamicsTrace& trace) {
  const bool labelled = !trace.labels.empty();
  std::string s = labelled ? "time_s,value,label\n" : "time_s,value\n";
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    s += format_double(trace.times[i]) + "," + format_double(trace.values[i]);
    if (labelled) s += "," + std::to_string(trace.labels[i]);
    s += "\n";
  }
  write_text(path, s);
}

void write_clusters_csv(const fs::path& path, const DynamicsTrace& u,
                        const ClusterResult& clusters, const LandmarkSequence& landmarks) {
  std::string s = "landmark_sample,time_s,u,cluster,ectopic\n";
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    s += std::to_string(landmarks[i]) + "," + format_double(u.times[i]) + "," +
         format_double(u.values[i]) + "," + (u.values[i] >= 0.0 ? "1" : "2") + "," +
         std::to_string(clusters.labels[i]) + "\n";
  }
  write_text(path, s);
}

void write_cycle_matrix(const fs::path& path, const CycleMatrix& X) {
  std::string s;
  for (std::size_t j = 0; j < X.length(); ++j) s += (j ? ",c" : "c") + std::to_string(j + 1);
  s += "\n";
  for (Eigen::Index i = 0; i < X.rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.rows.cols(); ++j)
      s += (j ? "," : "") + format_double(X.rows(i, j));
    s += "\n";
  }
  write_text(path, s);

  json side;
  side["left_ms"] = X.left_ms;
  side["right_ms"] = X.right_ms;
  side["fs"] = X.fs;
  side["landmark_indices"] = X.landmark_indices;
  side["normalized"] = X.normalized;
  auto sidecar = path;
  sidecar.replace_extension(".json");
  write_text(sidecar, side.dump(2) + "\n");
}

EmbeddingTable read_embedding_csv(const fs::path& path) {
  const auto t = read_table(path);
  if (t.header.size() < 3 || t.header[0] != "landmark_sample" || t.header[1] != "time_s")
    throw ConfigError(path.string() + ": not an embedding file");
  if (t.rows.empty()) throw ConfigError(path.string() + ": no embedded points");
  EmbeddingTable e;
  const auto d = static_cast<Eigen::Index>(t.header.size() - 2);
  e.coords.resize(static_cast<Eigen::Index>(t.rows.size()), d);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto line = t.line_numbers[r];
    e.landmarks.push_back(static_cast<std::size_t>(parse_double(t.rows[r][0], path, line)));
    e.times.push_back(parse_double(t.rows[r][1], path, line));
    for (Eigen::Index k = 0; k < d; ++k)
      e.coords(static_cast<Eigen::Index>(r), k) =
          parse_double(t.rows[r][static_cast<std::size_t>(k) + 2], path, line);
  }
  return e;
}

}  // namespace ddmap::io

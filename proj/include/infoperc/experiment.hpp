#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "infoperc/graph.hpp"

namespace infoperc {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kSoftwareVersion = "0.1.0";

enum class ExperimentKind { Magnetization, Tm, Clusters, Zn, Tv, CutoffScan, MpCheck };

const char* to_string(ExperimentKind k) noexcept;
std::optional<ExperimentKind> parse_kind(const std::string& name);

struct GraphSpec {
  GraphFamily family = GraphFamily::Cycle;
  std::size_t n = 0;     // cycle length
  std::size_t side = 0;  // torus side
  std::size_t dim = 0;   // torus dimension
  std::vector<std::pair<Vertex, Vertex>> edges;  // explicit graphs (n vertices)
  Graph build() const;
};

// One experiment, read from a JSON file. Every field is checked by
// parse_config before anything runs or any file is written.
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ExperimentKind kind = ExperimentKind::Magnetization;
  GraphSpec graph;
  double beta = 0.0;
  std::vector<double> times;
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  bool average_sites = false;
  double t_star = 0.0;
  std::string mode = "exact";        // tv: exact | statistical
  std::size_t stationary_samples = 0;
  double precision = 0.02;           // tm
  std::size_t replica_budget = 1u << 20;
  double length_cap = 0.0;           // 0: library default
  std::vector<std::size_t> sizes;    // cutoff-scan
  std::vector<double> eps;           // cutoff-scan
  std::vector<double> offsets;       // cutoff-scan
  std::size_t sites = 4;             // mp-check
  std::size_t trials = 200;          // mp-check
  std::string out_dir = "out";
  int workers = 0;                   // not part of the hash

  nlohmann::json to_json() const;
};

// Parses and validates; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);
void validate(const ExperimentConfig& c);

// FNV-1a 64 of the canonical JSON dump (sorted keys, workers and output_dir excluded), hex.
std::string config_hash(const ExperimentConfig& c);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentRecord {
  std::string config_hash;
  ExperimentKind kind = ExperimentKind::Magnetization;
  std::uint64_t seed = 0;
  std::string version = kSoftwareVersion;
  double wall_seconds = 0.0;
  std::vector<Table> tables;
  std::vector<nlohmann::json> cluster_lines;  // JSONL payload (clusters only)

  const Table& table(const std::string& name) const;
};

ExperimentRecord run(const ExperimentConfig& config);

struct PlotRow {
  std::string series;
  double x = 0.0;
  double y = 0.0;
  double err = 0.0;
};

// Long-format (series, x, y, err) rows.
std::vector<PlotRow> emit_plot_data(const ExperimentRecord& record);

// Writes <table>.csv, plot.csv, clusters.jsonl (if any) and manifest.txt.
void write_outputs(const ExperimentRecord& record, const ExperimentConfig& config,
                   const std::filesystem::path& dir);

}  // namespace infoperc

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "got/game_engine.hpp"

namespace got {

enum class OutputKind { RegretCurve, UtilityRatio, Occupancy, ChainReport };

const char* output_name(OutputKind kind);

/// Per-replication means drawn uniformly on [low, high] (Gaussian rewards).
struct RandomMeans {
  double low = 0.0;
  double high = 1.0;

  bool operator==(const RandomMeans&) const = default;
};

struct ExperimentConfig {
  GameConfig game;
  int replications = 1;
  std::uint64_t seed_base = 0;
  std::vector<OutputKind> outputs{OutputKind::RegretCurve};
  std::int64_t downsample_stride = 1;
  std::optional<RandomMeans> random_means;

  void validate() const;
  bool wants(OutputKind kind) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// JSON text <-> config. parse_config throws std::invalid_argument with the
/// offending key on malformed input.
ExperimentConfig parse_config(const std::string& text);
std::string emit_config(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

/// "N M" header followed by N rows of M reals.
Eigen::MatrixXd parse_matrix(const std::string& text);
Eigen::MatrixXd load_matrix(const std::string& path);

std::string read_text_file(const std::string& path);

struct SeriesRow {
  std::int64_t turn = 0;  // 1-based turn of the sampled cumulative value
  int epoch = 0;
  Phase phase = Phase::Exploration;
  double mean = 0.0;
  double stderr_ = 0.0;
  int n_seeds = 0;
};

struct Series {
  std::string name;
  std::vector<SeriesRow> rows;
};

struct SeedSummary {
  std::uint64_t seed = 0;
  double final_regret = 0.0;
  double final_ratio = 0.0;
  double exploit_accuracy = 0.0;  // epochs >= 3; NaN if none
  double j1 = 0.0;
  std::vector<int> a_star;
};

struct BatchResult {
  std::vector<Series> series;
  std::vector<SeedSummary> seeds;

  const Series* find(const std::string& name) const;
};

/// 1-based turns sampled by the stride: stride, 2 stride, ..., plus T when
/// T is not a multiple; ceil(T / stride) points.
std::vector<std::int64_t> sample_turns(std::int64_t horizon, std::int64_t stride);

/// GameConfig of replication i: seed seed_base + i, and fresh means when
/// random_means is set.
GameConfig replication_game(const ExperimentConfig& config, int index);

/// Worker count: GOT_THREADS if set (>= 1), else hardware concurrency,
/// never more than `jobs`.
unsigned worker_count(int jobs);

/// Runs every replication and reduces in replication order, so the result
/// does not depend on `threads`. threads == 0 means worker_count().
BatchResult run_batch(const ExperimentConfig& config, unsigned threads = 0);

/// Header plus one row per point; %.17g floats, LF endings.
void emit_csv(const Series& series, const std::string& path);
std::string format_csv(const Series& series);

void emit_seed_summaries(const std::vector<SeedSummary>& seeds, const std::string& path);

/// Writes text to path; throws std::runtime_error naming the path on failure.
void write_text_file(const std::string& path, const std::string& text);

/// Chain report of the expected means at the config's epsilon and c, or at
/// each epsilon in `epsilons` when given. Returned as JSON text.
std::string chain_report(const Eigen::MatrixXd& utilities, double c, const std::vector<double>& epsilons,
                         double mixing_accuracy = 0.25);

/// Exploration bounds for every epoch reached within the horizon, plus the
/// assignment margin. Returned as JSON text.
std::string bounds_report(const GameConfig& game);

}  // namespace got

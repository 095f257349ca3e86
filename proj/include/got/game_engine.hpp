#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "got/got_agent.hpp"
#include "got/reward_models.hpp"

namespace got {

enum class ScheduleMode { Epochs, SingleEpoch };

/// Reference term of the regret: t * J1 (expected) or the per-turn sampled
/// rewards of the optimal allocation.
enum class RegretBaseline { Expected, Sampled };

struct GameConfig {
  int players = 1;
  int arms = 1;
  std::int64_t horizon = 1;
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double delta = 0.0;
  double epsilon = 0.01;
  std::optional<double> c_exponent;  // nullopt: log(2/(c2 N)) / log(epsilon)
  std::uint64_t seed = 0;
  ScheduleMode mode = ScheduleMode::Epochs;
  bool reuse_samples = true;
  BaselineSource baseline_source = BaselineSource::LastGotAction;
  RegretBaseline baseline = RegretBaseline::Expected;
  RewardSpec reward = RewardSpec::iid_gaussian(Eigen::MatrixXd::Ones(1, 1), 0.0);

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  /// c in effect: the explicit exponent, or the automatic rule.
  double resolved_c() const;

  bool operator==(const GameConfig&) const = default;
};

/// Automatic exponent: epsilon^c = 2 / (c2 N).
double auto_c_exponent(double c2, int players, double epsilon);

struct PhaseLengths {
  std::int64_t explore = 0;
  std::int64_t got = 0;
  std::int64_t exploit = 0;
};

/// Phase lengths of epoch k >= 1, rounded up. Values that would overflow
/// saturate at INT64_MAX; the horizon truncates them in practice.
PhaseLengths phase_lengths(int k, const GameConfig& config);

/// Consecutive exploitation turns that played one joint profile.
struct ProfileRun {
  std::vector<int> profile;
  std::int64_t turns = 0;
};

struct PhaseSegment {
  int epoch = 0;
  Phase phase = Phase::Exploration;
  std::int64_t begin = 0;   // 0-based turn index of the first turn
  std::int64_t length = 0;
  std::vector<ProfileRun> exploit_runs;  // exploitation segments only
};

struct TurnRecord {
  std::int64_t turn = 0;  // 0-based
  int epoch = 0;
  Phase phase = Phase::Exploration;
  std::vector<int> profile;
  std::vector<std::uint8_t> no_collision;
  std::vector<double> utility;
};

/// Everything observable about one run. Per-player, per-turn detail is kept
/// only when requested; the per-turn total utility is always kept.
struct RunTrace {
  int players = 0;
  std::vector<PhaseSegment> segments;
  std::vector<double> total_utility;        // sum_n realized utility, per turn
  std::vector<double> sampled_baseline;     // per-turn sum_n r_{n,a*_n}; Sampled mode only
  bool detailed = false;
  std::vector<std::int16_t> profiles;       // players per turn, detailed only
  std::vector<std::uint8_t> no_collision;   // players per turn, detailed only
  std::vector<double> utilities;            // players per turn, detailed only

  std::int64_t turns() const { return static_cast<std::int64_t>(total_utility.size()); }
  const PhaseSegment& segment_at(std::int64_t turn) const;
  /// Requires a detailed trace.
  TurnRecord record(std::int64_t turn) const;
};

/// Read-only view handed to instrumentation after each turn.
struct TurnView {
  std::int64_t turn = 0;
  int epoch = 0;
  Phase phase = Phase::Exploration;
  std::span<const int> profile;
  std::span<const std::uint8_t> no_collision;
  std::span<const double> utility;
  std::span<Player* const> players;
};

using TurnObserver = std::function<void(const TurnView&)>;

struct RunOptions {
  bool record_turns = false;
  TurnObserver observer;
};

/// Runs the GoT algorithm with one GotAgent per player.
RunTrace run_game(const GameConfig& config, const RunOptions& options = {});

/// Runs the turn loop with caller-provided players (test doubles,
/// alternative policies). Each player only ever receives its own reward and
/// indicator.
RunTrace run_game(const GameConfig& config, std::span<Player* const> players,
                  const RunOptions& options = {});

/// Builds the agents run_game uses, exposed for instrumentation.
std::vector<GotAgent> make_agents(const GameConfig& config);

/// Cumulative regret after each turn: t * J1 (or the sampled baseline)
/// minus the realized total utility.
std::vector<double> regret_curve(const RunTrace& trace, double j1);

/// Running average of the total utility divided by J1.
std::vector<double> utility_ratio_curve(const RunTrace& trace, double j1);

/// Fraction of exploitation turns (in epochs >= min_epoch) whose joint
/// profile equals a_star. Returns NaN if no such turn exists.
double exploitation_accuracy(const RunTrace& trace, std::span<const int> a_star, int min_epoch = 1);

/// Joint GoT state (baselines, moods) of a set of GotAgents.
struct JointAgentState {
  std::vector<int> baselines;
  std::vector<Mood> moods;
};
JointAgentState joint_state(std::span<Player* const> players);

}  // namespace got

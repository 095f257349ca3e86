#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "got/rng.hpp"

namespace got {

enum class Mood : std::uint8_t { Content = 0, Discontent = 1 };

enum class Phase : std::uint8_t { Exploration = 0, GameOfThrones = 1, Exploitation = 2 };

const char* phase_name(Phase phase);

/// What a player is told after each turn: its own reward and its own
/// no-collision indicator. Nothing else crosses the engine boundary.
struct Observation {
  double reward = 0.0;
  bool no_collision = true;
};

/// Interface between the turn loop and a policy. The engine calls
/// begin_phase once per phase, then act/observe once per turn.
class Player {
 public:
  virtual ~Player() = default;
  virtual void begin_phase(int epoch, Phase phase, Rng& rng) = 0;
  virtual int act(Rng& rng) = 0;
  virtual void observe(int arm, const Observation& obs, Rng& rng) = 0;
};

/// Where the GoT phase of epoch k takes its starting baseline from: the last
/// action of GoT phase k - floor(k/2) - 1, or the action exploited in epoch
/// k - floor(k/2) - 1.
enum class BaselineSource : std::uint8_t { LastGotAction, Exploitation };

struct AgentParams {
  int arms = 1;
  double epsilon = 0.01;
  double c = 1.0;
  double floor = 1e-6;
  bool use_collision_indicator = false;
  bool reuse_samples = true;
  BaselineSource baseline_source = BaselineSource::LastGotAction;
};

/// Content-frequency counters of one GoT phase.
struct PhaseFrequency {
  int epoch = 0;
  std::vector<std::int64_t> content_plays;
};

struct AgentState {
  Mood mood = Mood::Content;
  int baseline = 0;
  std::vector<std::int64_t> visit_count;
  std::vector<double> reward_sum;
  std::deque<PhaseFrequency> phase_freq;
  std::vector<int> last_got_action;     // indexed by epoch; -1 if not played
  std::vector<int> exploit_action;      // indexed by epoch; -1 if not played
  std::vector<double> frozen_utility;   // clamped estimates used in the current GoT phase
  double u_max = 0.0;
};

/// One player of the Game of Thrones algorithm.
///
/// The agent sees only its own action, reward, and (when configured) its
/// collision indicator. Arms are 0-based.
class GotAgent final : public Player {
 public:
  explicit GotAgent(AgentParams params);

  // Player interface.
  void begin_phase(int epoch, Phase phase, Rng& rng) override;
  int act(Rng& rng) override;
  void observe(int arm, const Observation& obs, Rng& rng) override;

  int explore_action(Rng& rng) const;

  /// Running-mean update; collided samples are dropped.
  void update_estimate(int arm, double reward, bool collided);

  /// s/V for visited arms, std::nullopt otherwise.
  std::optional<double> estimate(int arm) const;

  /// Starts the GoT phase of epoch k: content mood, baseline carried over
  /// from epoch k - floor(k/2) - 1 (random for k <= 2), estimates
  /// frozen as utilities, fresh frequency counters.
  void reset_for_got_phase(int k, Rng& rng);

  /// Probability of each arm under the current mood.
  std::vector<double> action_distribution() const;

  int got_action(Rng& rng) const;

  /// The agent's utility for the turn: frozen estimate if no collision, 0 otherwise.
  double got_utility(int arm, bool collided) const;

  /// Probability of turning content after playing with utility u.
  double content_probability(double utility) const;

  void got_update(int played_arm, double utility, bool collided, Rng& rng);

  void record_content(int played_arm, Mood mood);

  /// argmax of summed content counts over the last floor(k/2)+1 GoT phases;
  /// lowest index on ties, baseline when all counts are zero.
  int exploitation_action(int k) const;

  /// Summed content counts over the exploitation window of epoch k.
  std::vector<std::int64_t> window_counts(int k) const;

  const AgentState& state() const { return state_; }
  const AgentParams& params() const { return params_; }

  /// Field-for-field JSON dump for debugging.
  std::string snapshot() const;

 private:
  AgentParams params_;
  AgentState state_;
  int epoch_ = 0;
  Phase phase_ = Phase::Exploration;
  int exploit_arm_ = 0;
  double leave_probability_ = 0.0;  // epsilon^c
};

}  // namespace got

#include "got/game_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "got/assignment_oracle.hpp"

namespace got {

namespace {

constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

std::int64_t ceil_turns(double x) {
  if (!(x < 9.0e18)) return kUnbounded;
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

double auto_c_exponent(double c2, int players, double epsilon) {
  return std::log(2.0 / (c2 * static_cast<double>(players))) / std::log(epsilon);
}

void GameConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid game config: " + what); };
  if (players < 1) fail("players must be >= 1");
  if (arms < players) fail("arms must be >= players (M >= N)");
  if (horizon < 1) fail("horizon must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0) || !(c3 > 0.0)) fail("c1, c2, c3 must be > 0");
  if (!(delta >= 0.0)) fail("delta must be >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (c_exponent && !(*c_exponent > 0.0)) fail("c_exponent must be > 0");
  if (!c_exponent && !(auto_c_exponent(c2, players, epsilon) > 0.0)) {
    fail("automatic c is not positive (needs c2 * N > 2); set c_exponent explicitly");
  }
  if (reward.players() != players || reward.arms() != arms) {
    fail("reward spec is " + std::to_string(reward.players()) + "x" + std::to_string(reward.arms()) +
         " but config is " + std::to_string(players) + "x" + std::to_string(arms));
  }
}

double GameConfig::resolved_c() const {
  return c_exponent ? *c_exponent : auto_c_exponent(c2, players, epsilon);
}

PhaseLengths phase_lengths(int k, const GameConfig& config) {
  if (k < 1) throw std::invalid_argument("epoch index starts at 1");
  if (config.mode == ScheduleMode::SingleEpoch) {
    if (k > 1) return {0, 0, 0};
    return {ceil_turns(config.c1), ceil_turns(config.c2), kUnbounded};
  }
  const double growth = std::pow(static_cast<double>(k), config.delta);
  return {ceil_turns(config.c1 * growth), ceil_turns(config.c2 * growth),
          ceil_turns(config.c3 * std::ldexp(1.0, std::min(k, 1023)))};
}

const PhaseSegment& RunTrace::segment_at(std::int64_t turn) const {
  auto it = std::upper_bound(segments.begin(), segments.end(), turn,
                             [](std::int64_t t, const PhaseSegment& s) { return t < s.begin; });
  if (it == segments.begin() || turn >= turns() || turn < 0) {
    throw std::out_of_range("turn " + std::to_string(turn) + " outside trace");
  }
  return *std::prev(it);
}

TurnRecord RunTrace::record(std::int64_t turn) const {
  if (!detailed) throw std::logic_error("trace was recorded without per-turn detail");
  const auto& seg = segment_at(turn);
  TurnRecord rec;
  rec.turn = turn;
  rec.epoch = seg.epoch;
  rec.phase = seg.phase;
  const auto base = static_cast<std::size_t>(turn) * static_cast<std::size_t>(players);
  for (int n = 0; n < players; ++n) {
    rec.profile.push_back(profiles[base + static_cast<std::size_t>(n)]);
    rec.no_collision.push_back(no_collision[base + static_cast<std::size_t>(n)]);
    rec.utility.push_back(utilities[base + static_cast<std::size_t>(n)]);
  }
  return rec;
}

std::vector<GotAgent> make_agents(const GameConfig& config) {
  AgentParams params;
  params.arms = config.arms;
  params.epsilon = config.epsilon;
  params.c = config.resolved_c();
  params.use_collision_indicator = config.reward.explicit_collision_signal();
  params.reuse_samples = config.reuse_samples;
  params.baseline_source = config.baseline_source;
  return std::vector<GotAgent>(static_cast<std::size_t>(config.players), GotAgent(params));
}

RunTrace run_game(const GameConfig& config, const RunOptions& options) {
  config.validate();
  auto agents = make_agents(config);
  std::vector<Player*> players;
  for (auto& a : agents) players.push_back(&a);
  return run_game(config, players, options);
}

RunTrace run_game(const GameConfig& config, std::span<Player* const> players, const RunOptions& options) {
  config.validate();
  if (static_cast<int>(players.size()) != config.players) {
    throw std::invalid_argument("player count does not match config");
  }
  const int n_players = config.players;
  const auto np = static_cast<std::size_t>(n_players);
  const SeedTree seeds(config.seed);

  std::vector<Rng> agent_rng;
  for (std::size_t n = 0; n < np; ++n) agent_rng.push_back(seeds.stream("agent", n));
  Rng reward_rng = seeds.stream("rewards");
  Rng init_rng = seeds.stream("reward-init");
  RewardProcessState reward_state = initial_state(config.reward, init_rng);

  const bool sampled_baseline =
      config.baseline == RegretBaseline::Sampled && config.reward.kind() != RewardKind::Markovian;
  std::vector<int> a_star;
  Rng oracle_rng = seeds.stream("oracle");
  Rng oracle_init = seeds.stream("oracle-init");
  RewardProcessState oracle_state;
  if (sampled_baseline) {
    a_star = optimal_assignment(config.reward.expected_means()).allocation;
    oracle_state = initial_state(config.reward, oracle_init);
  }

  RunTrace trace;
  trace.players = n_players;
  trace.detailed = options.record_turns;
  const auto horizon = config.horizon;
  trace.total_utility.reserve(static_cast<std::size_t>(horizon));
  if (sampled_baseline) trace.sampled_baseline.reserve(static_cast<std::size_t>(horizon));
  if (trace.detailed) {
    trace.profiles.reserve(static_cast<std::size_t>(horizon) * np);
    trace.no_collision.reserve(static_cast<std::size_t>(horizon) * np);
    trace.utilities.reserve(static_cast<std::size_t>(horizon) * np);
  }

  std::vector<int> profile(np, 0);
  std::vector<double> utility(np, 0.0);
  std::vector<std::uint8_t> indicator(np, 0);

  std::int64_t t = 0;
  for (int k = 1; t < horizon; ++k) {
    const PhaseLengths lens = phase_lengths(k, config);
    if (lens.explore == 0 && lens.got == 0 && lens.exploit == 0) break;
    const std::pair<Phase, std::int64_t> schedule[] = {
        {Phase::Exploration, lens.explore}, {Phase::GameOfThrones, lens.got}, {Phase::Exploitation, lens.exploit}};
    for (const auto& [phase, planned] : schedule) {
      if (t >= horizon) break;
      const std::int64_t length = std::min(planned, horizon - t);
      if (length <= 0) continue;
      PhaseSegment segment{k, phase, t, length, {}};
      for (std::size_t n = 0; n < np; ++n) players[n]->begin_phase(k, phase, agent_rng[n]);

      for (std::int64_t s = 0; s < length; ++s, ++t) {
        for (std::size_t n = 0; n < np; ++n) {
          const int arm = players[n]->act(agent_rng[n]);
          if (arm < 0 || arm >= config.arms) throw std::logic_error("player chose an arm out of range");
          profile[n] = arm;
        }
        sample_rewards_into(config.reward, reward_state, profile, reward_rng, utility, indicator);
        double total = 0.0;
        for (std::size_t n = 0; n < np; ++n) {
          players[n]->observe(profile[n], Observation{utility[n], indicator[n] != 0}, agent_rng[n]);
          total += utility[n];
        }
        trace.total_utility.push_back(total);

        if (phase == Phase::Exploitation) {
          auto& runs = segment.exploit_runs;
          if (runs.empty() || !std::equal(runs.back().profile.begin(), runs.back().profile.end(), profile.begin())) {
            runs.push_back({profile, 0});
          }
          ++runs.back().turns;
        }
        if (trace.detailed) {
          for (std::size_t n = 0; n < np; ++n) {
            trace.profiles.push_back(static_cast<std::int16_t>(profile[n]));
            trace.no_collision.push_back(indicator[n]);
            trace.utilities.push_back(utility[n]);
          }
        }
        if (sampled_baseline) {
          double b = 0.0;
          for (std::size_t n = 0; n < np; ++n) {
            b += draw_reward(config.reward, oracle_state, static_cast<int>(n), a_star[n], oracle_rng);
          }
          trace.sampled_baseline.push_back(b);
        }
        if (options.observer) {
          options.observer(TurnView{t, k, phase, profile, indicator, utility, players});
        }
      }
      trace.segments.push_back(std::move(segment));
    }
  }
  return trace;
}

std::vector<double> regret_curve(const RunTrace& trace, double j1) {
  std::vector<double> out(trace.total_utility.size());
  const bool sampled = !trace.sampled_baseline.empty();
  double reference = 0.0;
  double earned = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    reference += sampled ? trace.sampled_baseline[t] : j1;
    earned += trace.total_utility[t];
    out[t] = sampled ? reference - earned : static_cast<double>(t + 1) * j1 - earned;
  }
  return out;
}

std::vector<double> utility_ratio_curve(const RunTrace& trace, double j1) {
  if (!(j1 > 0.0)) throw std::invalid_argument("utility ratio needs J1 > 0");
  std::vector<double> out(trace.total_utility.size());
  double earned = 0.0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    earned += trace.total_utility[t];
    out[t] = earned / static_cast<double>(t + 1) / j1;
  }
  return out;
}

double exploitation_accuracy(const RunTrace& trace, std::span<const int> a_star, int min_epoch) {
  std::int64_t hit = 0;
  std::int64_t total = 0;
  for (const auto& seg : trace.segments) {
    if (seg.phase != Phase::Exploitation || seg.epoch < min_epoch) continue;
    for (const auto& run : seg.exploit_runs) {
      total += run.turns;
      if (std::equal(run.profile.begin(), run.profile.end(), a_star.begin(), a_star.end())) hit += run.turns;
    }
  }
  if (total == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(hit) / static_cast<double>(total);
}

JointAgentState joint_state(std::span<Player* const> players) {
  JointAgentState z;
  for (const Player* p : players) {
    const auto* agent = dynamic_cast<const GotAgent*>(p);
    if (agent == nullptr) throw std::invalid_argument("joint_state needs GotAgent players");
    z.baselines.push_back(agent->state().baseline);
    z.moods.push_back(agent->state().mood);
  }
  return z;
}

}  // namespace got

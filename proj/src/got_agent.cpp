#include "got/got_agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace got {

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::Exploration: return "explore";
    case Phase::GameOfThrones: return "got";
    case Phase::Exploitation: return "exploit";
  }
  return "?";
}

GotAgent::GotAgent(AgentParams params) : params_(params) {
  if (params_.arms < 1) throw std::invalid_argument("agent needs at least one arm");
  if (!(params_.epsilon > 0.0 && params_.epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (!(params_.c > 0.0)) throw std::invalid_argument("c must be > 0");
  if (!(params_.floor > 0.0)) throw std::invalid_argument("estimate floor must be > 0");
  const auto m = static_cast<std::size_t>(params_.arms);
  state_.visit_count.assign(m, 0);
  state_.reward_sum.assign(m, 0.0);
  state_.frozen_utility.assign(m, params_.floor);
  state_.u_max = params_.floor;
  state_.last_got_action.assign(1, -1);
  leave_probability_ = std::pow(params_.epsilon, params_.c);
}

void GotAgent::begin_phase(int epoch, Phase phase, Rng& rng) {
  epoch_ = epoch;
  phase_ = phase;
  if (phase == Phase::GameOfThrones) {
    reset_for_got_phase(epoch, rng);
  } else if (phase == Phase::Exploitation) {
    exploit_arm_ = exploitation_action(epoch);
    if (static_cast<int>(state_.exploit_action.size()) <= epoch) {
      state_.exploit_action.resize(static_cast<std::size_t>(epoch) + 1, -1);
    }
    state_.exploit_action[static_cast<std::size_t>(epoch)] = exploit_arm_;
  }
}

int GotAgent::act(Rng& rng) {
  switch (phase_) {
    case Phase::Exploration: return explore_action(rng);
    case Phase::GameOfThrones: return got_action(rng);
    case Phase::Exploitation: return exploit_arm_;
  }
  return 0;
}

void GotAgent::observe(int arm, const Observation& obs, Rng& rng) {
  const bool collided = params_.use_collision_indicator ? !obs.no_collision : obs.reward == 0.0;
  switch (phase_) {
    case Phase::Exploration:
      update_estimate(arm, obs.reward, collided);
      break;
    case Phase::GameOfThrones:
      got_update(arm, got_utility(arm, collided), collided, rng);
      record_content(arm, state_.mood);
      if (params_.reuse_samples) update_estimate(arm, obs.reward, collided);
      break;
    case Phase::Exploitation:
      if (params_.reuse_samples) update_estimate(arm, obs.reward, collided);
      break;
  }
}

int GotAgent::explore_action(Rng& rng) const { return uniform_arm(rng, params_.arms); }

void GotAgent::update_estimate(int arm, double reward, bool collided) {
  if (collided) return;
  const auto i = static_cast<std::size_t>(arm);
  ++state_.visit_count[i];
  state_.reward_sum[i] += reward;
}

std::optional<double> GotAgent::estimate(int arm) const {
  const auto i = static_cast<std::size_t>(arm);
  if (state_.visit_count[i] == 0) return std::nullopt;
  return state_.reward_sum[i] / static_cast<double>(state_.visit_count[i]);
}

void GotAgent::reset_for_got_phase(int k, Rng& rng) {
  if (k < 1) throw std::invalid_argument("epoch index starts at 1");
  epoch_ = k;
  phase_ = Phase::GameOfThrones;
  state_.mood = Mood::Content;
  if (k <= 2) {
    state_.baseline = uniform_arm(rng, params_.arms);
  } else {
    const int source = k - k / 2 - 1;
    const auto& last = params_.baseline_source == BaselineSource::Exploitation ? state_.exploit_action
                                                                                : state_.last_got_action;
    const int carried = source < static_cast<int>(last.size()) ? last[static_cast<std::size_t>(source)] : -1;
    state_.baseline = carried >= 0 ? carried : uniform_arm(rng, params_.arms);
  }

  state_.u_max = params_.floor;
  for (int i = 0; i < params_.arms; ++i) {
    const double u = std::max(estimate(i).value_or(params_.floor), params_.floor);
    state_.frozen_utility[static_cast<std::size_t>(i)] = u;
    state_.u_max = std::max(state_.u_max, u);
  }

  if (static_cast<int>(state_.last_got_action.size()) <= k) {
    state_.last_got_action.resize(static_cast<std::size_t>(k) + 1, -1);
  }
  state_.phase_freq.push_back({k, std::vector<std::int64_t>(static_cast<std::size_t>(params_.arms), 0)});
  const int oldest = k - k / 2;
  while (!state_.phase_freq.empty() && state_.phase_freq.front().epoch < oldest) {
    state_.phase_freq.pop_front();
  }
}

std::vector<double> GotAgent::action_distribution() const {
  const auto m = static_cast<std::size_t>(params_.arms);
  std::vector<double> p(m, 1.0 / static_cast<double>(m));
  if (state_.mood == Mood::Content) {
    if (m == 1) return {1.0};
    const double leave = leave_probability_;
    std::fill(p.begin(), p.end(), leave / static_cast<double>(m - 1));
    p[static_cast<std::size_t>(state_.baseline)] = 1.0 - leave;
  }
  return p;
}

int GotAgent::got_action(Rng& rng) const {
  const int m = params_.arms;
  if (state_.mood == Mood::Discontent) return uniform_arm(rng, m);
  if (m == 1) return state_.baseline;
  if (uniform01(rng) >= leave_probability_) return state_.baseline;
  const int other = uniform_arm(rng, m - 1);
  return other >= state_.baseline ? other + 1 : other;
}

double GotAgent::got_utility(int arm, bool collided) const {
  return collided ? 0.0 : state_.frozen_utility[static_cast<std::size_t>(arm)];
}

double GotAgent::content_probability(double utility) const {
  if (!(utility > 0.0)) return 0.0;
  const double u = std::min(utility, state_.u_max);
  return (u / state_.u_max) * std::pow(params_.epsilon, state_.u_max - u);
}

void GotAgent::got_update(int played_arm, double utility, bool collided, Rng& rng) {
  if (collided) utility = 0.0;
  if (static_cast<int>(state_.last_got_action.size()) <= epoch_) {
    state_.last_got_action.resize(static_cast<std::size_t>(epoch_) + 1, -1);
  }
  if (state_.mood == Mood::Content && played_arm == state_.baseline && utility > 0.0) {
    state_.last_got_action[static_cast<std::size_t>(epoch_)] = played_arm;
    return;
  }
  const double p = content_probability(utility);
  state_.baseline = played_arm;
  state_.mood = uniform01(rng) < p ? Mood::Content : Mood::Discontent;
  state_.last_got_action[static_cast<std::size_t>(epoch_)] = played_arm;
}

void GotAgent::record_content(int played_arm, Mood mood) {
  if (mood != Mood::Content || state_.phase_freq.empty()) return;
  ++state_.phase_freq.back().content_plays[static_cast<std::size_t>(played_arm)];
}

std::vector<std::int64_t> GotAgent::window_counts(int k) const {
  std::vector<std::int64_t> sums(static_cast<std::size_t>(params_.arms), 0);
  const int oldest = k - k / 2;
  for (const auto& f : state_.phase_freq) {
    if (f.epoch < oldest || f.epoch > k) continue;
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += f.content_plays[i];
  }
  return sums;
}

int GotAgent::exploitation_action(int k) const {
  const auto sums = window_counts(k);
  const auto best = std::max_element(sums.begin(), sums.end());
  if (*best == 0) return state_.baseline;
  return static_cast<int>(best - sums.begin());
}

std::string GotAgent::snapshot() const {
  nlohmann::json freq = nlohmann::json::array();
  for (const auto& f : state_.phase_freq) freq.push_back({{"epoch", f.epoch}, {"content_plays", f.content_plays}});
  nlohmann::json j = {
      {"mood", state_.mood == Mood::Content ? "C" : "D"},
      {"baseline", state_.baseline},
      {"visit_count", state_.visit_count},
      {"reward_sum", state_.reward_sum},
      {"phase_freq", freq},
      {"last_got_action", state_.last_got_action},
      {"exploit_action", state_.exploit_action},
      {"frozen_utility", state_.frozen_utility},
      {"u_max", state_.u_max},
      {"epsilon", params_.epsilon},
      {"c", params_.c},
      {"floor", params_.floor},
  };
  return j.dump();
}

}  // namespace got

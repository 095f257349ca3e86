#include <doctest.h>

#include <cmath>
#include <vector>

#include "got/got_agent.hpp"

using namespace got;

namespace {

AgentParams params(int arms, double eps = 0.01, double c = 1.4) {
  AgentParams p;
  p.arms = arms;
  p.epsilon = eps;
  p.c = c;
  return p;
}

// Feeds one collision-free sample per arm so the frozen utilities equal `u`.
void seed_estimates(GotAgent& agent, const std::vector<double>& u) {
  for (std::size_t i = 0; i < u.size(); ++i) agent.update_estimate(static_cast<int>(i), u[i], false);
}

}  // namespace

TEST_CASE("exploration is uniform") {
  GotAgent agent(params(3));
  Rng rng(1);
  std::vector<int> hits(3, 0);
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) ++hits[static_cast<std::size_t>(agent.explore_action(rng))];
  for (int h : hits) CHECK(std::abs(h / static_cast<double>(draws) - 1.0 / 3.0) < 0.01);

  GotAgent single(params(1));
  for (int t = 0; t < 50; ++t) CHECK(single.explore_action(rng) == 0);

  Rng a(9), b(9);
  for (int t = 0; t < 100; ++t) CHECK(agent.explore_action(a) == agent.explore_action(b));
}

TEST_CASE("update_estimate") {
  GotAgent agent(params(3));
  agent.update_estimate(1, 0.0, true);
  CHECK(agent.state().visit_count[1] == 0);
  CHECK(agent.state().reward_sum[1] == 0.0);
  CHECK_FALSE(agent.estimate(1).has_value());

  agent.update_estimate(0, 0.5, false);
  agent.update_estimate(0, 0.7, false);
  CHECK(*agent.estimate(0) == doctest::Approx(0.6));

  Rng rng(2);
  std::normal_distribution<double> noise(0.9, std::sqrt(0.05));
  for (int t = 0; t < 10000; ++t) agent.update_estimate(2, noise(rng), false);
  CHECK(std::abs(*agent.estimate(2) - 0.9) < 0.02);
}

TEST_CASE("content action distribution") {
  GotAgent agent(params(3));
  Rng rng(3);
  agent.reset_for_got_phase(1, rng);
  const auto p = agent.action_distribution();
  const double leave = std::pow(0.01, 1.4);
  CHECK(p[static_cast<std::size_t>(agent.state().baseline)] == doctest::Approx(0.998415).epsilon(1e-6));
  CHECK(p[static_cast<std::size_t>(agent.state().baseline)] == doctest::Approx(1.0 - leave));
  for (std::size_t i = 0; i < 3; ++i) {
    if (static_cast<int>(i) != agent.state().baseline) CHECK(p[i] == doctest::Approx(7.924e-4).epsilon(1e-3));
  }

  int stay = 0;
  const int draws = 200000;
  for (int t = 0; t < draws; ++t) stay += agent.got_action(rng) == agent.state().baseline;
  CHECK(stay / static_cast<double>(draws) == doctest::Approx(1.0 - leave).epsilon(5e-4));

  GotAgent tiny(params(3, 1e-9));
  tiny.reset_for_got_phase(1, rng);
  CHECK(tiny.action_distribution()[static_cast<std::size_t>(tiny.state().baseline)] > 1.0 - 1e-11);
}

TEST_CASE("discontent plays uniformly") {
  GotAgent agent(params(3));
  Rng rng(4);
  agent.reset_for_got_phase(1, rng);
  agent.got_update(0, 0.0, true, rng);
  REQUIRE(agent.state().mood == Mood::Discontent);
  for (double q : agent.action_distribution()) CHECK(q == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("got_update transitions") {
  Rng rng(5);
  GotAgent agent(params(3));
  seed_estimates(agent, {0.9, 0.25, 0.1});
  agent.reset_for_got_phase(1, rng);
  CHECK(agent.state().u_max == doctest::Approx(0.9));

  CHECK(agent.content_probability(0.0) == 0.0);
  CHECK(agent.content_probability(0.9) == doctest::Approx(1.0));
  CHECK(agent.content_probability(0.25) == doctest::Approx(0.01392).epsilon(1e-3));
  CHECK(agent.content_probability(0.25) == doctest::Approx(0.25 / 0.9 * std::pow(0.01, 0.65)));

  for (int trial = 0; trial < 20; ++trial) {
    agent.got_update(1, 0.0, true, rng);
    CHECK(agent.state().mood == Mood::Discontent);
    CHECK(agent.state().baseline == 1);
  }
  for (int trial = 0; trial < 20; ++trial) {
    agent.got_update(0, 0.9, false, rng);
    CHECK(agent.state().mood == Mood::Content);
    CHECK(agent.state().baseline == 0);
  }
  // Content on the baseline with positive utility: nothing moves, even at low utility.
  GotAgent low(params(3));
  seed_estimates(low, {0.9, 0.25, 0.1});
  low.reset_for_got_phase(1, rng);
  const int b = low.state().baseline;
  for (int trial = 0; trial < 20; ++trial) {
    low.got_update(b, 0.1, false, rng);
    CHECK(low.state().mood == Mood::Content);
    CHECK(low.state().baseline == b);
  }

  int content = 0;
  const int trials = 200000;
  for (int t = 0; t < trials; ++t) {
    agent.got_update(0, 0.0, true, rng);  // force discontent
    agent.got_update(1, 0.25, false, rng);
    content += agent.state().mood == Mood::Content;
  }
  const double p = 0.25 / 0.9 * std::pow(0.01, 0.65);
  CHECK(std::abs(content / static_cast<double>(trials) - p) < 4.0 * std::sqrt(p * (1 - p) / trials));
}

TEST_CASE("record_content and exploitation window") {
  Rng rng(6);
  GotAgent agent(params(3));
  agent.reset_for_got_phase(1, rng);
  agent.record_content(1, Mood::Discontent);
  CHECK(agent.window_counts(1) == std::vector<std::int64_t>{0, 0, 0});
  for (int t = 0; t < 25; ++t) agent.record_content(1, Mood::Content);
  CHECK(agent.window_counts(1) == std::vector<std::int64_t>{0, 25, 0});

  GotAgent strict(params(3));
  strict.reset_for_got_phase(1, rng);
  for (int t = 0; t < 10; ++t) strict.record_content(0, Mood::Content);
  for (int t = 0; t < 500; ++t) strict.record_content(1, Mood::Content);
  for (int t = 0; t < 3; ++t) strict.record_content(2, Mood::Content);
  CHECK(strict.exploitation_action(1) == 1);

  GotAgent tie(params(3));
  tie.reset_for_got_phase(1, rng);
  for (int t = 0; t < 7; ++t) tie.record_content(0, Mood::Content);
  for (int t = 0; t < 7; ++t) tie.record_content(1, Mood::Content);
  tie.record_content(2, Mood::Content);
  CHECK(tie.exploitation_action(1) == 0);

  // GoT phase k records 100 k content plays of arm (k - 1) % 3.
  GotAgent window(params(3));
  for (int k = 1; k <= 4; ++k) {
    window.reset_for_got_phase(k, rng);
    for (int t = 0; t < k * 100; ++t) window.record_content((k - 1) % 3, Mood::Content);
  }
  // k=4 sums phases 2, 3, 4: arm1 200, arm2 300, arm0 400.
  CHECK(window.window_counts(4) == std::vector<std::int64_t>{400, 200, 300});
  CHECK(window.exploitation_action(4) == 0);

  GotAgent empty(params(3));
  empty.reset_for_got_phase(1, rng);
  CHECK(empty.exploitation_action(1) == empty.state().baseline);
}

TEST_CASE("reset_for_got_phase baseline source") {
  Rng rng(7);
  GotAgent agent(params(4));
  std::vector<int> seen(4, 0);
  for (int trial = 0; trial < 400; ++trial) {
    agent.reset_for_got_phase(1, rng);
    CHECK(agent.state().mood == Mood::Content);
    ++seen[static_cast<std::size_t>(agent.state().baseline)];
  }
  for (int s : seen) CHECK(s > 50);

  GotAgent carry(params(4));
  const int played[] = {0, 3, 1, 2, 0};
  for (int k = 1; k <= 4; ++k) {
    carry.reset_for_got_phase(k, rng);
    carry.got_update(played[k], 0.0, true, rng);
  }
  for (int trial = 0; trial < 20; ++trial) {
    carry.reset_for_got_phase(5, rng);
    CHECK(carry.state().baseline == played[2]);
    CHECK(carry.state().mood == Mood::Content);
  }
}

TEST_CASE("exploitation baseline source") {
  Rng rng(11);
  AgentParams p = params(4);
  p.baseline_source = BaselineSource::Exploitation;
  GotAgent agent(p);
  for (int k = 1; k <= 4; ++k) {
    agent.begin_phase(k, Phase::Exploration, rng);
    agent.observe(k % 4, Observation{0.5, true}, rng);
    agent.begin_phase(k, Phase::GameOfThrones, rng);
    const int got_arm = (k + 1) % 4;
    for (int t = 0; t < 5; ++t) agent.record_content(got_arm, Mood::Content);
    agent.begin_phase(k, Phase::Exploitation, rng);
  }
  const auto& exploit = agent.state().exploit_action;
  REQUIRE(exploit.size() > 2);
  for (int trial = 0; trial < 20; ++trial) {
    agent.reset_for_got_phase(5, rng);
    CHECK(agent.state().baseline == exploit[2]);
  }
}

TEST_CASE("estimates are floored when frozen") {
  Rng rng(8);
  GotAgent agent(params(2));
  agent.update_estimate(0, -0.3, false);
  agent.reset_for_got_phase(1, rng);
  CHECK(agent.state().frozen_utility[0] == 1e-6);
  CHECK(agent.state().frozen_utility[1] == 1e-6);
  CHECK(agent.state().u_max == 1e-6);
}

TEST_CASE("phase driver via the Player interface") {
  Rng rng(9);
  AgentParams p = params(2);
  GotAgent agent(p);
  agent.begin_phase(1, Phase::Exploration, rng);
  for (int t = 0; t < 100; ++t) {
    const int a = agent.act(rng);
    agent.observe(a, Observation{a == 0 ? 0.8 : 0.4, true}, rng);
  }
  agent.begin_phase(1, Phase::GameOfThrones, rng);
  CHECK(agent.state().u_max == doctest::Approx(0.8));
  for (int t = 0; t < 200; ++t) {
    const int a = agent.act(rng);
    agent.observe(a, Observation{a == 0 ? 0.8 : 0.4, true}, rng);
  }
  agent.begin_phase(1, Phase::Exploitation, rng);
  const int choice = agent.act(rng);
  CHECK(choice == agent.exploitation_action(1));
  for (int t = 0; t < 5; ++t) CHECK(agent.act(rng) == choice);
  CHECK_FALSE(agent.snapshot().empty());
}

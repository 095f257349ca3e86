// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "got/assignment_oracle.hpp"
#include "got/chain_analyzer.hpp"
#include "got/experiment.hpp"

using namespace got;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::MatrixXd u3x3() {
  Eigen::MatrixXd u(3, 3);
  u << 0.1, 0.05, 0.9, 0.1, 0.25, 0.3, 0.4, 0.2, 0.8;
  return u;
}

std::string config_path(const char* name) { return std::string(GOT_CONFIG_DIR) + "/" + name; }

// Shared between criteria 1 and 3.
BatchResult& batch3x3() {
  static BatchResult result = [] {
    auto config = load_config(config_path("got3x3.cfg"));
    config.replications = 20;
    config.outputs = {OutputKind::RegretCurve};
    return run_batch(config);
  }();
  return result;
}

Outcome regret_band() {
  const auto& batch = batch3x3();
  const double t = 2e6;
  const double final_mean = batch.find("regret_curve")->rows.back().mean;
  const double per_log = final_mean / std::log2(t);
  std::vector<double> finals;
  for (const auto& s : batch.seeds) finals.push_back(s.final_regret);
  std::sort(finals.begin(), finals.end());
  const double median = 0.5 * (finals[(finals.size() - 1) / 2] + finals[finals.size() / 2]);
  return {per_log >= 300.0 && per_log <= 900.0,
          fmt("mean regret at T=2e6 over %zu seeds = %.1f = %.1f log2(T) (median seed %.1f log2(T), max %.1f log2(T)); "
              "band [300, 900] log2(T)",
              batch.seeds.size(), final_mean, per_log, median / std::log2(t), finals.back() / std::log2(t))};
}

Outcome random_matrices_ratio() {
  auto config = load_config(config_path("got5x5.cfg"));
  config.replications = 20;
  config.outputs = {OutputKind::UtilityRatio};
  const auto batch = run_batch(config);
  const double ratio = batch.find("utility_ratio")->rows.back().mean;
  double worst = 1.0;
  for (const auto& s : batch.seeds) worst = std::min(worst, s.final_ratio);
  return {ratio >= 0.85, fmt("mean utility ratio at T=4e6 over 20 random U = %.4f (worst %.4f); need >= 0.85", ratio,
                             worst)};
}

Outcome exploitation_correct() {
  const auto& batch = batch3x3();
  int perfect = 0;
  for (const auto& s : batch.seeds) perfect += s.exploit_accuracy == 1.0;
  const double share = static_cast<double>(perfect) / static_cast<double>(batch.seeds.size());
  return {share >= 0.9, fmt("%d/%zu seeds exploit a* on every turn of epochs k >= 3; need >= 90%%", perfect,
                            batch.seeds.size())};
}

Outcome stationary_mass_monotone() {
  Eigen::MatrixXd u(2, 2);
  u << 1.0, 0.5, 0.5, 1.0;
  std::string values;
  double previous = -1.0;
  bool increasing = true;
  for (double eps : {0.3, 0.1, 0.03, 0.01, 0.003}) {
    const double mass = pi_optimal(build_chain(u, eps, 1.4)).mass;
    increasing = increasing && mass > previous;
    previous = mass;
    values += fmt("%s%.6f", values.empty() ? "" : ", ", mass);
  }
  return {increasing && previous > 0.5,
          "pi_z* at eps = 0.3, 0.1, 0.03, 0.01, 0.003: " + values + "; strictly increasing, last > 0.5"};
}

Outcome tree_formula_equivalence() {
  Rng rng(2024);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  double worst_random = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd p(8, 8);
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) p(i, j) = weight(rng) + 1e-3;
      p.row(i) /= p.row(i).sum();
    }
    worst_random = std::max(worst_random, (stationary_tree_formula(p) - stationary_linear(p)).cwiseAbs().maxCoeff());
  }
  double worst_got = 0.0;
  int chains = 0;
  std::vector<Eigen::MatrixXd> utilities;
  Eigen::MatrixXd u(2, 2);
  u << 1.0, 0.5, 0.5, 1.0;
  utilities.push_back(u);
  std::uniform_real_distribution<double> mean(0.05, 0.95);
  for (int i = 0; i < 10; ++i) {
    u << mean(rng), mean(rng), mean(rng), mean(rng);
    utilities.push_back(u);
  }
  for (const auto& util : utilities) {
    for (double eps : {0.3, 0.1, 0.03, 0.01, 0.003}) {
      const auto model = build_chain(util, eps, 1.4);
      worst_got = std::max(worst_got, (stationary_tree_formula(model) - stationary_linear(model)).cwiseAbs().maxCoeff());
      ++chains;
    }
  }
  return {worst_random <= 1e-9 && worst_got <= 1e-9,
          fmt("max L_inf gap: %.3g on 100 random 8-state chains, %.3g on %d N=M=2 GoT chains; need <= 1e-9",
              worst_random, worst_got, chains)};
}

Outcome perturbation_invariance() {
  const auto u = u3x3();
  const auto base = optimal_assignment(u).allocation;
  const double delta = 0.99 * solve_assignment(u).margin;
  Rng rng(77);
  std::uniform_real_distribution<double> noise(-delta, delta);
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd p = u;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
      for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) += noise(rng);
    failures += optimal_assignment(p).allocation != base;
  }
  return {failures == 0, fmt("%d/1000 perturbations at delta = %.6f moved the argmax; need 0", failures, delta)};
}

Outcome oracle_equivalence() {
  Rng rng(99);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 6)(rng);
    const int m = std::uniform_int_distribution<int>(n, 6)(rng);
    Eigen::MatrixXd means(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) means(i, j) = value(rng);
    const auto a = optimal_assignment(means);
    const auto b = brute_force_assignment(means);
    mismatches += a.allocation != b.allocation || a.value != b.value;
  }
  return {mismatches == 0, fmt("%d/500 random matrices (N <= M <= 6) differ in allocation or J1; need 0", mismatches)};
}

// Monte-Carlo frequency that the allocation optimal for the agents' own
// estimates after k exploration phases differs from a*.
double exploration_failure_rate(double c1, int k, int trials) {
  const auto u = u3x3();
  const auto a_star = optimal_assignment(u).allocation;
  int wrong = 0;
  for (int trial = 0; trial < trials; ++trial) {
    GameConfig g;
    g.players = 3;
    g.arms = 3;
    g.c1 = c1 * k;
    g.c2 = 6000;
    g.c3 = 6000;
    g.horizon = static_cast<std::int64_t>(c1) * k;
    g.epsilon = 0.01;
    g.mode = ScheduleMode::SingleEpoch;
    g.seed = 1000003ULL * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(trial);
    g.reward = RewardSpec::iid_gaussian(u, 0.05);
    auto agents = make_agents(g);
    std::vector<Player*> players;
    for (auto& a : agents) players.push_back(&a);
    run_game(g, players);
    Eigen::MatrixXd estimate(3, 3);
    for (int n = 0; n < 3; ++n)
      for (int i = 0; i < 3; ++i)
        estimate(n, i) = std::max(agents[static_cast<std::size_t>(n)].estimate(i).value_or(1e-6), 1e-6);
    wrong += optimal_assignment(estimate).allocation != a_star;
  }
  return static_cast<double>(wrong) / trials;
}

Outcome exploration_bound_dominance() {
  const auto u = u3x3();
  const auto r = solve_assignment(u);
  ExplorationBoundParams p;
  p.players = 3;
  p.arms = 3;
  p.delta = 0.0;
  p.variance_max = 0.05;
  p.b_max = std::sqrt(0.05);
  p.j1 = r.j1;
  p.j2 = r.j2;
  bool ok = true;
  std::string detail;
  const std::pair<double, int> cases[] = {{1000.0, 4}, {5000.0, 1}, {2000.0, 3}};
  for (const auto& [c1, k] : cases) {
    p.c1 = c1;
    const auto bound = exploration_bound(p, k);
    if (!(bound.p_ek < 1.0)) {
      ok = false;
      detail += fmt("c1=%g k=%d bound vacuous; ", c1, k);
      continue;
    }
    const double freq = exploration_failure_rate(c1, k, 1000);
    ok = ok && freq <= bound.p_ek;
    detail += fmt("c1=%g k=%d: freq %.4f <= bound %.4f; ", c1, k, freq, bound.p_ek);
  }
  return {ok, detail + "1000 trials each"};
}

// Independent oracle: stationary law by power iteration.
double chain_mean(const MarkovArm& arm) {
  Eigen::RowVectorXd x = Eigen::RowVectorXd::Constant(arm.transition.rows(), 1.0 / static_cast<double>(arm.transition.rows()));
  for (int i = 0; i < 10000; ++i) x = x * arm.transition;
  double m = 0.0;
  for (Eigen::Index s = 0; s < x.size(); ++s) m += x(s) * arm.states[static_cast<std::size_t>(s)];
  return m;
}

Outcome markovian_mode() {
  auto config = load_config(config_path("markov2x2.cfg"));
  config.replications = 10;
  const auto& chains = config.game.reward.chains();
  Eigen::MatrixXd expected(2, 2);
  for (int n = 0; n < 2; ++n)
    for (int i = 0; i < 2; ++i) expected(n, i) = chain_mean(chains[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]);
  const auto a_star = brute_force_assignment(expected).allocation;

  std::int64_t hit = 0, total = 0;
  double worst = 1.0;
  for (int rep = 0; rep < config.replications; ++rep) {
    auto game = replication_game(config, rep);
    const auto trace = run_game(game);
    std::int64_t rep_hit = 0, rep_total = 0;
    for (const auto& seg : trace.segments) {
      if (seg.phase != Phase::Exploitation || seg.epoch < 4) continue;
      for (const auto& run : seg.exploit_runs) {
        rep_total += run.turns;
        if (run.profile == a_star) rep_hit += run.turns;
      }
    }
    hit += rep_hit;
    total += rep_total;
    if (rep_total > 0) worst = std::min(worst, static_cast<double>(rep_hit) / static_cast<double>(rep_total));
  }
  const double share = total > 0 ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
  return {total > 0 && share >= 0.95,
          fmt("a* = (%d, %d) from stationary expectations; exploitation turns on a* over epochs k >= 4, 10 seeds: %.4f "
              "(worst seed %.4f); need >= 0.95",
              a_star[0], a_star[1], share, worst)};
}

Outcome determinism(const std::string& cli) {
  auto config = load_config(config_path("got3x3.cfg"));
  config.replications = 4;
  config.game.horizon = 300000;
  config.outputs = {OutputKind::RegretCurve, OutputKind::UtilityRatio, OutputKind::Occupancy};
  const auto serial = run_batch(config, 1);
  const auto again = run_batch(config, 1);
  const auto parallel = run_batch(config, 4);
  bool same = true;
  for (std::size_t i = 0; i < serial.series.size(); ++i) {
    same = same && format_csv(serial.series[i]) == format_csv(again.series[i]) &&
           format_csv(serial.series[i]) == format_csv(parallel.series[i]);
  }
  std::string detail = fmt("in-process series identical across runs and 1 vs 4 workers: %s", same ? "yes" : "no");

  if (!cli.empty()) {
    const auto dir = fs::temp_directory_path() / "got_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg = (dir / "cfg.json").string();
    write_text_file(cfg, emit_config(config));
    bool cli_same = true;
    const char* threads[] = {"1", "4", "1"};
    for (int run = 0; run < 3; ++run) {
      const auto out = (dir / ("out" + std::to_string(run))).string();
      const std::string cmd =
          "GOT_THREADS=" + std::string(threads[run]) + " '" + cli + "' batch '" + cfg + "' --out '" + out + "' > /dev/null";
      cli_same = cli_same && std::system(cmd.c_str()) == 0;
    }
    for (const char* name : {"regret_curve.csv", "utility_ratio.csv", "occupancy.csv", "seeds.csv"}) {
      const auto ref = read_text_file((dir / "out0" / name).string());
      cli_same = cli_same && !ref.empty() && ref == read_text_file((dir / "out1" / name).string()) &&
                 ref == read_text_file((dir / "out2" / name).string());
    }
    same = same && cli_same;
    detail += fmt("; CLI CSV bytes identical across 3 invocations (GOT_THREADS=1, 4, 1): %s", cli_same ? "yes" : "no");
  }
  return {same, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 regret band (3x3)", regret_band},
      {"2 utility ratio (5x5 random U)", random_matrices_ratio},
      {"3 exploitation correctness", exploitation_correct},
      {"4 stationary mass of z*", stationary_mass_monotone},
      {"5 tree formula equivalence", tree_formula_equivalence},
      {"6 perturbation invariance", perturbation_invariance},
      {"7 assignment oracle equivalence", oracle_equivalence},
      {"8 exploration bound dominance", exploration_bound_dominance},
      {"9 markovian rewards", markovian_mode},
      {"10 determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

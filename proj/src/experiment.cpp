#include "got/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "got/assignment_oracle.hpp"
#include "got/chain_analyzer.hpp"

namespace got {

using nlohmann::json;

namespace {

const std::pair<OutputKind, const char*> kOutputNames[] = {
    {OutputKind::RegretCurve, "regret_curve"},
    {OutputKind::UtilityRatio, "utility_ratio"},
    {OutputKind::Occupancy, "occupancy"},
    {OutputKind::ChainReport, "chain_report"},
};

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("config: " + what); }

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad(key + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad(key + " rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) bad(key + " entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  return get_or<T>(j, key, T{});
}

json reward_to_json(const RewardSpec& spec) {
  json r;
  switch (spec.kind()) {
    case RewardKind::IidGaussian:
      r["kind"] = "gaussian";
      r["means"] = matrix_to_json(spec.expected_means());
      r["variance"] = spec.variance();
      break;
    case RewardKind::IidCustomTable:
      r["kind"] = "table";
      r["tables"] = spec.tables();
      break;
    case RewardKind::Markovian: {
      r["kind"] = "markov";
      json chains = json::array();
      for (const auto& per_player : spec.chains()) {
        json arms = json::array();
        for (const auto& arm : per_player) {
          arms.push_back({{"states", arm.states}, {"transition", matrix_to_json(arm.transition)}});
        }
        chains.push_back(std::move(arms));
      }
      r["chains"] = std::move(chains);
      break;
    }
  }
  if (spec.has_bernstein()) {
    r["bernstein"] = {{"sigma", matrix_to_json(spec.bernstein_sigma())}, {"b", matrix_to_json(spec.bernstein_b())}};
  }
  return r;
}

RewardSpec reward_from_json(const json& r) {
  if (!r.is_object()) bad("reward must be an object");
  const auto kind = require<std::string>(r, "kind");
  auto build = [&]() {
    if (kind == "gaussian") {
      return RewardSpec::iid_gaussian(matrix_from_json(r.value("means", json()), "reward.means"),
                                      require<double>(r, "variance"));
    }
    if (kind == "table") {
      return RewardSpec::custom_table(require<std::vector<std::vector<std::vector<double>>>>(r, "tables"));
    }
    if (kind == "markov") {
      if (!r.contains("chains") || !r["chains"].is_array()) bad("reward.chains must be an array");
      std::vector<std::vector<MarkovArm>> chains;
      for (const auto& per_player : r["chains"]) {
        if (!per_player.is_array()) bad("reward.chains must be players x arms");
        std::vector<MarkovArm> arms;
        for (const auto& arm : per_player) {
          arms.push_back({require<std::vector<double>>(arm, "states"),
                          matrix_from_json(arm.value("transition", json()), "reward.chains.transition")});
        }
        chains.push_back(std::move(arms));
      }
      return RewardSpec::markovian(std::move(chains));
    }
    bad("unknown reward kind '" + kind + "' (gaussian, table, markov)");
  };
  RewardSpec spec = build();
  if (r.contains("bernstein")) {
    const auto& b = r["bernstein"];
    spec.set_bernstein(matrix_from_json(b.value("sigma", json()), "reward.bernstein.sigma"),
                       matrix_from_json(b.value("b", json()), "reward.bernstein.b"));
  }
  return spec;
}

json game_to_json(const GameConfig& g) {
  json j;
  j["players"] = g.players;
  j["arms"] = g.arms;
  j["horizon"] = g.horizon;
  j["c1"] = g.c1;
  j["c2"] = g.c2;
  j["c3"] = g.c3;
  j["delta"] = g.delta;
  j["epsilon"] = g.epsilon;
  j["c_exponent"] = g.c_exponent ? json(*g.c_exponent) : json(nullptr);
  j["seed"] = g.seed;
  j["mode"] = g.mode == ScheduleMode::Epochs ? "epochs" : "single_epoch";
  j["reuse_samples"] = g.reuse_samples;
  j["baseline_source"] = g.baseline_source == BaselineSource::LastGotAction ? "last_got_action" : "exploitation";
  j["baseline"] = g.baseline == RegretBaseline::Expected ? "expected" : "sampled";
  j["reward"] = reward_to_json(g.reward);
  return j;
}

GameConfig game_from_json(const json& j) {
  if (!j.is_object()) bad("game must be an object");
  GameConfig g;
  g.players = require<int>(j, "players");
  g.arms = require<int>(j, "arms");
  g.horizon = require<std::int64_t>(j, "horizon");
  g.c1 = require<double>(j, "c1");
  g.c2 = require<double>(j, "c2");
  g.c3 = require<double>(j, "c3");
  g.delta = get_or<double>(j, "delta", 0.0);
  g.epsilon = require<double>(j, "epsilon");
  if (j.contains("c_exponent") && !j["c_exponent"].is_null()) g.c_exponent = require<double>(j, "c_exponent");
  g.seed = get_or<std::uint64_t>(j, "seed", 0);
  const auto mode = get_or<std::string>(j, "mode", "epochs");
  if (mode == "epochs") {
    g.mode = ScheduleMode::Epochs;
  } else if (mode == "single_epoch") {
    g.mode = ScheduleMode::SingleEpoch;
  } else {
    bad("mode must be 'epochs' or 'single_epoch'");
  }
  g.reuse_samples = get_or<bool>(j, "reuse_samples", true);
  const auto source = get_or<std::string>(j, "baseline_source", "last_got_action");
  if (source == "last_got_action") {
    g.baseline_source = BaselineSource::LastGotAction;
  } else if (source == "exploitation") {
    g.baseline_source = BaselineSource::Exploitation;
  } else {
    bad("baseline_source must be 'last_got_action' or 'exploitation'");
  }
  const auto baseline = get_or<std::string>(j, "baseline", "expected");
  if (baseline == "expected") {
    g.baseline = RegretBaseline::Expected;
  } else if (baseline == "sampled") {
    g.baseline = RegretBaseline::Sampled;
  } else {
    bad("baseline must be 'expected' or 'sampled'");
  }
  if (!j.contains("reward")) bad("missing key 'reward'");
  g.reward = reward_from_json(j["reward"]);
  return g;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json nan_to_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool at_optimum(std::span<Player* const> players, const std::vector<int>& a_star) {
  for (std::size_t n = 0; n < players.size(); ++n) {
    const auto& s = static_cast<const GotAgent*>(players[n])->state();
    if (s.mood != Mood::Content || s.baseline != a_star[n]) return false;
  }
  return true;
}

struct Replication {
  std::vector<std::vector<double>> values;  // one vector per series
  SeedSummary summary;
  std::vector<PhaseSegment> segments;       // schedule, exploit runs dropped
};

}  // namespace

const char* output_name(OutputKind kind) {
  for (const auto& [k, name] : kOutputNames) {
    if (k == kind) return name;
  }
  return "?";
}

void ExperimentConfig::validate() const {
  game.validate();
  if (replications < 1) bad("replications must be >= 1");
  if (downsample_stride < 1) bad("downsample_stride must be >= 1");
  if (random_means) {
    if (!(random_means->low > 0.0 && random_means->high >= random_means->low)) {
      bad("random_means needs 0 < low <= high");
    }
    if (game.reward.kind() != RewardKind::IidGaussian) bad("random_means requires gaussian rewards");
  }
}

bool ExperimentConfig::wants(OutputKind kind) const {
  return std::find(outputs.begin(), outputs.end(), kind) != outputs.end();
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  ExperimentConfig c;
  if (!j.contains("game")) bad("missing key 'game'");
  c.game = game_from_json(j["game"]);
  c.replications = get_or<int>(j, "replications", 1);
  c.seed_base = get_or<std::uint64_t>(j, "seed_base", 0);
  c.downsample_stride = get_or<std::int64_t>(j, "downsample_stride", 1);
  if (j.contains("outputs")) {
    c.outputs.clear();
    for (const auto& name : get_or<std::vector<std::string>>(j, "outputs", {})) {
      auto it = std::find_if(std::begin(kOutputNames), std::end(kOutputNames),
                             [&](const auto& p) { return name == p.second; });
      if (it == std::end(kOutputNames)) bad("unknown output '" + name + "'");
      c.outputs.push_back(it->first);
    }
  }
  if (j.contains("random_means") && !j["random_means"].is_null()) {
    const auto& rm = j["random_means"];
    c.random_means = RandomMeans{require<double>(rm, "low"), require<double>(rm, "high")};
  }
  c.validate();
  return c;
}

std::string emit_config(const ExperimentConfig& c) {
  json j;
  j["game"] = game_to_json(c.game);
  j["replications"] = c.replications;
  j["seed_base"] = c.seed_base;
  json outs = json::array();
  for (auto k : c.outputs) outs.push_back(output_name(k));
  j["outputs"] = outs;
  j["downsample_stride"] = c.downsample_stride;
  if (c.random_means) j["random_means"] = {{"low", c.random_means->low}, {"high", c.random_means->high}};
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path + ": " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path + ": " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path);
}

ExperimentConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::istringstream in(text);
  long long n = 0, m = 0;
  if (!(in >> n >> m) || n < 1 || m < 1) throw std::invalid_argument("matrix: first line must be 'N M' with N, M >= 1");
  Eigen::MatrixXd out(n, m);
  for (long long r = 0; r < n; ++r) {
    for (long long c = 0; c < m; ++c) {
      std::string token;
      if (!(in >> token)) {
        throw std::invalid_argument("matrix: expected " + std::to_string(n * m) + " entries, got " +
                                    std::to_string(r * m + c));
      }
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') {
        throw std::invalid_argument("matrix: row " + std::to_string(r + 1) + " has non-numeric entry '" + token + "'");
      }
      out(r, c) = v;
    }
  }
  std::string extra;
  if (in >> extra) throw std::invalid_argument("matrix: trailing data '" + extra + "'");
  return out;
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  try {
    return parse_matrix(read_text_file(path));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

const Series* BatchResult::find(const std::string& name) const {
  for (const auto& s : series) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<std::int64_t> sample_turns(std::int64_t horizon, std::int64_t stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::vector<std::int64_t> turns;
  for (std::int64_t t = stride; t <= horizon; t += stride) turns.push_back(t);
  if (horizon > 0 && horizon % stride != 0) turns.push_back(horizon);
  return turns;
}

GameConfig replication_game(const ExperimentConfig& config, int index) {
  GameConfig g = config.game;
  g.seed = config.seed_base + static_cast<std::uint64_t>(index);
  if (config.random_means) {
    Rng rng = SeedTree(g.seed).stream("means");
    std::uniform_real_distribution<double> draw(config.random_means->low, config.random_means->high);
    Eigen::MatrixXd means(g.players, g.arms);
    for (int n = 0; n < g.players; ++n) {
      for (int i = 0; i < g.arms; ++i) means(n, i) = draw(rng);
    }
    RewardSpec spec = RewardSpec::iid_gaussian(means, g.reward.variance());
    if (g.reward.has_bernstein()) spec.set_bernstein(g.reward.bernstein_sigma(), g.reward.bernstein_b());
    g.reward = std::move(spec);
  }
  return g;
}

unsigned worker_count(int jobs) {
  unsigned n = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GOT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
  }
  return std::max(1U, std::min(n, static_cast<unsigned>(std::max(jobs, 1))));
}

BatchResult run_batch(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const int reps = config.replications;
  const auto turns = sample_turns(config.game.horizon, config.downsample_stride);
  const bool want_regret = config.wants(OutputKind::RegretCurve);
  const bool want_ratio = config.wants(OutputKind::UtilityRatio);
  const bool want_occupancy = config.wants(OutputKind::Occupancy);

  std::vector<Replication> results(static_cast<std::size_t>(reps));
  auto run_one = [&](int i) {
    const GameConfig game = replication_game(config, i);
    const Assignment best = optimal_assignment(game.reward.expected_means());
    const double j1 = best.value;

    auto agents = make_agents(game);
    std::vector<Player*> players;
    for (auto& a : agents) players.push_back(&a);

    std::vector<std::int64_t> occ_hits;
    RunOptions options;
    if (want_occupancy) {
      options.observer = [&](const TurnView& v) {
        if (v.phase != Phase::GameOfThrones) return;
        const auto k = static_cast<std::size_t>(v.epoch);
        if (occ_hits.size() <= k) occ_hits.resize(k + 1, 0);
        if (at_optimum(v.players, best.allocation)) ++occ_hits[k];
      };
    }
    RunTrace trace = run_game(game, players, options);

    Replication rep;
    rep.summary.seed = game.seed;
    rep.summary.j1 = j1;
    rep.summary.a_star = best.allocation;
    const auto regret = regret_curve(trace, j1);
    const auto ratio = j1 > 0.0 ? utility_ratio_curve(trace, j1) : std::vector<double>(regret.size(), 0.0);
    rep.summary.final_regret = regret.empty() ? 0.0 : regret.back();
    rep.summary.final_ratio = ratio.empty() ? 0.0 : ratio.back();
    rep.summary.exploit_accuracy = exploitation_accuracy(trace, best.allocation, 3);

    auto sample = [&](const std::vector<double>& curve) {
      std::vector<double> out;
      out.reserve(turns.size());
      for (auto t : turns) out.push_back(curve[static_cast<std::size_t>(t - 1)]);
      return out;
    };
    if (want_regret) rep.values.push_back(sample(regret));
    if (want_ratio) rep.values.push_back(sample(ratio));
    if (want_occupancy) {
      std::vector<double> occ;
      for (const auto& seg : trace.segments) {
        if (seg.phase != Phase::GameOfThrones) continue;
        const auto k = static_cast<std::size_t>(seg.epoch);
        const auto hits = k < occ_hits.size() ? occ_hits[k] : 0;
        occ.push_back(static_cast<double>(hits) / static_cast<double>(seg.length));
      }
      rep.values.push_back(std::move(occ));
    }
    for (auto& seg : trace.segments) {
      seg.exploit_runs.clear();
      rep.segments.push_back(std::move(seg));
    }
    results[static_cast<std::size_t>(i)] = std::move(rep);
  };

  const unsigned workers = threads == 0 ? worker_count(reps) : std::min<unsigned>(threads, static_cast<unsigned>(reps));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  int failed_index = std::numeric_limits<int>::max();
  std::exception_ptr failure;
  auto worker = [&]() {
    for (int i = next++; i < reps; i = next++) {
      try {
        run_one(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        next = reps;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication " + std::to_string(failed_index) + " (seed " +
                               std::to_string(config.seed_base + static_cast<std::uint64_t>(failed_index)) +
                               ") failed: " + e.what());
    }
  }

  // Reduce in replication order.
  BatchResult out;
  const auto& schedule = results.front().segments;
  auto locate = [&](std::int64_t turn) -> const PhaseSegment& {
    auto it = std::upper_bound(schedule.begin(), schedule.end(), turn,
                               [](std::int64_t t, const PhaseSegment& s) { return t < s.begin; });
    return *std::prev(it);
  };
  auto reduce = [&](std::size_t slot, const std::string& name, const std::vector<std::pair<std::int64_t, const PhaseSegment*>>& points) {
    Series s;
    s.name = name;
    for (std::size_t p = 0; p < points.size(); ++p) {
      double sum = 0.0;
      for (const auto& r : results) sum += r.values[slot][p];
      const double mean = sum / reps;
      double ss = 0.0;
      for (const auto& r : results) ss += (r.values[slot][p] - mean) * (r.values[slot][p] - mean);
      const double se = reps > 1 ? std::sqrt(ss / (reps - 1) / reps) : 0.0;
      s.rows.push_back({points[p].first, points[p].second->epoch, points[p].second->phase, mean, se, reps});
    }
    out.series.push_back(std::move(s));
  };

  std::vector<std::pair<std::int64_t, const PhaseSegment*>> curve_points;
  for (auto t : turns) curve_points.push_back({t, &locate(t - 1)});
  std::size_t slot = 0;
  if (want_regret) reduce(slot++, "regret_curve", curve_points);
  if (want_ratio) reduce(slot++, "utility_ratio", curve_points);
  if (want_occupancy) {
    std::vector<std::pair<std::int64_t, const PhaseSegment*>> occ_points;
    for (const auto& seg : schedule) {
      if (seg.phase == Phase::GameOfThrones) occ_points.push_back({seg.begin + seg.length, &seg});
    }
    reduce(slot++, "occupancy", occ_points);
  }
  for (auto& r : results) out.seeds.push_back(std::move(r.summary));
  return out;
}

std::string format_csv(const Series& series) {
  std::string text = "turn,epoch,phase,mean_value,stderr,n_seeds\n";
  for (const auto& r : series.rows) {
    text += std::to_string(r.turn) + ',' + std::to_string(r.epoch) + ',' + phase_name(r.phase) + ',' +
            format_double(r.mean) + ',' + format_double(r.stderr_) + ',' + std::to_string(r.n_seeds) + '\n';
  }
  return text;
}

void emit_csv(const Series& series, const std::string& path) { write_text_file(path, format_csv(series)); }

void emit_seed_summaries(const std::vector<SeedSummary>& seeds, const std::string& path) {
  std::string text = "seed,final_regret,final_ratio,exploit_accuracy,j1,a_star\n";
  for (const auto& s : seeds) {
    std::string alloc;
    for (std::size_t n = 0; n < s.a_star.size(); ++n) alloc += (n ? " " : "") + std::to_string(s.a_star[n]);
    text += std::to_string(s.seed) + ',' + format_double(s.final_regret) + ',' + format_double(s.final_ratio) + ',' +
            format_double(s.exploit_accuracy) + ',' + format_double(s.j1) + ',' + alloc + '\n';
  }
  write_text_file(path, text);
}

std::string chain_report(const Eigen::MatrixXd& utilities, double c, const std::vector<double>& epsilons,
                         double mixing_accuracy) {
  json report;
  report["players"] = utilities.rows();
  report["arms"] = utilities.cols();
  report["c"] = c;
  report["c_lower_bound"] = c_lower_bound(utilities);
  try {
    report["alpha"] = utility_gap_alpha(utilities);
    report["epsilon_threshold"] = epsilon_threshold(utilities, c);
  } catch (const std::invalid_argument& e) {
    report["epsilon_threshold"] = nullptr;
    report["epsilon_threshold_error"] = e.what();
  }
  json rows = json::array();
  for (double eps : epsilons) {
    json row;
    row["epsilon"] = eps;
    const ChainModel model = build_chain(utilities, eps, c);
    const auto opt = pi_optimal(model);
    row["states"] = model.codec.size();
    row["z_star"] = opt.index;
    row["pi_z_star"] = opt.mass;
    row["p_stay_z_star"] = model.transition(static_cast<Eigen::Index>(opt.index), static_cast<Eigen::Index>(opt.index));
    try {
      row["mixing_time"] = mixing_time(model.transition, mixing_accuracy);
    } catch (const std::runtime_error& e) {
      row["mixing_time"] = nullptr;
      row["mixing_error"] = e.what();
    }
    rows.push_back(std::move(row));
  }
  report["mixing_accuracy"] = mixing_accuracy;
  report["sweep"] = std::move(rows);
  return report.dump(2) + "\n";
}

std::string bounds_report(const GameConfig& game) {
  game.validate();
  const Eigen::MatrixXd& means = game.reward.expected_means();
  const AssignmentResult a = solve_assignment(means);

  ExplorationBoundParams p;
  p.players = game.players;
  p.arms = game.arms;
  p.c1 = game.c1;
  p.delta = game.delta;
  p.j1 = a.j1;
  p.j2 = a.j2;
  if (game.reward.has_bernstein()) {
    const double s = game.reward.bernstein_sigma().maxCoeff();
    p.variance_max = s * s;
    p.b_max = game.reward.bernstein_b().maxCoeff();
  } else if (game.reward.kind() == RewardKind::IidGaussian && game.reward.variance() > 0.0) {
    p.variance_max = game.reward.variance();
    p.b_max = std::sqrt(game.reward.variance());
  } else {
    throw std::invalid_argument("bounds need Bernstein parameters (reward.bernstein) for this reward kind");
  }

  json report;
  report["allocation"] = a.allocation;
  report["j1"] = a.j1;
  report["j2"] = a.j2;
  report["margin"] = a.margin;
  report["c"] = game.resolved_c();
  report["variance_max"] = p.variance_max;
  report["b_max"] = p.b_max;
  json epochs = json::array();
  std::int64_t t = 0;
  for (int k = 1; t < game.horizon; ++k) {
    const PhaseLengths lens = phase_lengths(k, game);
    if (lens.explore == 0) break;
    const ExplorationBound b = exploration_bound(p, k);
    epochs.push_back({{"k", k},
                      {"explore_turns", lens.explore},
                      {"w", b.w},
                      {"p_ek", nan_to_null(b.p_ek)},
                      {"p_union", nan_to_null(b.p_union)},
                      {"vacuous", b.vacuous}});
    for (auto len : {lens.explore, lens.got, lens.exploit}) {
      t = len > game.horizon - t ? game.horizon : t + len;
    }
  }
  report["epochs"] = std::move(epochs);
  return report.dump(2) + "\n";
}

}  // namespace got

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "got/assignment_oracle.hpp"
#include "got/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
  std::optional<std::int64_t> stride;
  std::string out;
};

void apply(got::ExperimentConfig& config, const Flags& f) {
  if (f.seed) config.seed_base = *f.seed;
  if (f.replications) config.replications = *f.replications;
  if (f.stride) config.downsample_stride = *f.stride;
  config.validate();
}

std::string out_dir(const Flags& f, const std::string& fallback) {
  const std::string dir = f.out.empty() ? fallback : f.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

void write_batch(const got::ExperimentConfig& config, const got::BatchResult& result, const std::string& dir) {
  for (const auto& s : result.series) got::emit_csv(s, (fs::path(dir) / (s.name + ".csv")).string());
  got::emit_seed_summaries(result.seeds, (fs::path(dir) / "seeds.csv").string());
  if (config.wants(got::OutputKind::ChainReport)) {
    const auto game = got::replication_game(config, 0);
    got::write_text_file((fs::path(dir) / "chain_report.json").string(),
                         got::chain_report(game.reward.expected_means(), game.resolved_c(), {game.epsilon}));
  }
  double regret = 0.0, ratio = 0.0;
  for (const auto& s : result.seeds) {
    regret += s.final_regret;
    ratio += s.final_ratio;
  }
  const auto n = static_cast<double>(result.seeds.size());
  std::printf("replications=%zu final_regret_mean=%.6g final_ratio_mean=%.6g out=%s\n", result.seeds.size(),
              regret / n, ratio / n, dir.c_str());
}

int cmd_batch(const std::string& path, const Flags& flags, bool single) {
  auto config = got::load_config(path);
  if (single) config.replications = 1;
  apply(config, flags);
  if (single) config.replications = 1;
  const auto result = got::run_batch(config);
  write_batch(config, result, out_dir(flags, "out"));
  return 0;
}

int cmd_assign(const std::string& path) {
  const Eigen::MatrixXd means = got::load_matrix(path);
  const got::Assignment best = got::optimal_assignment(means);
  nlohmann::json j;
  j["allocation"] = best.allocation;
  j["j1"] = best.value;
  j["near_tie"] = best.near_tie;
  if (means.rows() <= 9) {
    try {
      const double j2 = got::second_best_objective(means);
      j["j2"] = j2;
      j["margin"] = (best.value - j2) / (2.0 * static_cast<double>(means.rows()));
    } catch (const got::DegenerateInstance&) {
      j["j2"] = nullptr;
    } catch (const std::invalid_argument&) {
      j["j2"] = nullptr;
    }
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_analyze_chain(const std::string& path, const Flags& flags) {
  const auto text = got::read_text_file(path);
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument(path + ": not a JSON object");
  std::string report;
  const double accuracy = j.value("mixing_accuracy", 0.25);
  if (j.contains("utilities")) {
    const auto rows = j["utilities"].get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::invalid_argument(path + ": utilities is empty");
    Eigen::MatrixXd u(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows[0].size()) throw std::invalid_argument(path + ": ragged utilities");
      for (std::size_t c = 0; c < rows[r].size(); ++c) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    if (!j.contains("c")) throw std::invalid_argument(path + ": missing key 'c'");
    std::vector<double> eps = j.contains("epsilons") ? j["epsilons"].get<std::vector<double>>()
                                                     : std::vector<double>{j.at("epsilon").get<double>()};
    report = got::chain_report(u, j["c"].get<double>(), eps, accuracy);
  } else {
    auto config = got::parse_config(text);
    apply(config, flags);
    const auto game = got::replication_game(config, 0);
    std::vector<double> eps = j.contains("epsilons") ? j["epsilons"].get<std::vector<double>>()
                                                     : std::vector<double>{game.epsilon};
    report = got::chain_report(game.reward.expected_means(), game.resolved_c(), eps, accuracy);
  }
  std::cout << report;
  if (!flags.out.empty()) got::write_text_file((fs::path(out_dir(flags, "")) / "chain_report.json").string(), report);
  return 0;
}

int cmd_bounds(const std::string& path, const Flags& flags) {
  auto config = got::load_config(path);
  apply(config, flags);
  const std::string report = got::bounds_report(got::replication_game(config, 0));
  std::cout << report;
  if (!flags.out.empty()) got::write_text_file((fs::path(out_dir(flags, "")) / "bounds.json").string(), report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game of Thrones multi-player bandit simulator"};
  app.require_subcommand(1);
  Flags flags;
  std::string target;

  auto add_common = [&](CLI::App* sub, bool batch_flags) {
    sub->add_option("--seed", flags.seed, "base seed (replication i uses seed + i)");
    sub->add_option("--out", flags.out, "output directory");
    if (batch_flags) {
      sub->add_option("--replications", flags.replications, "number of replications")->check(CLI::PositiveNumber);
      sub->add_option("--stride", flags.stride, "turns per emitted row")->check(CLI::PositiveNumber);
    }
  };

  auto* run = app.add_subcommand("run", "single run, CSV series");
  run->add_option("cfg", target, "config file")->required();
  add_common(run, false);
  run->add_option("--stride", flags.stride, "turns per emitted row")->check(CLI::PositiveNumber);

  auto* batch = app.add_subcommand("batch", "seed batch, mean and stderr series");
  batch->add_option("cfg", target, "config file")->required();
  add_common(batch, true);

  auto* assign = app.add_subcommand("assign", "optimal allocation of a means matrix");
  assign->add_option("matrix-file", target, "'N M' then N rows of M reals")->required();

  auto* chain = app.add_subcommand("analyze-chain", "exact GoT chain: stationary mass of z*, mixing time");
  chain->add_option("cfg", target, "config file")->required();
  add_common(chain, false);

  auto* bounds = app.add_subcommand("bounds", "assignment margin and exploration bounds");
  bounds->add_option("cfg", target, "config file")->required();
  add_common(bounds, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (run->parsed()) return cmd_batch(target, flags, true);
    if (batch->parsed()) return cmd_batch(target, flags, false);
    if (assign->parsed()) return cmd_assign(target);
    if (chain->parsed()) return cmd_analyze_chain(target, flags);
    if (bounds->parsed()) return cmd_bounds(target, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

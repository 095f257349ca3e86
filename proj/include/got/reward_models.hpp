#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "got/rng.hpp"

namespace got {

/// Arms are 0-based everywhere inside the library.
using Profile = std::vector<int>;

enum class RewardKind { IidGaussian, IidCustomTable, Markovian };

/// Rested reward chain of one (player, arm) pair.
struct MarkovArm {
  std::vector<double> states;   // reward value of each chain state, all > 0
  Eigen::MatrixXd transition;   // row-stochastic, ergodic

  bool operator==(const MarkovArm& other) const {
    return states == other.states && transition.rows() == other.transition.rows() &&
           transition.cols() == other.transition.cols() && transition == other.transition;
  }
};

/// Declarative, immutable description of every player's reward process.
///
/// Construct through the named factories; each validates its invariants and
/// throws std::invalid_argument on violation.
class RewardSpec {
 public:
  /// r = mu + N(0, variance). Means must be strictly positive.
  static RewardSpec iid_gaussian(Eigen::MatrixXd means, double variance);

  /// Per-(player, arm) inverse-CDF table: tables[n][i] holds K+1 >= 2
  /// non-decreasing quantiles at probabilities 0, 1/K, ..., 1, linearly
  /// interpolated when sampling.
  static RewardSpec custom_table(std::vector<std::vector<std::vector<double>>> tables);

  /// Rested Markovian rewards; chains[n][i] must be ergodic with positive states.
  static RewardSpec markovian(std::vector<std::vector<MarkovArm>> chains);

  RewardKind kind() const { return kind_; }
  int players() const { return static_cast<int>(means_.rows()); }
  int arms() const { return static_cast<int>(means_.cols()); }

  /// True for kinds whose collision signal must be read from the explicit
  /// indicator (a zero reward is not a reliable sentinel).
  bool explicit_collision_signal() const { return kind_ == RewardKind::Markovian; }

  /// Stationary expectation of arm i for player n.
  double expected_reward(int player, int arm) const { return means_(player, arm); }
  const Eigen::MatrixXd& expected_means() const { return means_; }

  double variance() const { return variance_; }
  const std::vector<std::vector<std::vector<double>>>& tables() const { return tables_; }
  const std::vector<std::vector<MarkovArm>>& chains() const { return chains_; }

  /// Bernstein parameters (sigma_{n,i}, b_{n,i}); only consumed by bound
  /// evaluation. Defaults: sigma = sqrt(variance), b = sigma for Gaussians.
  void set_bernstein(Eigen::MatrixXd sigma, Eigen::MatrixXd b);
  bool has_bernstein() const { return bernstein_sigma_.size() > 0; }
  const Eigen::MatrixXd& bernstein_sigma() const { return bernstein_sigma_; }
  const Eigen::MatrixXd& bernstein_b() const { return bernstein_b_; }

  bool operator==(const RewardSpec& other) const;

 private:
  RewardSpec() = default;

  RewardKind kind_ = RewardKind::IidGaussian;
  Eigen::MatrixXd means_;
  double variance_ = 0.0;
  std::vector<std::vector<std::vector<double>>> tables_;
  std::vector<std::vector<MarkovArm>> chains_;
  Eigen::MatrixXd bernstein_sigma_;
  Eigen::MatrixXd bernstein_b_;
};

/// Mutable per-run state of the reward processes.
struct RewardProcessState {
  std::vector<std::vector<int>> markov_current;       // [n][i], Markovian only
  std::vector<std::vector<std::int64_t>> visits;      // collision-free pulls
  std::normal_distribution<double> gauss{0.0, 1.0};   // carries the polar-method spare
};

/// Fresh state; Markovian chains start from a draw of their stationary law.
RewardProcessState initial_state(const RewardSpec& spec, Rng& rng);

/// Stationary expectation of a single reward chain.
double markov_expectation(const MarkovArm& arm);

/// 0 if two or more players picked `arm` in `profile`, else 1.
int no_collision_indicator(std::span<const int> profile, int arm);

/// Allocation-free sampler used by the engine's turn loop. `utility` and
/// `indicator` must have one slot per player.
void sample_rewards_into(const RewardSpec& spec, RewardProcessState& state,
                         std::span<const int> profile, Rng& rng,
                         std::span<double> utility, std::span<std::uint8_t> indicator);

struct RewardDraw {
  std::vector<double> utility;
  std::vector<std::uint8_t> indicator;
};

RewardDraw sample_rewards(const RewardSpec& spec, RewardProcessState& state,
                          std::span<const int> profile, Rng& rng);

/// One reward draw of arm i for player n, ignoring collisions. Markovian
/// arms advance their chain.
double draw_reward(const RewardSpec& spec, RewardProcessState& state, int player, int arm,
                   Rng& rng);

}  // namespace got

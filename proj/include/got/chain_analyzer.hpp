#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "got/got_agent.hpp"

namespace got {

/// A point of Z = prod_n (arms x {C, D}).
struct JointChainState {
  std::vector<int> baselines;
  std::vector<Mood> moods;

  bool operator==(const JointChainState&) const = default;
};

/// Player-major mixed-radix encoding of Z. Player 0 is the most significant
/// digit; each digit is 2 * arm + mood with Content = 0, Discontent = 1.
class StateCodec {
 public:
  StateCodec(int players, int arms);

  std::size_t size() const { return size_; }
  int players() const { return players_; }
  int arms() const { return arms_; }

  std::size_t encode(const JointChainState& z) const;
  JointChainState decode(std::size_t index) const;

 private:
  int players_;
  int arms_;
  std::size_t size_;
};

inline constexpr std::size_t kChainStateBudget = 20000;
inline constexpr std::size_t kTreeFormulaBudget = 64;

/// Exact transition matrix of the GoT dynamics over fixed utilities.
struct ChainModel {
  Eigen::MatrixXd utilities;  // N x M, >= 0; u_n(a) = utilities(n, a_n) without collision
  double epsilon = 0.0;
  double c = 0.0;
  StateCodec codec{1, 1};
  Eigen::MatrixXd transition;
};

/// Builds P^epsilon by enumerating every joint action of every state.
/// Throws std::invalid_argument if (2M)^N exceeds kChainStateBudget.
ChainModel build_chain(const Eigen::MatrixXd& utilities, double epsilon, double c);

/// Stationary law by dense linear solve; checks the residual.
Eigen::VectorXd stationary_linear(const Eigen::MatrixXd& transition);
Eigen::VectorXd stationary_linear(const ChainModel& model);

/// Stationary law from rooted spanning-tree weights: Q(z) is the (z, z)
/// cofactor of I - P (matrix-tree theorem), pi = Q / sum Q.
/// Limited to kTreeFormulaBudget states.
Eigen::VectorXd stationary_tree_formula(const Eigen::MatrixXd& transition);
Eigen::VectorXd stationary_tree_formula(const ChainModel& model);

struct OptimalStateMass {
  std::size_t index = 0;
  JointChainState state;
  double mass = 0.0;
};

/// Stationary mass of z* = [a*, all content], a* the unique optimal
/// allocation of the model's utilities. Throws if a* is not unique.
OptimalStateMass pi_optimal(const ChainModel& model);

/// Smallest t with max_x TV(P^t(x, .), pi) <= accuracy.
/// Throws std::runtime_error if t would exceed `cap`.
std::int64_t mixing_time(const Eigen::MatrixXd& transition, double accuracy, std::int64_t cap = 1'000'000);

/// Smallest positive gap u_{n,max} - u_n(a) over players and profiles.
double utility_gap_alpha(const Eigen::MatrixXd& utilities);

/// Sum_n u_{n,max} - J1: the exponent c must exceed this.
double c_lower_bound(const Eigen::MatrixXd& utilities);

/// Sufficient exploration rate for pi_{z*} > 1/2 from the alpha and state
/// count conditions. Throws std::invalid_argument if c is too small.
double epsilon_threshold(const Eigen::MatrixXd& utilities, double c);
double epsilon_threshold(int players, int arms, double alpha, double c);

struct ExplorationBoundParams {
  int players = 1;
  int arms = 1;
  double c1 = 1.0;
  double delta = 0.0;
  double variance_max = 0.0;  // sigma_max^2
  double b_max = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
};

/// Raw exploration-failure bounds for epoch k; probabilities may exceed 1,
/// in which case `vacuous` is set.
struct ExplorationBound {
  double w = 0.0;
  double p_ek = 0.0;      // single exploration phase
  double p_union = 0.0;   // any of the last floor(k/2)+1 phases
  bool vacuous = false;

  double p_ek_clamped() const { return p_ek < 1.0 ? p_ek : 1.0; }
  double p_union_clamped() const { return p_union < 1.0 ? p_union : 1.0; }
};

ExplorationBound exploration_bound(const ExplorationBoundParams& params, int k);

}  // namespace got

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "got/rng.hpp"

namespace got {

/// Collision-free allocation of N players to M >= N arms (0-based arms).
struct Assignment {
  std::vector<int> allocation;
  double value = 0.0;
  /// Another allocation attains the optimum within the solver tolerance.
  bool near_tie = false;
};

struct AssignmentResult {
  std::vector<int> allocation;
  double j1 = 0.0;
  double j2 = 0.0;
  double margin = 0.0;  // (j1 - j2) / (2N)
};

/// Thrown when every profile attains the same objective, so no second-best
/// value exists.
class DegenerateInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kAssignmentTieTolerance = 1e-12;

/// Sum of means over players with colliding players zeroed.
double profile_objective(const Eigen::MatrixXd& means, std::span<const int> profile);

/// Maximum-weight assignment by the shortest-augmenting-path Hungarian
/// method, O(N^2 M). Near-ties are resolved toward the lexicographically
/// smallest allocation.
Assignment optimal_assignment(const Eigen::MatrixXd& means);

/// Exhaustive search over injective allocations (N <= 9); same tie rule.
Assignment brute_force_assignment(const Eigen::MatrixXd& means);

/// Largest objective strictly below J1 over all M^N profiles, collisions
/// zeroed. Throws DegenerateInstance if all profiles tie.
double second_best_objective(const Eigen::MatrixXd& means);

/// Allocation, J1, J2 and the perturbation margin in one call.
AssignmentResult solve_assignment(const Eigen::MatrixXd& means);

/// Re-solves under `trials` i.i.d. entrywise perturbations uniform in
/// (-delta, delta); true iff the optimal allocation never moves.
bool perturbation_invariance_check(const Eigen::MatrixXd& means, double delta, int trials, Rng& rng);

/// True iff exactly one injective allocation is within `tolerance` of the
/// optimum.
bool uniqueness_check(const Eigen::MatrixXd& means, double tolerance);

}  // namespace got

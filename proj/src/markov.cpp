#include "got/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace got::markov {

namespace {

std::vector<bool> reachable_from(const Eigen::MatrixXd& p, Eigen::Index start, bool reverse) {
  const Eigen::Index n = p.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<Eigen::Index> frontier;
  seen[static_cast<std::size_t>(start)] = true;
  frontier.push(start);
  while (!frontier.empty()) {
    const Eigen::Index u = frontier.front();
    frontier.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      const double w = reverse ? p(v, u) : p(u, v);
      if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        frontier.push(v);
      }
    }
  }
  return seen;
}

bool all_true(const std::vector<bool>& v) {
  return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

void require_square(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw std::invalid_argument("transition matrix must be square and non-empty");
  }
}

}  // namespace

double row_sum_error(const Eigen::MatrixXd& transition) {
  if (transition.rows() == 0) return 0.0;
  return (transition.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

bool is_irreducible(const Eigen::MatrixXd& transition) {
  require_square(transition);
  return all_true(reachable_from(transition, 0, false)) &&
         all_true(reachable_from(transition, 0, true));
}

int period(const Eigen::MatrixXd& transition) {
  require_square(transition);
  const Eigen::Index n = transition.rows();
  std::vector<long> level(static_cast<std::size_t>(n), -1);
  std::queue<Eigen::Index> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const Eigen::Index u = frontier.front();
    frontier.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      if (transition(u, v) > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        frontier.push(v);
      }
    }
  }
  long g = 0;
  for (Eigen::Index u = 0; u < n; ++u) {
    if (level[static_cast<std::size_t>(u)] < 0) continue;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (transition(u, v) > 0.0 && level[static_cast<std::size_t>(v)] >= 0) {
        g = std::gcd(g, std::labs(level[static_cast<std::size_t>(u)] + 1 -
                                  level[static_cast<std::size_t>(v)]));
      }
    }
  }
  return static_cast<int>(g == 0 ? 1 : g);
}

bool is_unichain(const Eigen::MatrixXd& transition) {
  require_square(transition);
  const Eigen::Index n = transition.rows();
  // A closed class exists downstream of state 0; pick any state reachable from
  // 0 whose forward closure reaches back to it. Unichain iff that state is
  // reachable from every state.
  const auto fwd0 = reachable_from(transition, 0, false);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (!fwd0[static_cast<std::size_t>(r)]) continue;
    const auto fwd = reachable_from(transition, r, false);
    const auto back = reachable_from(transition, r, true);
    bool closed = true;
    for (Eigen::Index v = 0; v < n && closed; ++v) {
      if (fwd[static_cast<std::size_t>(v)] && !back[static_cast<std::size_t>(v)]) closed = false;
    }
    if (closed) return all_true(back);
  }
  return false;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& transition) {
  require_square(transition);
  const Eigen::Index n = transition.rows();
  Eigen::MatrixXd a = transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw std::runtime_error("stationary system is singular: chain is not unichain");
  }
  Eigen::VectorXd pi = lu.solve(rhs);
  // One step of iterative refinement keeps the residual near machine precision
  // even when small exploration rates make the system badly conditioned.
  pi += lu.solve(rhs - a * pi);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < 0.0 && pi(i) > -1e-13) pi(i) = 0.0;
  }
  pi /= pi.sum();
  return pi;
}

double stationary_residual(const Eigen::MatrixXd& transition, const Eigen::VectorXd& pi) {
  return (transition.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

}  // namespace got::markov

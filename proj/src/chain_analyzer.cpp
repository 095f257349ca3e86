#include "got/chain_analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "got/assignment_oracle.hpp"
#include "got/markov.hpp"

namespace got {

StateCodec::StateCodec(int players, int arms) : players_(players), arms_(arms), size_(1) {
  if (players < 1 || arms < 1) throw std::invalid_argument("state codec needs N, M >= 1");
  const auto radix = static_cast<std::size_t>(2 * arms);
  for (int n = 0; n < players; ++n) {
    if (size_ > std::numeric_limits<std::size_t>::max() / radix) {
      throw std::invalid_argument("joint state space too large to index");
    }
    size_ *= radix;
  }
}

std::size_t StateCodec::encode(const JointChainState& z) const {
  std::size_t index = 0;
  for (int n = 0; n < players_; ++n) {
    const auto digit = static_cast<std::size_t>(2 * z.baselines[static_cast<std::size_t>(n)] +
                                                static_cast<int>(z.moods[static_cast<std::size_t>(n)]));
    index = index * static_cast<std::size_t>(2 * arms_) + digit;
  }
  return index;
}

JointChainState StateCodec::decode(std::size_t index) const {
  JointChainState z;
  z.baselines.assign(static_cast<std::size_t>(players_), 0);
  z.moods.assign(static_cast<std::size_t>(players_), Mood::Content);
  for (int n = players_ - 1; n >= 0; --n) {
    const auto digit = static_cast<int>(index % static_cast<std::size_t>(2 * arms_));
    index /= static_cast<std::size_t>(2 * arms_);
    z.baselines[static_cast<std::size_t>(n)] = digit / 2;
    z.moods[static_cast<std::size_t>(n)] = static_cast<Mood>(digit % 2);
  }
  return z;
}

ChainModel build_chain(const Eigen::MatrixXd& utilities, double epsilon, double c) {
  const int players = static_cast<int>(utilities.rows());
  const int arms = static_cast<int>(utilities.cols());
  if (players < 1 || arms < players) throw std::invalid_argument("chain needs 1 <= N <= M");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  if (!utilities.allFinite() || (utilities.array() < 0.0).any()) {
    throw std::invalid_argument("utilities must be finite and >= 0");
  }
  const double states_needed = std::pow(2.0 * arms, players);
  if (states_needed > static_cast<double>(kChainStateBudget)) {
    throw std::invalid_argument("chain needs " + std::to_string(static_cast<long long>(states_needed)) +
                                " states; budget is " + std::to_string(kChainStateBudget));
  }

  ChainModel model;
  model.utilities = utilities;
  model.epsilon = epsilon;
  model.c = c;
  model.codec = StateCodec(players, arms);
  const std::size_t size = model.codec.size();
  model.transition = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));

  const auto np = static_cast<std::size_t>(players);
  std::vector<double> u_max(np, 0.0);
  for (std::size_t n = 0; n < np; ++n) {
    u_max[n] = utilities.row(static_cast<Eigen::Index>(n)).maxCoeff();
    if (!(u_max[n] > 0.0)) throw std::invalid_argument("every player needs a positive utility");
  }
  const double leave = std::pow(epsilon, c);
  const std::size_t radix = static_cast<std::size_t>(2 * arms);

  std::vector<std::vector<double>> act_p(np, std::vector<double>(static_cast<std::size_t>(arms)));
  std::vector<int> action(np);
  std::vector<double> p_content(np);
  std::vector<bool> forced(np);

  for (std::size_t s = 0; s < size; ++s) {
    const JointChainState z = model.codec.decode(s);
    for (std::size_t n = 0; n < np; ++n) {
      auto& p = act_p[n];
      if (z.moods[n] == Mood::Discontent) {
        std::fill(p.begin(), p.end(), 1.0 / arms);
      } else if (arms == 1) {
        p[0] = 1.0;
      } else {
        std::fill(p.begin(), p.end(), leave / (arms - 1));
        p[static_cast<std::size_t>(z.baselines[n])] = 1.0 - leave;
      }
    }

    std::fill(action.begin(), action.end(), 0);
    while (true) {
      double p_action = 1.0;
      for (std::size_t n = 0; n < np; ++n) p_action *= act_p[n][static_cast<std::size_t>(action[n])];
      if (p_action > 0.0) {
        for (std::size_t n = 0; n < np; ++n) {
          bool alone = true;
          for (std::size_t m = 0; m < np && alone; ++m) {
            if (m != n && action[m] == action[n]) alone = false;
          }
          const double u = alone ? utilities(static_cast<Eigen::Index>(n), action[n]) : 0.0;
          forced[n] = z.moods[n] == Mood::Content && action[n] == z.baselines[n] && u > 0.0;
          p_content[n] = u > 0.0 ? (u / u_max[n]) * std::pow(epsilon, u_max[n] - u) : 0.0;
        }
        // Independent mood draws: enumerate the 2^N outcomes.
        for (std::size_t mask = 0; mask < (std::size_t{1} << np); ++mask) {
          double p = p_action;
          std::size_t target = 0;
          for (std::size_t n = 0; n < np && p > 0.0; ++n) {
            const bool discontent = (mask >> n) & 1U;
            if (forced[n]) {
              if (discontent) p = 0.0;
            } else {
              p *= discontent ? 1.0 - p_content[n] : p_content[n];
            }
            target = target * radix + static_cast<std::size_t>(2 * action[n] + (discontent ? 1 : 0));
          }
          if (p > 0.0) model.transition(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(target)) += p;
        }
      }
      int n = players - 1;
      while (n >= 0 && ++action[static_cast<std::size_t>(n)] == arms) {
        action[static_cast<std::size_t>(n)] = 0;
        --n;
      }
      if (n < 0) break;
    }
  }
  return model;
}

Eigen::VectorXd stationary_linear(const Eigen::MatrixXd& transition) {
  const Eigen::VectorXd pi = markov::stationary_distribution(transition);
  const double residual = markov::stationary_residual(transition, pi);
  if (!(residual <= 1e-12)) {
    throw std::runtime_error("stationary solve residual " + std::to_string(residual) + " exceeds 1e-12");
  }
  return pi;
}

Eigen::VectorXd stationary_linear(const ChainModel& model) { return stationary_linear(model.transition); }

Eigen::VectorXd stationary_tree_formula(const Eigen::MatrixXd& transition) {
  const Eigen::Index size = transition.rows();
  if (size != transition.cols() || size == 0) throw std::invalid_argument("transition must be square");
  if (static_cast<std::size_t>(size) > kTreeFormulaBudget) {
    throw std::invalid_argument("tree formula limited to " + std::to_string(kTreeFormulaBudget) + " states");
  }
  if (size == 1) return Eigen::VectorXd::Ones(1);
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd::Identity(size, size) - transition;
  Eigen::VectorXd q(size);
  Eigen::MatrixXd minor(size - 1, size - 1);
  for (Eigen::Index z = 0; z < size; ++z) {
    for (Eigen::Index r = 0, rr = 0; r < size; ++r) {
      if (r == z) continue;
      for (Eigen::Index col = 0, cc = 0; col < size; ++col) {
        if (col == z) continue;
        minor(rr, cc++) = laplacian(r, col);
      }
      ++rr;
    }
    q(z) = minor.partialPivLu().determinant();
  }
  const double total = q.sum();
  if (!(total > 0.0)) throw std::runtime_error("tree weights vanish: chain has no spanning in-tree");
  return q / total;
}

Eigen::VectorXd stationary_tree_formula(const ChainModel& model) {
  return stationary_tree_formula(model.transition);
}

OptimalStateMass pi_optimal(const ChainModel& model) {
  const Assignment best = optimal_assignment(model.utilities);
  if (best.near_tie) throw std::invalid_argument("optimal allocation of the utilities is not unique");
  OptimalStateMass out;
  out.state.baselines = best.allocation;
  out.state.moods.assign(best.allocation.size(), Mood::Content);
  out.index = model.codec.encode(out.state);
  out.mass = stationary_linear(model)(static_cast<Eigen::Index>(out.index));
  return out;
}

namespace {

double worst_tv(const Eigen::MatrixXd& power, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < power.rows(); ++x) {
    worst = std::max(worst, 0.5 * (power.row(x).transpose() - pi).cwiseAbs().sum());
  }
  return worst;
}

}  // namespace

std::int64_t mixing_time(const Eigen::MatrixXd& transition, double accuracy, std::int64_t cap) {
  if (!(accuracy > 0.0)) throw std::invalid_argument("mixing accuracy must be > 0");
  const Eigen::VectorXd pi = stationary_linear(transition);
  const Eigen::Index size = transition.rows();
  if (worst_tv(Eigen::MatrixXd::Identity(size, size), pi) <= accuracy) return 0;

  // powers[j] = P^(2^j); d(t) is non-increasing, so double until it drops
  // below the accuracy, then binary-search the last doubling interval.
  std::vector<Eigen::MatrixXd> powers{transition};
  double last = worst_tv(powers.back(), pi);
  while (last > accuracy) {
    if ((std::int64_t{1} << (powers.size() - 1)) > cap) {
      throw std::runtime_error("mixing time exceeds cap " + std::to_string(cap) + "; last distance " +
                               std::to_string(last));
    }
    powers.push_back(powers.back() * powers.back());
    last = worst_tv(powers.back(), pi);
  }
  const std::size_t j = powers.size() - 1;
  if (j == 0) return 1;
  std::int64_t below = std::int64_t{1} << (j - 1);  // known to exceed the accuracy
  Eigen::MatrixXd current = powers[j - 1];
  for (std::size_t b = j - 1; b-- > 0;) {
    Eigen::MatrixXd candidate = current * powers[b];
    if (worst_tv(candidate, pi) > accuracy) {
      current = std::move(candidate);
      below += std::int64_t{1} << b;
    }
  }
  if (below + 1 > cap) {
    throw std::runtime_error("mixing time exceeds cap " + std::to_string(cap));
  }
  return below + 1;
}

double utility_gap_alpha(const Eigen::MatrixXd& utilities) {
  const auto players = utilities.rows();
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 0; n < players; ++n) {
    const double top = utilities.row(n).maxCoeff();
    auto consider = [&](double v) {
      if (v < top) alpha = std::min(alpha, top - v);
    };
    for (Eigen::Index i = 0; i < utilities.cols(); ++i) consider(utilities(n, i));
    if (players >= 2) consider(0.0);
  }
  if (!std::isfinite(alpha)) throw std::invalid_argument("utilities have no suboptimal value; alpha undefined");
  return alpha;
}

double c_lower_bound(const Eigen::MatrixXd& utilities) {
  double total_max = 0.0;
  for (Eigen::Index n = 0; n < utilities.rows(); ++n) total_max += utilities.row(n).maxCoeff();
  return total_max - optimal_assignment(utilities).value;
}

double epsilon_threshold(int players, int arms, double alpha, double c) {
  if (!(alpha > 0.0) || !(c > 0.0)) throw std::invalid_argument("alpha and c must be > 0");
  const double first = std::pow(10.0, -1.0 / alpha);
  double second = 1.0;
  if (players > 1) {
    const double count = static_cast<double>(players - 1) * std::pow(2.0, players) * std::pow(arms, players);
    second = std::pow(-std::expm1(std::log(0.9) / count), 1.0 / c);
  }
  return std::min(first, second);
}

double epsilon_threshold(const Eigen::MatrixXd& utilities, double c) {
  const double needed = c_lower_bound(utilities);
  if (!(c > needed)) {
    throw std::invalid_argument("c = " + std::to_string(c) + " must exceed sum_n u_max - J1 = " +
                                std::to_string(needed) + " (deficit " + std::to_string(needed - c) + ")");
  }
  return epsilon_threshold(static_cast<int>(utilities.rows()), static_cast<int>(utilities.cols()),
                           utility_gap_alpha(utilities), c);
}

ExplorationBound exploration_bound(const ExplorationBoundParams& p, int k) {
  if (k < 1) throw std::invalid_argument("epoch index starts at 1");
  if (!(p.j1 > p.j2)) throw std::invalid_argument("exploration bound needs J1 > J2");
  if (p.players < 1 || p.arms < 1 || !(p.c1 > 0.0) || !(p.variance_max >= 0.0) || !(p.b_max > 0.0) ||
      !(p.delta >= 0.0)) {
    throw std::invalid_argument("exploration bound parameters must be positive");
  }
  const double n = p.players;
  const double m = p.arms;
  const double kk = k;
  const double gap = p.j1 - p.j2;

  ExplorationBound out;
  out.w = gap * gap / (m * n * n * (80.0 * p.variance_max + (40.0 * p.b_max / n) * gap));

  const double half = p.c1 * std::pow(kk / 2.0, p.delta);
  out.p_ek = 2.0 * n * m * std::exp(-out.w * half * kk) + n * m * std::exp(-half * kk / (36.0 * m * m));

  const double quarter = p.c1 * std::pow(kk / 4.0, p.delta);
  const double rate_a = out.w * quarter;
  const double rate_b = quarter / (36.0 * m * m);
  out.p_union = 2.0 * n * m / (-std::expm1(-rate_a)) * std::exp(-0.5 * rate_a * kk) +
                n * m / (-std::expm1(-rate_b)) * std::exp(-0.5 * rate_b * kk);
  out.vacuous = out.p_ek >= 1.0 || out.p_union >= 1.0;
  return out;
}

}  // namespace got

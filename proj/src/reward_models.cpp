#include "got/reward_models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "got/markov.hpp"

namespace got {

namespace {

std::string cell(int n, int i) {
  return "(" + std::to_string(n) + ", " + std::to_string(i) + ")";
}

void require_positive_means(const Eigen::MatrixXd& means) {
  if (means.rows() == 0 || means.cols() == 0) {
    throw std::invalid_argument("reward means matrix must be non-empty");
  }
  for (Eigen::Index n = 0; n < means.rows(); ++n) {
    for (Eigen::Index i = 0; i < means.cols(); ++i) {
      if (!std::isfinite(means(n, i)) || !(means(n, i) > 0.0)) {
        throw std::invalid_argument("expected reward at " +
                                    cell(static_cast<int>(n), static_cast<int>(i)) +
                                    " must be finite and > 0");
      }
    }
  }
}

double table_mean(const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < q.size(); ++j) acc += 0.5 * (q[j] + q[j + 1]);
  return acc / static_cast<double>(q.size() - 1);
}

double table_sample(const std::vector<double>& q, double u) {
  const double pos = u * static_cast<double>(q.size() - 1);
  const auto j = std::min(static_cast<std::size_t>(pos), q.size() - 2);
  const double frac = pos - static_cast<double>(j);
  return q[j] + frac * (q[j + 1] - q[j]);
}

int markov_step(const MarkovArm& arm, int current, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  const Eigen::Index last = arm.transition.cols() - 1;
  for (Eigen::Index j = 0; j < last; ++j) {
    acc += arm.transition(current, j);
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(last);
}

}  // namespace

double markov_expectation(const MarkovArm& arm) {
  const Eigen::VectorXd pi = markov::stationary_distribution(arm.transition);
  double mean = 0.0;
  for (std::size_t s = 0; s < arm.states.size(); ++s) mean += arm.states[s] * pi(static_cast<Eigen::Index>(s));
  return mean;
}

RewardSpec RewardSpec::iid_gaussian(Eigen::MatrixXd means, double variance) {
  require_positive_means(means);
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("reward variance must be finite and >= 0");
  }
  RewardSpec spec;
  spec.kind_ = RewardKind::IidGaussian;
  spec.means_ = std::move(means);
  spec.variance_ = variance;
  return spec;
}

RewardSpec RewardSpec::custom_table(std::vector<std::vector<std::vector<double>>> tables) {
  if (tables.empty() || tables.front().empty()) {
    throw std::invalid_argument("custom reward table must be non-empty");
  }
  const auto players = static_cast<Eigen::Index>(tables.size());
  const auto arms = static_cast<Eigen::Index>(tables.front().size());
  Eigen::MatrixXd means(players, arms);
  for (Eigen::Index n = 0; n < players; ++n) {
    if (static_cast<Eigen::Index>(tables[static_cast<std::size_t>(n)].size()) != arms) {
      throw std::invalid_argument("custom reward table rows must all have the same arm count");
    }
    for (Eigen::Index i = 0; i < arms; ++i) {
      const auto& q = tables[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
      if (q.size() < 2) {
        throw std::invalid_argument("quantile table at " + cell(static_cast<int>(n), static_cast<int>(i)) +
                                    " needs at least two knots");
      }
      for (std::size_t j = 0; j + 1 < q.size(); ++j) {
        if (!(q[j] <= q[j + 1])) {
          throw std::invalid_argument("quantile table at " + cell(static_cast<int>(n), static_cast<int>(i)) +
                                      " must be non-decreasing");
        }
      }
      means(n, i) = table_mean(q);
    }
  }
  require_positive_means(means);
  RewardSpec spec;
  spec.kind_ = RewardKind::IidCustomTable;
  spec.means_ = std::move(means);
  spec.tables_ = std::move(tables);
  return spec;
}

RewardSpec RewardSpec::markovian(std::vector<std::vector<MarkovArm>> chains) {
  if (chains.empty() || chains.front().empty()) {
    throw std::invalid_argument("Markovian reward spec must be non-empty");
  }
  const auto players = static_cast<Eigen::Index>(chains.size());
  const auto arms = static_cast<Eigen::Index>(chains.front().size());
  Eigen::MatrixXd means(players, arms);
  for (Eigen::Index n = 0; n < players; ++n) {
    if (static_cast<Eigen::Index>(chains[static_cast<std::size_t>(n)].size()) != arms) {
      throw std::invalid_argument("Markovian reward rows must all have the same arm count");
    }
    for (Eigen::Index i = 0; i < arms; ++i) {
      const auto& arm = chains[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)];
      const std::string where = cell(static_cast<int>(n), static_cast<int>(i));
      const auto k = static_cast<Eigen::Index>(arm.states.size());
      if (k == 0 || arm.transition.rows() != k || arm.transition.cols() != k) {
        throw std::invalid_argument("reward chain at " + where +
                                    " needs a square transition matrix matching its states");
      }
      for (double r : arm.states) {
        if (!(r > 0.0) || !std::isfinite(r)) {
          throw std::invalid_argument("reward chain at " + where + " has a non-positive state");
        }
      }
      if ((arm.transition.array() < 0.0).any() || markov::row_sum_error(arm.transition) > 1e-12) {
        throw std::invalid_argument("reward chain at " + where + " is not row-stochastic");
      }
      if (!markov::is_irreducible(arm.transition)) {
        throw std::invalid_argument("reward chain at " + where + " is not irreducible");
      }
      if (markov::period(arm.transition) != 1) {
        throw std::invalid_argument("reward chain at " + where + " is periodic");
      }
      means(n, i) = markov_expectation(arm);
    }
  }
  RewardSpec spec;
  spec.kind_ = RewardKind::Markovian;
  spec.means_ = std::move(means);
  spec.chains_ = std::move(chains);
  return spec;
}

void RewardSpec::set_bernstein(Eigen::MatrixXd sigma, Eigen::MatrixXd b) {
  if (sigma.rows() != means_.rows() || sigma.cols() != means_.cols() || b.rows() != means_.rows() ||
      b.cols() != means_.cols()) {
    throw std::invalid_argument("Bernstein parameter matrices must be players x arms");
  }
  if (!(sigma.array() > 0.0).all() || !(b.array() > 0.0).all()) {
    throw std::invalid_argument("Bernstein parameters must be > 0");
  }
  bernstein_sigma_ = std::move(sigma);
  bernstein_b_ = std::move(b);
}

bool RewardSpec::operator==(const RewardSpec& other) const {
  auto same = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return kind_ == other.kind_ && same(means_, other.means_) && variance_ == other.variance_ &&
         tables_ == other.tables_ && chains_ == other.chains_ &&
         same(bernstein_sigma_, other.bernstein_sigma_) && same(bernstein_b_, other.bernstein_b_);
}

RewardProcessState initial_state(const RewardSpec& spec, Rng& rng) {
  RewardProcessState state;
  const auto players = static_cast<std::size_t>(spec.players());
  const auto arms = static_cast<std::size_t>(spec.arms());
  state.visits.assign(players, std::vector<std::int64_t>(arms, 0));
  if (spec.kind() == RewardKind::Markovian) {
    state.markov_current.assign(players, std::vector<int>(arms, 0));
    for (std::size_t n = 0; n < players; ++n) {
      for (std::size_t i = 0; i < arms; ++i) {
        const auto& arm = spec.chains()[n][i];
        const Eigen::VectorXd pi = markov::stationary_distribution(arm.transition);
        const double u = uniform01(rng);
        double acc = 0.0;
        int s = static_cast<int>(pi.size()) - 1;
        for (Eigen::Index j = 0; j + 1 < pi.size(); ++j) {
          acc += pi(j);
          if (u < acc) {
            s = static_cast<int>(j);
            break;
          }
        }
        state.markov_current[n][i] = s;
      }
    }
  }
  return state;
}

int no_collision_indicator(std::span<const int> profile, int arm) {
  int count = 0;
  for (int a : profile) count += (a == arm) ? 1 : 0;
  return count > 1 ? 0 : 1;
}

double draw_reward(const RewardSpec& spec, RewardProcessState& state, int player, int arm, Rng& rng) {
  const auto n = static_cast<std::size_t>(player);
  const auto i = static_cast<std::size_t>(arm);
  switch (spec.kind()) {
    case RewardKind::IidGaussian: {
      const double mu = spec.expected_reward(player, arm);
      if (spec.variance() == 0.0) return mu;
      return mu + std::sqrt(spec.variance()) * state.gauss(rng);
    }
    case RewardKind::IidCustomTable:
      return table_sample(spec.tables()[n][i], uniform01(rng));
    case RewardKind::Markovian: {
      const auto& chain = spec.chains()[n][i];
      int& current = state.markov_current[n][i];
      const double r = chain.states[static_cast<std::size_t>(current)];
      current = markov_step(chain, current, rng);
      return r;
    }
  }
  return 0.0;
}

void sample_rewards_into(const RewardSpec& spec, RewardProcessState& state, std::span<const int> profile,
                         Rng& rng, std::span<double> utility, std::span<std::uint8_t> indicator) {
  const std::size_t players = profile.size();
  for (std::size_t n = 0; n < players; ++n) {
    const int arm = profile[n];
    bool alone = true;
    for (std::size_t m = 0; m < players && alone; ++m) {
      if (m != n && profile[m] == arm) alone = false;
    }
    indicator[n] = alone ? 1 : 0;
    if (!alone) {
      utility[n] = 0.0;
      continue;
    }
    utility[n] = draw_reward(spec, state, static_cast<int>(n), arm, rng);
    ++state.visits[n][static_cast<std::size_t>(arm)];
  }
}

RewardDraw sample_rewards(const RewardSpec& spec, RewardProcessState& state, std::span<const int> profile,
                          Rng& rng) {
  RewardDraw draw;
  draw.utility.assign(profile.size(), 0.0);
  draw.indicator.assign(profile.size(), 0);
  sample_rewards_into(spec, state, profile, rng, draw.utility, draw.indicator);
  return draw;
}

}  // namespace got

#include "got/assignment_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace got {

namespace {

void require_shape(const Eigen::MatrixXd& means) {
  if (means.rows() == 0 || means.cols() == 0) {
    throw std::invalid_argument("means matrix must be non-empty");
  }
  if (means.cols() < means.rows()) {
    throw std::invalid_argument("assignment needs M >= N (got N=" + std::to_string(means.rows()) +
                                ", M=" + std::to_string(means.cols()) + ")");
  }
  if (!means.allFinite()) throw std::invalid_argument("means matrix has non-finite entries");
}

double tie_tolerance(const Eigen::MatrixXd& means) {
  const double scale = static_cast<double>(means.rows()) * means.cwiseAbs().maxCoeff();
  return kAssignmentTieTolerance * std::max(1.0, scale);
}

double injective_sum(const Eigen::MatrixXd& means, const std::vector<int>& alloc) {
  double s = 0.0;
  for (std::size_t n = 0; n < alloc.size(); ++n) s += means(static_cast<Eigen::Index>(n), alloc[n]);
  return s;
}

// Hungarian method with potentials for a rows x cols cost matrix, rows <= cols.
// Returns the column assigned to each row.
std::vector<int> hungarian_min(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(m) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(m) + 1, 0), way(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m) + 1, inf);
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return row_to_col;
}

// Best value for rows [first_row, N) restricted to columns not in `taken`.
double residual_optimum(const Eigen::MatrixXd& means, int first_row, const std::vector<bool>& taken) {
  const int rows = static_cast<int>(means.rows()) - first_row;
  if (rows <= 0) return 0.0;
  std::vector<int> cols;
  for (int j = 0; j < static_cast<int>(means.cols()); ++j) {
    if (!taken[static_cast<std::size_t>(j)]) cols.push_back(j);
  }
  Eigen::MatrixXd cost(rows, static_cast<Eigen::Index>(cols.size()));
  for (int r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) cost(r, static_cast<Eigen::Index>(c)) = -means(first_row + r, cols[c]);
  }
  const auto sub = hungarian_min(cost);
  double s = 0.0;
  for (int r = 0; r < rows; ++r) s += means(first_row + r, cols[static_cast<std::size_t>(sub[static_cast<std::size_t>(r)])]);
  return s;
}

template <typename Visit>
void for_each_injective(int players, int arms, Visit&& visit) {
  std::vector<int> alloc(static_cast<std::size_t>(players), 0);
  std::vector<bool> taken(static_cast<std::size_t>(arms), false);
  auto rec = [&](auto&& self, int n) -> void {
    if (n == players) {
      visit(alloc);
      return;
    }
    for (int i = 0; i < arms; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      taken[static_cast<std::size_t>(i)] = true;
      alloc[static_cast<std::size_t>(n)] = i;
      self(self, n + 1);
      taken[static_cast<std::size_t>(i)] = false;
    }
  };
  rec(rec, 0);
}

void require_enumerable(const Eigen::MatrixXd& means) {
  if (means.rows() > 9) {
    throw std::invalid_argument("exhaustive enumeration limited to N <= 9 (got N=" +
                                std::to_string(means.rows()) + ")");
  }
}

}  // namespace

double profile_objective(const Eigen::MatrixXd& means, std::span<const int> profile) {
  double s = 0.0;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    bool alone = true;
    for (std::size_t m = 0; m < profile.size() && alone; ++m) {
      if (m != n && profile[m] == profile[n]) alone = false;
    }
    if (alone) s += means(static_cast<Eigen::Index>(n), profile[n]);
  }
  return s;
}

Assignment optimal_assignment(const Eigen::MatrixXd& means) {
  require_shape(means);
  const int players = static_cast<int>(means.rows());
  const int arms = static_cast<int>(means.cols());
  const std::vector<int> raw = hungarian_min(-means);
  const double best = injective_sum(means, raw);
  const double tol = tie_tolerance(means);

  Assignment out;
  out.allocation.assign(static_cast<std::size_t>(players), -1);
  std::vector<bool> taken(static_cast<std::size_t>(arms), false);
  double prefix = 0.0;
  for (int n = 0; n < players; ++n) {
    int chosen = -1;
    for (int i = 0; i < arms; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      taken[static_cast<std::size_t>(i)] = true;
      const double total = prefix + means(n, i) + residual_optimum(means, n + 1, taken);
      taken[static_cast<std::size_t>(i)] = false;
      if (total >= best - tol) {
        if (chosen < 0) {
          chosen = i;
        } else {
          out.near_tie = true;
          break;
        }
      }
    }
    if (chosen < 0) chosen = raw[static_cast<std::size_t>(n)];
    out.allocation[static_cast<std::size_t>(n)] = chosen;
    taken[static_cast<std::size_t>(chosen)] = true;
    prefix += means(n, chosen);
  }
  out.value = injective_sum(means, out.allocation);
  return out;
}

Assignment brute_force_assignment(const Eigen::MatrixXd& means) {
  require_shape(means);
  require_enumerable(means);
  const int players = static_cast<int>(means.rows());
  const int arms = static_cast<int>(means.cols());
  double best = -std::numeric_limits<double>::infinity();
  for_each_injective(players, arms, [&](const std::vector<int>& a) { best = std::max(best, injective_sum(means, a)); });
  const double tol = tie_tolerance(means);
  Assignment out;
  int hits = 0;
  for_each_injective(players, arms, [&](const std::vector<int>& a) {
    if (injective_sum(means, a) >= best - tol) {
      if (hits++ == 0) out.allocation = a;
    }
  });
  out.near_tie = hits > 1;
  out.value = injective_sum(means, out.allocation);
  return out;
}

double second_best_objective(const Eigen::MatrixXd& means) {
  require_shape(means);
  require_enumerable(means);
  const int players = static_cast<int>(means.rows());
  const int arms = static_cast<int>(means.cols());
  const double count = std::pow(static_cast<double>(arms), players);
  if (count > 4e8) throw std::invalid_argument("M^N too large for profile enumeration");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(count));
  std::vector<int> profile(static_cast<std::size_t>(players), 0);
  while (true) {
    values.push_back(profile_objective(means, profile));
    int n = players - 1;
    while (n >= 0 && ++profile[static_cast<std::size_t>(n)] == arms) {
      profile[static_cast<std::size_t>(n)] = 0;
      --n;
    }
    if (n < 0) break;
  }
  const double j1 = *std::max_element(values.begin(), values.end());
  double j2 = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    if (v < j1) j2 = std::max(j2, v);
  }
  if (!std::isfinite(j2)) throw DegenerateInstance("degenerate instance: every profile has the same objective");
  return j2;
}

AssignmentResult solve_assignment(const Eigen::MatrixXd& means) {
  const Assignment best = optimal_assignment(means);
  AssignmentResult r;
  r.allocation = best.allocation;
  r.j1 = profile_objective(means, best.allocation);
  r.j2 = second_best_objective(means);
  r.margin = (r.j1 - r.j2) / (2.0 * static_cast<double>(means.rows()));
  return r;
}

bool perturbation_invariance_check(const Eigen::MatrixXd& means, double delta, int trials, Rng& rng) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  const auto base = optimal_assignment(means).allocation;
  if (delta == 0.0) return true;
  std::uniform_real_distribution<double> noise(-delta, delta);
  Eigen::MatrixXd perturbed(means.rows(), means.cols());
  for (int t = 0; t < trials; ++t) {
    for (Eigen::Index n = 0; n < means.rows(); ++n) {
      for (Eigen::Index i = 0; i < means.cols(); ++i) perturbed(n, i) = means(n, i) + noise(rng);
    }
    if (optimal_assignment(perturbed).allocation != base) return false;
  }
  return true;
}

bool uniqueness_check(const Eigen::MatrixXd& means, double tolerance) {
  require_shape(means);
  require_enumerable(means);
  const int players = static_cast<int>(means.rows());
  const int arms = static_cast<int>(means.cols());
  double best = -std::numeric_limits<double>::infinity();
  for_each_injective(players, arms, [&](const std::vector<int>& a) { best = std::max(best, injective_sum(means, a)); });
  int hits = 0;
  for_each_injective(players, arms, [&](const std::vector<int>& a) {
    if (injective_sum(means, a) >= best - tolerance) ++hits;
  });
  return hits == 1;
}

}  // namespace got

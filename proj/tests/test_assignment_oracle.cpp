#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "got/assignment_oracle.hpp"

using namespace got;

namespace {

Eigen::MatrixXd u3x3() {
  Eigen::MatrixXd u(3, 3);
  u << 0.1, 0.05, 0.9, 0.1, 0.25, 0.3, 0.4, 0.2, 0.8;
  return u;
}

// Permutation oracle for square instances via std::next_permutation.
double permutation_best(const Eigen::MatrixXd& m) {
  std::vector<int> perm(static_cast<std::size_t>(m.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double s = 0.0;
    for (Eigen::Index n = 0; n < m.rows(); ++n) s += m(n, perm[static_cast<std::size_t>(n)]);
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("3x3 reference matrix") {
  const auto u = u3x3();
  const auto best = optimal_assignment(u);
  CHECK(best.allocation == std::vector<int>{2, 1, 0});
  CHECK(best.value == doctest::Approx(1.55));
  CHECK_FALSE(best.near_tie);
  CHECK(permutation_best(u) == doctest::Approx(1.55));

  CHECK(second_best_objective(u) == doctest::Approx(1.2));
  const std::vector<int> runner_up{2, 0, 1};
  CHECK(profile_objective(u, runner_up) == doctest::Approx(1.2));

  const auto r = solve_assignment(u);
  CHECK(r.j1 == doctest::Approx(1.55));
  CHECK(r.j2 == doctest::Approx(1.2));
  CHECK(r.margin == doctest::Approx(0.35 / 6.0));
  CHECK(r.margin == doctest::Approx(0.05833).epsilon(1e-3));
}

TEST_CASE("small fixed instances") {
  Eigen::MatrixXd diag = Eigen::MatrixXd::Constant(5, 5, 0.01);
  diag.diagonal().setOnes();
  CHECK(optimal_assignment(diag).allocation == std::vector<int>{0, 1, 2, 3, 4});

  Eigen::MatrixXd one(1, 1);
  one << 0.7;
  const auto b1 = brute_force_assignment(one);
  CHECK(b1.allocation == std::vector<int>{0});
  CHECK(b1.value == doctest::Approx(0.7));

  Eigen::MatrixXd wide(2, 3);
  wide << 1, 2, 3, 3, 2, 1;
  const auto bw = brute_force_assignment(wide);
  CHECK(bw.allocation == std::vector<int>{2, 0});
  CHECK(bw.value == doctest::Approx(6.0));
  CHECK(optimal_assignment(wide).allocation == bw.allocation);

  Eigen::MatrixXd sym(2, 2);
  sym << 1, 0.5, 0.5, 1;
  const auto s = solve_assignment(sym);
  CHECK(s.j1 == doctest::Approx(2.0));
  CHECK(s.j2 == doctest::Approx(1.0));
}

TEST_CASE("hungarian matches brute force on random rectangular instances") {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = dim(rng);
    const int m = std::uniform_int_distribution<int>(n, 6)(rng);
    Eigen::MatrixXd means(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) means(i, j) = u(rng);
    const auto a = optimal_assignment(means);
    const auto b = brute_force_assignment(means);
    CHECK(a.allocation == b.allocation);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  }
}

TEST_CASE("ties resolve to the lexicographically smallest allocation") {
  const Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(3, 4, 0.5);
  const auto a = optimal_assignment(flat);
  CHECK(a.allocation == std::vector<int>{0, 1, 2});
  CHECK(a.near_tie);
  CHECK(brute_force_assignment(flat).allocation == a.allocation);
  CHECK_THROWS_AS(second_best_objective(Eigen::MatrixXd::Constant(1, 1, 0.5)), DegenerateInstance);

  Rng rng(12);
  std::uniform_int_distribution<int> small(0, 2);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd m(4, 5);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 5; ++j) m(i, j) = small(rng);
    CHECK(optimal_assignment(m).allocation == brute_force_assignment(m).allocation);
  }
}

TEST_CASE("invalid shapes") {
  CHECK_THROWS_AS(optimal_assignment(Eigen::MatrixXd::Ones(3, 2)), std::invalid_argument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(optimal_assignment(bad), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_assignment(Eigen::MatrixXd::Ones(10, 10)), std::invalid_argument);
}

TEST_CASE("perturbation invariance") {
  const auto u = u3x3();
  Rng rng(13);
  CHECK(perturbation_invariance_check(u, 0.0, 10, rng));
  CHECK(perturbation_invariance_check(u, 0.99 * solve_assignment(u).margin, 1000, rng));
  CHECK_FALSE(perturbation_invariance_check(u, 100.0, 1000, rng));
}

TEST_CASE("uniqueness") {
  CHECK(uniqueness_check(u3x3(), 1e-9));
  CHECK_FALSE(uniqueness_check(Eigen::MatrixXd::Constant(3, 3, 0.2), 1e-9));
  Rng rng(14);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int unique = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = u(rng);
    unique += uniqueness_check(m, 1e-12);
  }
  CHECK(unique == 200);
}

TEST_CASE("second best counts colliding profiles") {
  // Optimal 2 + 2; any non-injective profile pays one player only.
  Eigen::MatrixXd m(2, 2);
  m << 2, 1.9, 1.9, 2;
  CHECK(second_best_objective(m) == doctest::Approx(3.8));
  Eigen::MatrixXd lonely(2, 3);
  lonely << 5, 0.1, 0.1, 0.1, 5, 0.1;
  CHECK(second_best_objective(lonely) == doctest::Approx(5.1));
}

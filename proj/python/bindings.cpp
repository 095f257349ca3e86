#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "got/assignment_oracle.hpp"
#include "got/chain_analyzer.hpp"
#include "got/experiment.hpp"

namespace py = pybind11;

namespace {

py::dict assignment_dict(const got::Assignment& a) {
  py::dict d;
  d["allocation"] = a.allocation;
  d["value"] = a.value;
  d["near_tie"] = a.near_tie;
  return d;
}

py::dict series_dict(const got::Series& s) {
  std::vector<std::int64_t> turn;
  std::vector<int> epoch, n_seeds;
  std::vector<std::string> phase;
  std::vector<double> mean, se;
  for (const auto& r : s.rows) {
    turn.push_back(r.turn);
    epoch.push_back(r.epoch);
    phase.emplace_back(got::phase_name(r.phase));
    mean.push_back(r.mean);
    se.push_back(r.stderr_);
    n_seeds.push_back(r.n_seeds);
  }
  py::dict d;
  d["turn"] = py::array(py::cast(turn));
  d["epoch"] = py::array(py::cast(epoch));
  d["phase"] = phase;
  d["mean_value"] = py::array(py::cast(mean));
  d["stderr"] = py::array(py::cast(se));
  d["n_seeds"] = py::array(py::cast(n_seeds));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Game of Thrones multi-player bandit simulator";
  py::register_exception<got::DegenerateInstance>(m, "DegenerateInstance", PyExc_ValueError);

  m.def("optimal_assignment", [](const Eigen::MatrixXd& means) { return assignment_dict(got::optimal_assignment(means)); },
        py::arg("means"));
  m.def("brute_force_assignment",
        [](const Eigen::MatrixXd& means) { return assignment_dict(got::brute_force_assignment(means)); },
        py::arg("means"));
  m.def(
      "solve_assignment",
      [](const Eigen::MatrixXd& means) {
        const auto r = got::solve_assignment(means);
        py::dict d;
        d["allocation"] = r.allocation;
        d["j1"] = r.j1;
        d["j2"] = r.j2;
        d["margin"] = r.margin;
        return d;
      },
      py::arg("means"));

  m.def(
      "build_chain",
      [](const Eigen::MatrixXd& utilities, double epsilon, double c) {
        return got::build_chain(utilities, epsilon, c).transition;
      },
      py::arg("utilities"), py::arg("epsilon"), py::arg("c"));
  m.def("stationary_linear", py::overload_cast<const Eigen::MatrixXd&>(&got::stationary_linear), py::arg("transition"));
  m.def("stationary_tree_formula", py::overload_cast<const Eigen::MatrixXd&>(&got::stationary_tree_formula),
        py::arg("transition"));
  m.def("mixing_time", &got::mixing_time, py::arg("transition"), py::arg("accuracy") = 0.25,
        py::arg("cap") = 1'000'000);
  m.def("epsilon_threshold", py::overload_cast<const Eigen::MatrixXd&, double>(&got::epsilon_threshold),
        py::arg("utilities"), py::arg("c"));
  m.def(
      "analyze_chain",
      [](const Eigen::MatrixXd& utilities, double c, std::vector<double> epsilons, double accuracy) {
        return py::module_::import("json").attr("loads")(got::chain_report(utilities, c, epsilons, accuracy));
      },
      py::arg("utilities"), py::arg("c"), py::arg("epsilons"), py::arg("mixing_accuracy") = 0.25);
  m.def(
      "exploration_bound",
      [](int players, int arms, double c1, double delta, double variance_max, double b_max, double j1, double j2,
         int k) {
        const auto b = got::exploration_bound({players, arms, c1, delta, variance_max, b_max, j1, j2}, k);
        py::dict d;
        d["w"] = b.w;
        d["p_ek"] = b.p_ek;
        d["p_union"] = b.p_union;
        d["vacuous"] = b.vacuous;
        return d;
      },
      py::arg("players"), py::arg("arms"), py::arg("c1"), py::arg("delta"), py::arg("variance_max"),
      py::arg("b_max"), py::arg("j1"), py::arg("j2"), py::arg("k"));

  m.def("parse_config", [](const std::string& text) { return got::emit_config(got::parse_config(text)); },
        py::arg("text"), "Validates a config and returns its canonical JSON text.");
  m.def("emit_config", [](const std::string& text) { return got::emit_config(got::parse_config(text)); },
        py::arg("text"));

  m.def(
      "run_game",
      [](const std::string& config_text, std::uint64_t seed) {
        auto config = got::parse_config(config_text);
        config.game.seed = seed;
        got::RunTrace trace;
        {
          py::gil_scoped_release release;
          trace = got::run_game(config.game);
        }
        const auto best = got::optimal_assignment(config.game.reward.expected_means());
        py::dict d;
        d["total_utility"] = py::array(py::cast(trace.total_utility));
        d["regret"] = py::array(py::cast(got::regret_curve(trace, best.value)));
        d["a_star"] = best.allocation;
        d["j1"] = best.value;
        d["exploit_accuracy"] = got::exploitation_accuracy(trace, best.allocation, 3);
        return d;
      },
      py::arg("config"), py::arg("seed") = 0);

  m.def(
      "run_batch",
      [](const std::string& config_text, unsigned threads) {
        const auto config = got::parse_config(config_text);
        got::BatchResult result;
        {
          py::gil_scoped_release release;
          result = got::run_batch(config, threads);
        }
        py::dict series;
        for (const auto& s : result.series) series[py::str(s.name)] = series_dict(s);
        py::list seeds;
        for (const auto& s : result.seeds) {
          py::dict d;
          d["seed"] = s.seed;
          d["final_regret"] = s.final_regret;
          d["final_ratio"] = s.final_ratio;
          d["exploit_accuracy"] = s.exploit_accuracy;
          d["j1"] = s.j1;
          d["a_star"] = s.a_star;
          seeds.append(d);
        }
        py::dict out;
        out["series"] = series;
        out["seeds"] = seeds;
        out["csv"] = [&] {
          py::dict csv;
          for (const auto& s : result.series) csv[py::str(s.name)] = got::format_csv(s);
          return csv;
        }();
        return out;
      },
      py::arg("config"), py::arg("threads") = 0);
}

"""Game of Thrones multi-player bandit simulator."""

from ._core import (
    DegenerateInstance,
    analyze_chain,
    brute_force_assignment,
    build_chain,
    emit_config,
    epsilon_threshold,
    exploration_bound,
    mixing_time,
    optimal_assignment,
    parse_config,
    run_batch,
    run_game,
    solve_assignment,
    stationary_linear,
    stationary_tree_formula,
)

__all__ = [
    "DegenerateInstance",
    "analyze_chain",
    "brute_force_assignment",
    "build_chain",
    "emit_config",
    "epsilon_threshold",
    "exploration_bound",
    "mixing_time",
    "optimal_assignment",
    "parse_config",
    "run_batch",
    "run_game",
    "solve_assignment",
    "stationary_linear",
    "stationary_tree_formula",
]

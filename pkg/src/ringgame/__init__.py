"""Exact and Monte Carlo solver for the three-player ring game.

The game: three players, two in the ring each round, the loser swaps
out for the bystander, and play stops once all six ordered "a beats b"
relations have occurred. This package computes exact expectations and
variances of the round count for every start state (symmetry-reduced
rational linear solving), verifies them by seeded simulation, and
extends the model to n players with class-level analysis and an
empirical scaling study.
"""

from .core import (
    ALL_PERMS,
    ROOT,
    GameState,
    PlayerPerm,
    StateParseError,
    apply_perm,
    canonicalize,
    class_census,
    enumerate_reachable,
    enumerate_states,
    induced_bit_perm,
    is_terminal,
    order,
    parse_state,
    render_state,
    symmetry_classes,
    transition,
)
from .npg import (
    NGameState,
    NumericSolution,
    Order1System,
    ScalingReport,
    build_order1_system,
    canonicalize_npg,
    full_solve_numeric,
    npg_play_once,
    npg_root,
    npg_transition,
    order1_paper_diff,
    scaling_experiment,
    solve_order1,
    solve_order1_three_player,
)
from .rng import SplitMix64, stream
from .simulate import (
    SimConfig,
    SimSummary,
    export_histogram,
    play_once,
    run_batch,
    string_walk,
)
from .solver import (
    LinearSystem,
    ModelError,
    SolveTable,
    build_expectation_system,
    expectation_table,
    second_moment_table,
    solve_exact,
    solve_table,
    variance_table,
)

__version__ = "0.1.0"

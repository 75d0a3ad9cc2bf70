"""Exact expectation and variance tables for the three-player ring game.

Backward recursion on its own deadlocks: a state can feed back into itself
through a cycle of rounds, so every state's first-step equation is solved
simultaneously instead. All arithmetic is over ``fractions.Fraction``; the
answers are exact rationals, never floats.

Three quantities per state S, all zero at terminal states:

  f(S)   expected number of rounds,
           f(S) = 1 + f(S1)/2 + f(S2)/2
  m2(S)  second moment of the round count,
           m2(S) = 1 + sum over children of (2 f(child) + m2(child))/2
  g(S)   variance of the round count. The default ("corrected") recursion
           g(S) = (f(S1) - f(S2))^2 / 4 + (g(S1) + g(S2))/2
         is forced by the law of total variance for an equiprobable
         two-point branch and agrees with m2 - f^2 identically. The
         "paper" mode keeps a published variant with coefficient 1/2
         instead of 1/4, reproducible for comparison; its values are
         exactly twice the corrected ones on this game.

Systems are built over canonical symmetry classes by default (successors
folded through ``canonicalize``), or unreduced for cross-validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import core
from .core import GameState, canonicalize, is_terminal, order, render_state, successors

VARIANCE_MODES = ("corrected", "paper")


class ModelError(RuntimeError):
    """A linear system that should be solvable is not.

    For these absorbing games this indicates a state subset that cannot
    reach termination, i.e. a malformed model, not a numerical issue.
    """


def solve_rational_system(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly by Gaussian elimination.

    Partial pivoting picks the largest nonzero pivot in each column; a
    column with no nonzero pivot raises ModelError.
    """
    n = len(matrix)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot_row = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot_row][col] == 0:
            raise ModelError("singular system: some states cannot reach termination")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        for r in range(col + 1, n):
            factor = aug[r][col] / pivot
            if factor == 0:
                continue
            for c in range(col, n + 1):
                aug[r][c] -= factor * aug[col][c]
    x = [Fraction(0)] * n
    for row in range(n - 1, -1, -1):
        acc = aug[row][n]
        for c in range(row + 1, n):
            acc -= aug[row][c] * x[c]
        x[row] = acc / aug[row][row]
    return x


@dataclass
class LinearSystem:
    """First-step equations ``v = coeffs @ v + constants`` over game states.

    One row per non-terminal variable state; ``coeffs[i][j]`` is the
    probability mass flowing from variables[i] to variables[j] in one
    round (terminal mass is absorbed into the constants).
    """

    variables: list[GameState]
    coeffs: list[list[Fraction]]
    constants: list[Fraction]

    def index_of(self, s: GameState) -> int:
        return self.variables.index(s)

    def solve(self) -> dict[GameState, Fraction]:
        return solve_exact(self)


def solve_exact(system: LinearSystem) -> dict[GameState, Fraction]:
    """Exact solution of a first-step system, as state -> value."""
    n = len(system.variables)
    matrix = [
        [(Fraction(1) if i == j else Fraction(0)) - system.coeffs[i][j] for j in range(n)]
        for i in range(n)
    ]
    values = solve_rational_system(matrix, system.constants)
    return dict(zip(system.variables, values))


def _covered_states(root: GameState | None) -> set[GameState]:
    if root is None:
        return set(core.enumerate_states())
    return core.enumerate_reachable(root)


def _variable_order(states, reduce_symmetry: bool) -> list[GameState]:
    # nearly-terminal states first keeps elimination fill-in low
    if reduce_symmetry:
        states = core.symmetry_classes(states).keys()
    return sorted(
        (s for s in states if not is_terminal(s)),
        key=lambda s: (order(s), render_state(s)),
    )


def build_expectation_system(
    root: GameState | None = None, reduce_symmetry: bool = True
) -> LinearSystem:
    """First-step system for f over the states reachable from ``root``.

    ``root=None`` covers the whole 192-state space (any state is a legal
    start). With ``reduce_symmetry`` the variables are the canonical
    classes and successors are folded through ``canonicalize``; without
    it, every reachable non-terminal state is its own variable.
    """
    states = _covered_states(root)
    variables = _variable_order(states, reduce_symmetry)
    index = {s: i for i, s in enumerate(variables)}
    n = len(variables)
    coeffs = [[Fraction(0)] * n for _ in range(n)]
    constants = [Fraction(1)] * n
    half = Fraction(1, 2)
    for i, s in enumerate(variables):
        for child in successors(s):
            if reduce_symmetry:
                child = canonicalize(child)[0]
            if not is_terminal(child):
                coeffs[i][index[child]] += half
    return LinearSystem(variables, coeffs, constants)


# ---------------------------------------------------------------------------
# Solve tables
# ---------------------------------------------------------------------------

@dataclass
class SolveTable:
    """Exact per-class results, queryable for any covered state.

    ``f``/``m2``/``g`` are keyed by canonical representatives; arbitrary
    covered states are resolved through ``canon_map``. ``variance_mode``
    records which recursion filled ``g``.
    """

    root: GameState | None
    canon_map: dict[GameState, GameState]
    f: dict[GameState, Fraction]
    m2: dict[GameState, Fraction] = field(default_factory=dict)
    g: dict[GameState, Fraction] = field(default_factory=dict)
    variance_mode: str | None = None

    def states(self) -> list[GameState]:
        """Every covered state, canonical or not, in (order, text) order."""
        return sorted(self.canon_map, key=lambda s: (order(s), render_state(s)))

    def canonical_states(self) -> list[GameState]:
        return sorted(self.f, key=lambda s: (order(s), render_state(s)))

    def _rep(self, s: GameState) -> GameState:
        try:
            return self.canon_map[s]
        except KeyError:
            raise KeyError(
                f"state {render_state(s)} is outside this table"
                f" (root {render_state(self.root) if self.root else 'all'});"
                f" build a table rooted at it instead"
            ) from None

    def f_of(self, s: GameState) -> Fraction:
        return self.f[self._rep(s)]

    def m2_of(self, s: GameState) -> Fraction:
        return self.m2[self._rep(s)]

    def g_of(self, s: GameState) -> Fraction:
        return self.g[self._rep(s)]


def expectation_table(root: GameState | None = None) -> SolveTable:
    """Solve f for every canonical class reachable from ``root``.

    Terminal classes get f = 0. Queries for covered non-canonical states
    go through the canonicalization map.
    """
    states = _covered_states(root)
    canon_map = {s: canonicalize(s)[0] for s in states}
    system = build_expectation_system(root, reduce_symmetry=True)
    f = solve_exact(system)
    for rep in set(canon_map.values()):
        if is_terminal(rep):
            f[rep] = Fraction(0)
    return SolveTable(root=root, canon_map=canon_map, f=f)


def _child_reps(s: GameState) -> tuple[GameState, GameState]:
    # not via canon_map: a class representative may itself lie outside the
    # covered set even though its whole orbit is represented in it
    c1, c2 = successors(s)
    return canonicalize(c1)[0], canonicalize(c2)[0]


def second_moment_table(table: SolveTable) -> SolveTable:
    """Fill m2 by a second exact solve with the same coefficient matrix.

    Row constants become 1 + f(S1) + f(S2): first-step analysis applied
    to the squared round count. Independent of the variance recursion,
    which makes m2 - f^2 a genuine cross-check of g.
    """
    if not table.f:
        raise ValueError("expectation entries must be filled first")
    system = build_expectation_system(table.root, reduce_symmetry=True)
    for i, s in enumerate(system.variables):
        r1, r2 = _child_reps(s)
        system.constants[i] = 1 + table.f[r1] + table.f[r2]
    m2 = solve_exact(system)
    for rep in table.f:
        if is_terminal(rep):
            m2[rep] = Fraction(0)
    table.m2 = m2
    return table


def variance_table(table: SolveTable, mode: str = "corrected") -> SolveTable:
    """Fill g by solving the variance recursion in the given mode.

    corrected: g(S) = (f(S1)-f(S2))^2/4 + (g(S1)+g(S2))/2
    paper:     same with coefficient 1/2, kept only to reproduce the
               published order-1 vector (40, 44, 44).
    """
    if mode not in VARIANCE_MODES:
        raise ValueError(f"unknown variance mode {mode!r}; expected one of {VARIANCE_MODES}")
    if not table.f:
        raise ValueError("expectation entries must be filled first")
    split = Fraction(1, 4) if mode == "corrected" else Fraction(1, 2)
    system = build_expectation_system(table.root, reduce_symmetry=True)
    for i, s in enumerate(system.variables):
        r1, r2 = _child_reps(s)
        system.constants[i] = (table.f[r1] - table.f[r2]) ** 2 * split
    g = solve_exact(system)
    for rep in table.f:
        if is_terminal(rep):
            g[rep] = Fraction(0)
    table.g = g
    table.variance_mode = mode
    return table


def solve_table(root: GameState | None = None, mode: str = "corrected") -> SolveTable:
    """Full table (f, m2, g) in one call."""
    return variance_table(second_moment_table(expectation_table(root)), mode)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

TABLE_SCHEMA = "ringgame-table/1"
_COLUMNS = "state,order,f_num,f_den,g_num,g_den,m2_num,m2_den"


def _require_full(table: SolveTable) -> None:
    if not table.m2 or not table.g:
        raise ValueError("table must have f, g and m2 filled; use solve_table()")


def table_rows(table: SolveTable) -> list[dict]:
    """One row per covered state, sorted by (order, state text)."""
    _require_full(table)
    rows = []
    for s in table.states():
        f, g, m2 = table.f_of(s), table.g_of(s), table.m2_of(s)
        rows.append(
            {
                "state": render_state(s),
                "order": order(s),
                "f_num": f.numerator,
                "f_den": f.denominator,
                "g_num": g.numerator,
                "g_den": g.denominator,
                "m2_num": m2.numerator,
                "m2_den": m2.denominator,
            }
        )
    return rows


def export_table_csv(table: SolveTable, path) -> None:
    """Write the table as CSV with exact integer numerators/denominators.

    The state column contains a comma and is therefore quoted.
    """
    import csv

    with open(path, "w", newline="") as fh:
        fh.write(f"# {TABLE_SCHEMA} variance={table.variance_mode}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_COLUMNS.split(","))
        for row in table_rows(table):
            writer.writerow([row[name] for name in _COLUMNS.split(",")])


def approx(value: Fraction) -> float:
    """Decimal approximation to 12 significant digits."""
    return float(f"{float(value):.12g}")


def export_table_json(table: SolveTable, path) -> None:
    """JSON variant of the CSV schema, with decimal approximations added."""
    import json

    rows = table_rows(table)
    for row in rows:
        row["f_dec"] = approx(Fraction(row["f_num"], row["f_den"]))
        row["g_dec"] = approx(Fraction(row["g_num"], row["g_den"]))
        row["m2_dec"] = approx(Fraction(row["m2_num"], row["m2_den"]))
    doc = {
        "schema": TABLE_SCHEMA,
        "root": render_state(table.root) if table.root is not None else "all",
        "variance_mode": table.variance_mode,
        "rows": rows,
    }
    with open(path, "w", newline="") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

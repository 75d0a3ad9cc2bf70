"""The n-player ring game: model, class analysis, numeric solving, scaling.

Model: two of n players fight each round, the winner stays, and the
loser's replacement is drawn uniformly from the n-2 players outside the
ring (the loser cannot come straight back). The game ends once all
n(n-1) ordered "a beats b" relations have occurred. At n=3 everything
degenerates to the three-player game.

Relations are stored as a bitmask; bit index for "a beats b" is
(a-1)(n-1) + (b-1 if b < a else b-2), i.e. row-major with the diagonal
skipped. Players are 1-based, rings are sorted pairs.

Order-1 analysis: with "1 beats 2" the only missing relation there are
four state classes, named by the ring: x = {1,2}, y = {1,3} (prospective
winner plus an outsider), z = {2,3} (prospective loser plus an
outsider), w = {3,4} (two outsiders, n >= 4 only). Their transition
matrix is derived mechanically from the model here; a published variant
of the same matrix differs in seven entries of rows y, z, w (its rows
sum to more than 1), and ``order1_paper_diff`` reports the discrepancy
entry by entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .rng import SplitMix64, stream
from .solver import solve_rational_system

ORDER1_CLASSES = ("x", "y", "z", "w")

SCALING_SCHEMA = "ringgame-scaling/1"
FIT_SCHEMA = "ringgame-scaling-fit/1"
NPG_CLASSES_SCHEMA = "ringgame-npg-classes/1"


def rel_index(n: int, a: int, b: int) -> int:
    """Bit index of relation "a beats b" (1-based players, a != b)."""
    if a == b:
        raise ValueError("a player cannot beat itself")
    return (a - 1) * (n - 1) + (b - 1 if b < a else b - 2)


def full_mask(n: int) -> int:
    return (1 << (n * (n - 1))) - 1


@dataclass(frozen=True, slots=True)
class NGameState:
    """Game situation for n players: relation bitmask plus the ring pair."""

    n: int
    relations: int
    ring: tuple[int, int]

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError(f"need at least 3 players, got n={self.n}")
        if not 0 <= self.relations <= full_mask(self.n):
            raise ValueError("relations mask out of range")
        a, b = self.ring
        if not (1 <= a < b <= self.n):
            raise ValueError(f"ring must be a sorted pair of distinct players in 1..{self.n}")

    def beats(self, a: int, b: int) -> bool:
        return bool(self.relations >> rel_index(self.n, a, b) & 1)

    def relations_matrix(self) -> list[list[bool]]:
        """n x n matrix view of the bitmask; diagonal always False."""
        return [
            [a != b and self.beats(a, b) for b in range(1, self.n + 1)]
            for a in range(1, self.n + 1)
        ]

    def __str__(self) -> str:
        return render_npg(self)


def npg_root(n: int) -> NGameState:
    """Fresh game: no relations observed, players 1 and 2 in the ring."""
    return NGameState(n, 0, (1, 2))


def render_npg(s: NGameState) -> str:
    bits = "".join("1" if s.relations >> k & 1 else "0" for k in range(s.n * (s.n - 1)))
    return f"{bits}|{s.ring[0]},{s.ring[1]}"


def npg_order(s: NGameState) -> int:
    """Number of relations not yet observed."""
    return s.n * (s.n - 1) - bin(s.relations).count("1")


def npg_is_terminal(s: NGameState) -> bool:
    return s.relations == full_mask(s.n)


def npg_transition(s: NGameState, winner: int, entrant: int) -> NGameState:
    """One round: winner beats the other ring member, entrant replaces them."""
    if npg_is_terminal(s):
        raise ValueError(f"no transition from terminal state {render_npg(s)}")
    if winner not in s.ring:
        raise ValueError(f"winner {winner} not in ring {s.ring}")
    if entrant in s.ring:
        raise ValueError(f"entrant {entrant} is already in the ring {s.ring}")
    if not 1 <= entrant <= s.n:
        raise ValueError(f"entrant {entrant} out of range 1..{s.n}")
    loser = s.ring[0] if s.ring[1] == winner else s.ring[1]
    mask = s.relations | 1 << rel_index(s.n, winner, loser)
    ring = (winner, entrant) if winner < entrant else (entrant, winner)
    return NGameState(s.n, mask, ring)


def npg_play_once(rng: SplitMix64, n: int) -> int:
    """Simulate one n-player game from the fresh start; returns the rounds.

    Per round: one fair bit picks the winner (set bit = higher-indexed
    ring member), then one bounded draw picks the entrant among the n-2
    outsiders; the entrant draw is skipped once the game has ended and
    consumes nothing at n=3 (the bystander is forced).
    """
    if n < 3:
        raise ValueError(f"need at least 3 players, got n={n}")
    remaining = n * (n - 1)
    mask = 0
    a, b = 1, 2
    others = list(range(3, n + 1))
    rounds = 0
    while True:
        if rng.bit():
            winner, loser = b, a
        else:
            winner, loser = a, b
        bit = 1 << rel_index(n, winner, loser)
        if not mask & bit:
            mask |= bit
            remaining -= 1
        rounds += 1
        if remaining == 0:
            return rounds
        k = rng.below(n - 2)
        entrant = others[k]
        others[k] = loser
        a, b = (winner, entrant) if winner < entrant else (entrant, winner)


# ---------------------------------------------------------------------------
# Bridge to the 3-player module
# ---------------------------------------------------------------------------

def from_three_player(s) -> NGameState:
    """Convert a three-player GameState (paper bit order) to an NGameState."""
    from .core import RELATION_PAIRS

    mask = 0
    for k, (a, b) in enumerate(RELATION_PAIRS):
        if s.bits >> k & 1:
            mask |= 1 << rel_index(3, a, b)
    return NGameState(3, mask, s.ring)


def to_three_player(s: NGameState):
    """Convert an n=3 NGameState back to a three-player GameState."""
    from .core import RELATION_INDEX, GameState

    if s.n != 3:
        raise ValueError(f"only n=3 converts to a three-player state, got n={s.n}")
    bits = 0
    for a in range(1, 4):
        for b in range(1, 4):
            if a != b and s.beats(a, b):
                bits |= 1 << RELATION_INDEX[(a, b)]
    return GameState(bits, s.ring)


# ---------------------------------------------------------------------------
# Order-1 class system
# ---------------------------------------------------------------------------

def _order1_class(ring: tuple[int, int]) -> str:
    # classes relative to the missing relation "1 beats 2"
    if ring == (1, 2):
        return "x"
    if 1 in ring:
        return "y"
    if 2 in ring:
        return "z"
    return "w"


def _order1_rows(n: int, classes: tuple[str, ...]) -> dict[str, dict[str, Fraction]]:
    """Transition mass between order-1 classes, derived from the model."""
    reps = {"x": (1, 2), "y": (1, 3), "z": (2, 3), "w": (3, 4)}
    p_win = Fraction(1, 2)
    p_entrant = Fraction(1, n - 2)
    rows: dict[str, dict[str, Fraction]] = {c: {d: Fraction(0) for d in classes} for c in classes}
    for cls in classes:
        ring = reps[cls]
        for winner in ring:
            loser = ring[0] if ring[1] == winner else ring[1]
            if (winner, loser) == (1, 2):
                continue  # the missing relation appears: absorbed
            for entrant in range(1, n + 1):
                if entrant in ring:
                    continue
                dest = _order1_class(tuple(sorted((winner, entrant))))
                rows[cls][dest] += p_win * p_entrant
    return rows


@dataclass(frozen=True)
class Order1System:
    """v = matrix @ v + constants over the order-1 classes x, y, z, w."""

    n: int
    epsilon: Fraction
    matrix: tuple[tuple[Fraction, ...], ...]
    constants: tuple[Fraction, ...]

    @property
    def absorption(self) -> tuple[Fraction, ...]:
        """Per-row probability of ending the game this round."""
        return tuple(1 - sum(row) for row in self.matrix)


def build_order1_system(n: int) -> Order1System:
    """Order-1 class system for n >= 4 (class w needs two outsiders)."""
    if n < 4:
        raise ValueError(f"order-1 class system needs n >= 4 (class w undefined), got n={n}")
    rows = _order1_rows(n, ORDER1_CLASSES)
    matrix = tuple(
        tuple(rows[c][d] for d in ORDER1_CLASSES) for c in ORDER1_CLASSES
    )
    return Order1System(
        n=n,
        epsilon=Fraction(1, 2 * (n - 2)),
        matrix=matrix,
        constants=(Fraction(1),) * 4,
    )


def solve_order1(n: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """Exact expectations (x, y, z, w) of the order-1 classes."""
    system = build_order1_system(n)
    size = len(system.matrix)
    lhs = [
        [(Fraction(1) if i == j else Fraction(0)) - system.matrix[i][j] for j in range(size)]
        for i in range(size)
    ]
    return tuple(solve_rational_system(lhs, list(system.constants)))


def solve_order1_three_player() -> tuple[Fraction, Fraction, Fraction]:
    """The n=3 analogue: three classes, entrant forced; solves to (4, 6, 6)."""
    classes = ("x", "y", "z")
    rows = _order1_rows(3, classes)
    lhs = [
        [(Fraction(1) if classes[i] == d else Fraction(0)) - rows[classes[i]][d] for d in classes]
        for i in range(3)
    ]
    return tuple(solve_rational_system(lhs, [Fraction(1)] * 3))


def paper_order1_matrix(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """The published order-1 matrix, verbatim (rows y, z, w are not
    substochastic; kept only for the structured diff)."""
    if n < 4:
        raise ValueError(f"order-1 class system needs n >= 4, got n={n}")
    e = Fraction(1, 2 * (n - 2))
    h = Fraction(1, 2)
    return (
        (Fraction(0), Fraction(0), h, Fraction(0)),
        (e, h, e, h),
        (e, e, h, h),
        (Fraction(0), e, e, 1 - 2 * e),
    )


def order1_paper_diff(n: int) -> list[dict]:
    """Entries where the derived matrix and the published one disagree."""
    derived = build_order1_system(n).matrix
    printed = paper_order1_matrix(n)
    diff = []
    for i, row_label in enumerate(ORDER1_CLASSES):
        for j, col_label in enumerate(ORDER1_CLASSES):
            if derived[i][j] != printed[i][j]:
                diff.append(
                    {
                        "row": row_label,
                        "col": col_label,
                        "derived": derived[i][j],
                        "printed": printed[i][j],
                    }
                )
    return diff


# ---------------------------------------------------------------------------
# Full numeric solve over the reduced state space (n = 3 or 4)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4)
def _perm_tables(n: int):
    """Per-permutation mask remap tables and ring maps (n <= 4 only)."""
    if n > 4:
        raise ValueError(f"state space too large to canonicalize for n={n}")
    nrel = n * (n - 1)
    rings = list(combinations(range(1, n + 1), 2))
    tables = []
    for p in permutations(range(1, n + 1)):
        bit_image = [0] * nrel
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                if a != b:
                    bit_image[rel_index(n, a, b)] = rel_index(n, p[a - 1], p[b - 1])
        remap = [0] * (1 << nrel)
        for mask in range(1, 1 << nrel):
            low = mask & -mask
            remap[mask] = remap[mask ^ low] | 1 << bit_image[low.bit_length() - 1]
        ring_map = {r: tuple(sorted((p[r[0] - 1], p[r[1] - 1]))) for r in rings}
        tables.append((remap, ring_map))
    return tuple(tables)


def canonicalize_npg(s: NGameState) -> NGameState:
    """Orbit-minimal state under player relabelling, by (mask, ring)."""
    best = None
    for remap, ring_map in _perm_tables(s.n):
        key = (remap[s.relations], ring_map[s.ring])
        if best is None or key < best:
            best = key
    return NGameState(s.n, best[0], best[1])


@dataclass
class NumericSolution:
    """Expectations per canonical class from the fixed-point solve."""

    n: int
    values: dict[NGameState, float]
    sweeps: int
    residual: float
    tolerance: float

    def value_of(self, s: NGameState) -> float:
        return self.values[canonicalize_npg(s)]

    def root_value(self) -> float:
        return self.value_of(npg_root(self.n))


def full_solve_numeric(
    n: int,
    tolerance: float = 1e-12,
    max_sweeps: int = 50_000,
    damping: float = 1.0,
) -> NumericSolution:
    """Solve the first-step equations over every state, reduced by symmetry.

    States are grouped into orbits under player relabelling (2^{n(n-1)}
    masks x C(n,2) rings collapse to 36 classes at n=3, 1104 at n=4),
    then v = 1 + mean over (winner, entrant) outcomes of v(child) is
    iterated to the requested absolute residual tolerance. ``damping``
    relaxes each update (1.0 applies the equations directly); iteration
    converges geometrically because every class drains into the
    terminal one.
    """
    if n not in (3, 4):
        raise ValueError(f"full numeric solve supports n in (3, 4), got n={n}")
    if not 0 < damping <= 1:
        raise ValueError(f"damping must be in (0, 1], got {damping}")
    tables = _perm_tables(n)
    rings = list(combinations(range(1, n + 1), 2))

    def canon_key(mask: int, ring: tuple[int, int]):
        return min((remap[mask], ring_map[ring]) for remap, ring_map in tables)

    keys = {canon_key(mask, ring) for mask in range(1 << n * (n - 1)) for ring in rings}
    reps = sorted(keys)
    index = {key: i for i, key in enumerate(reps)}
    full = full_mask(n)

    nonterminal = [i for i, (mask, _) in enumerate(reps) if mask != full]
    children = np.empty((len(nonterminal), 2 * (n - 2)), dtype=np.int64)
    for row, i in enumerate(nonterminal):
        state = NGameState(n, reps[i][0], reps[i][1])
        col = 0
        for winner in state.ring:
            for entrant in range(1, n + 1):
                if entrant in state.ring:
                    continue
                child = npg_transition(state, winner, entrant)
                children[row, col] = index[canon_key(child.relations, child.ring)]
                col += 1

    weight = 1.0 / (2 * (n - 2))
    values = np.zeros(len(reps))
    nt = np.array(nonterminal, dtype=np.int64)
    residual = float("inf")
    sweeps = 0
    while sweeps < max_sweeps:
        target = 1.0 + weight * values[children].sum(axis=1)
        residual = float(np.abs(target - values[nt]).max())
        values[nt] += damping * (target - values[nt])
        sweeps += 1
        if residual <= tolerance:
            break
    if residual > tolerance:
        raise RuntimeError(
            f"fixed-point iteration did not reach tolerance {tolerance:g} in "
            f"{max_sweeps} sweeps (residual {residual:.3e})"
        )
    result = {NGameState(n, mask, ring): float(values[index[(mask, ring)]]) for mask, ring in reps}
    return NumericSolution(
        n=n, values=result, sweeps=sweeps, residual=residual, tolerance=tolerance
    )


def export_classes_csv(solution: NumericSolution, path) -> None:
    """Per-class expectations as CSV, sorted by (order, state text).

    The state column contains a comma and is therefore quoted.
    """
    import csv

    rows = sorted(
        solution.values.items(), key=lambda kv: (npg_order(kv[0]), render_npg(kv[0]))
    )
    with open(path, "w", newline="") as fh:
        fh.write(f"# {NPG_CLASSES_SCHEMA} n={solution.n}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["state", "expectation"])
        for state, value in rows:
            writer.writerow([render_npg(state), repr(value)])


# ---------------------------------------------------------------------------
# Scaling experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingEntry:
    n: int
    samples: int
    mean: float
    stderr: float


@dataclass(frozen=True)
class FitResult:
    """One least-squares line; residual is summed in the fit's own space,
    prediction_sse re-evaluates the model against the raw means so the
    two fits are comparable."""

    model: str
    slope: float
    intercept: float
    residual: float
    prediction_sse: float


@dataclass(frozen=True)
class ScalingReport:
    entries: tuple[ScalingEntry, ...]
    fits: dict[str, FitResult]
    better: str
    seed: int


def _line_fit(xs, ys) -> tuple[float, float, float]:
    slope, intercept = np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)
    predicted = slope * np.asarray(xs, dtype=float) + intercept
    sse = float(((np.asarray(ys, dtype=float) - predicted) ** 2).sum())
    return float(slope), float(intercept), sse


def scaling_experiment(n_min: int, n_max: int, samples: int, seed: int = 0) -> ScalingReport:
    """Monte Carlo means for n = n_min..n_max with two growth-law fits.

    Replication i at size n runs on ``stream(seed, n, i)``. Fits: mean
    against n^2 and log(mean) against n; the better model is the one
    whose reconstructed means have the smaller squared error.
    """
    if not 3 <= n_min <= n_max:
        raise ValueError(f"need 3 <= n_min <= n_max, got {n_min}..{n_max}")
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    entries = []
    for n in range(n_min, n_max + 1):
        rounds = [npg_play_once(stream(seed, n, i), n) for i in range(samples)]
        total = sum(rounds)
        mean = total / samples
        var = (
            sum(r * r for r in rounds) - total * total / samples
        ) / (samples - 1) if samples > 1 else 0.0
        entries.append(
            ScalingEntry(n=n, samples=samples, mean=mean, stderr=(var / samples) ** 0.5)
        )
    ns = [e.n for e in entries]
    means = [e.mean for e in entries]

    q_slope, q_intercept, q_sse = _line_fit([n * n for n in ns], means)
    quadratic = FitResult("quadratic", q_slope, q_intercept, q_sse, q_sse)

    e_slope, e_intercept, e_sse = _line_fit(ns, np.log(means))
    e_pred_sse = float(
        sum((m - float(np.exp(e_slope * n + e_intercept))) ** 2 for n, m in zip(ns, means))
    )
    exponential = FitResult("exponential", e_slope, e_intercept, e_sse, e_pred_sse)

    fits = {"quadratic": quadratic, "exponential": exponential}
    better = min(fits, key=lambda k: (fits[k].prediction_sse, k))
    return ScalingReport(entries=tuple(entries), fits=fits, better=better, seed=seed)


def export_scaling_csv(report: ScalingReport, path) -> None:
    lines = [f"# {SCALING_SCHEMA}", "n,samples,mean,stderr"]
    for e in report.entries:
        lines.append(f"{e.n},{e.samples},{e.mean!r},{e.stderr!r}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def export_fit_json(report: ScalingReport, path) -> None:
    import json

    doc = {
        "schema": FIT_SCHEMA,
        "seed": report.seed,
        "fits": [
            {
                "model": fit.model,
                "slope": fit.slope,
                "intercept": fit.intercept,
                "residual": fit.residual,
                "prediction_sse": fit.prediction_sse,
            }
            for fit in (report.fits["quadratic"], report.fits["exponential"])
        ],
        "better": report.better,
    }
    with open(path, "w", newline="") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Seeded Monte Carlo for the three-player game and its string twin.

Replication i of a batch runs on ``stream(seed, i)``, so a batch is a
pure function of its config: same seed, same histogram, regardless of
execution order. Each round consumes exactly one fair bit (index into
the sorted ring), which keeps the game loop and the precomputed
fast path draw-for-draw identical.

The string twin builds a word over {a, b, c}: it starts at 'a', each
next character is a fair choice between the two letters different from
the current one, and it stops once all six ordered adjacent pairs have
occurred. Mapping each game round to the player outside the ring turns
a game trajectory into exactly such a word of length rounds + 1, so the
walk is an independent check on the game simulator (expected length
f(root) + 1 = 67/5).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import core
from .core import GameState, RINGS, is_terminal, render_state
from .rng import SplitMix64, stream

MODES = ("game", "string")

HISTOGRAM_SCHEMA = "ringgame-histogram/1"
SUMMARY_SCHEMA = "ringgame-summary/1"


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo batch: where to start, how many runs, which stream."""

    start: GameState
    samples: int
    seed: int = 0
    mode: str = "game"

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class SimSummary:
    """Batch statistics; a pure function of the SimConfig that produced it."""

    samples: int
    mean: float
    sample_variance: float  # unbiased, n-1 denominator
    min: int
    max: int
    histogram: dict[int, int]
    seed: int
    mode: str


def play_once(rng: SplitMix64, start: GameState) -> tuple[int, list[GameState]]:
    """Play one game; returns the round count and the visited states.

    The trace runs from ``start`` through the terminal state inclusive;
    a terminal start plays no rounds and yields an empty trace.
    """
    if is_terminal(start):
        return 0, []
    trace = [start]
    s = start
    rounds = 0
    while not is_terminal(s):
        s = core.transition(s, s.ring[rng.bit()])
        trace.append(s)
        rounds += 1
    return rounds, trace


def string_walk(rng: SplitMix64) -> tuple[int, str]:
    """One string walk; returns the final length and the word itself."""
    others = {"a": "bc", "b": "ac", "c": "ab"}
    cur = "a"
    word = ["a"]
    seen: set[tuple[str, str]] = set()
    while len(seen) < 6:
        nxt = others[cur][rng.bit()]
        seen.add((cur, nxt))
        word.append(nxt)
        cur = nxt
    return len(word), "".join(word)


# Fast path: integer state ids (bits * 3 + ring index) with precomputed
# transitions, draw-for-draw identical to play_once.
_RING_INDEX = {ring: k for k, ring in enumerate(RINGS)}


def _state_id(s: GameState) -> int:
    return s.bits * 3 + _RING_INDEX[s.ring]


def _transition_tables() -> tuple[list[int], list[int], list[bool]]:
    lo = [0] * 192
    hi = [0] * 192
    terminal = [False] * 192
    for s in core.enumerate_states():
        sid = _state_id(s)
        if is_terminal(s):
            terminal[sid] = True
        else:
            lo[sid] = _state_id(core.transition(s, s.ring[0]))
            hi[sid] = _state_id(core.transition(s, s.ring[1]))
    return lo, hi, terminal


_LO, _HI, _TERMINAL = _transition_tables()


def _play_rounds(rng: SplitMix64, sid: int) -> int:
    rounds = 0
    lo, hi, terminal = _LO, _HI, _TERMINAL
    while not terminal[sid]:
        sid = hi[sid] if rng.next64() & 1 else lo[sid]
        rounds += 1
    return rounds


def run_batch(cfg: SimConfig) -> SimSummary:
    """Run all replications of a batch and aggregate them.

    Replication i draws from ``stream(cfg.seed, i)``. Sums are integer
    accumulations over the histogram, so aggregation order cannot change
    the result.
    """
    histogram: Counter[int] = Counter()
    if cfg.mode == "game":
        start_id = _state_id(cfg.start)
        for i in range(cfg.samples):
            histogram[_play_rounds(stream(cfg.seed, i), start_id)] += 1
    else:
        for i in range(cfg.samples):
            histogram[string_walk(stream(cfg.seed, i))[0]] += 1
    n = cfg.samples
    total = sum(v * c for v, c in histogram.items())
    total_sq = sum(v * v * c for v, c in histogram.items())
    mean = total / n
    variance = (total_sq - total * total / n) / (n - 1) if n > 1 else 0.0
    return SimSummary(
        samples=n,
        mean=mean,
        sample_variance=variance,
        min=min(histogram),
        max=max(histogram),
        histogram=dict(sorted(histogram.items())),
        seed=cfg.seed,
        mode=cfg.mode,
    )


def merge(a: SimSummary, b: SimSummary) -> SimSummary:
    """Combine two partial batches (same seed/mode) into one summary."""
    if (a.seed, a.mode) != (b.seed, b.mode):
        raise ValueError("can only merge summaries from the same batch")
    histogram = Counter(a.histogram)
    histogram.update(b.histogram)
    n = a.samples + b.samples
    total = sum(v * c for v, c in histogram.items())
    total_sq = sum(v * v * c for v, c in histogram.items())
    mean = total / n
    variance = (total_sq - total * total / n) / (n - 1) if n > 1 else 0.0
    return SimSummary(
        samples=n,
        mean=mean,
        sample_variance=variance,
        min=min(histogram),
        max=max(histogram),
        histogram=dict(sorted(histogram.items())),
        seed=a.seed,
        mode=a.mode,
    )


def export_histogram(summary: SimSummary, path) -> None:
    """Histogram CSV: header line, then (rounds, count) sorted by rounds."""
    lines = [f"# {HISTOGRAM_SCHEMA}", "rounds,count"]
    for rounds, count in sorted(summary.histogram.items()):
        lines.append(f"{rounds},{count}")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def summary_json(summary: SimSummary, start: GameState | None = None) -> dict:
    """Summary as a JSON-ready dict."""
    doc = {
        "schema": SUMMARY_SCHEMA,
        "samples": summary.samples,
        "mean": summary.mean,
        "variance": summary.sample_variance,
        "min": summary.min,
        "max": summary.max,
        "seed": summary.seed,
        "mode": summary.mode,
    }
    if start is not None:
        doc["start"] = render_state(start)
    return doc


def export_summary(summary: SimSummary, path, start: GameState | None = None) -> None:
    import json

    with open(path, "w", newline="") as fh:
        json.dump(summary_json(summary, start), fh, indent=2, sort_keys=True)
        fh.write("\n")

"""Seeded Monte Carlo: determinism contract, traces, string walks, exports."""

import pytest

from ringgame.core import ROOT, is_terminal, order, parse_state, successors, transition
from ringgame.rng import SplitMix64, stream
from ringgame.simulate import (
    SimConfig,
    SimSummary,
    export_histogram,
    merge,
    play_once,
    run_batch,
    string_walk,
    summary_json,
)


class TestStreams:
    def test_same_path_same_draws(self):
        a = [stream(42, 7).next64() for _ in range(5)]
        b = [stream(42, 7).next64() for _ in range(5)]
        assert a == b

    def test_different_replications_differ(self):
        assert stream(42, 0).next64() != stream(42, 1).next64()
        assert stream(42, 0).next64() != stream(43, 0).next64()

    def test_path_order_matters(self):
        assert stream(1, 2, 3).next64() != stream(1, 3, 2).next64()

    def test_below_bounds_and_rejects_bad_input(self):
        rng = stream(0, 0)
        for n in (1, 2, 3, 6):
            for _ in range(50):
                assert 0 <= rng.below(n) < n
        with pytest.raises(ValueError):
            rng.below(0)

    def test_below_one_consumes_nothing(self):
        a, b = stream(5, 5), stream(5, 5)
        a.below(1)
        assert a.next64() == b.next64()

    def test_random_unit_interval(self):
        rng = stream(3, 1)
        values = [rng.random() for _ in range(100)]
        assert all(0.0 <= v < 1.0 for v in values)


class TestPlayOnce:
    def test_terminal_start(self):
        rounds, trace = play_once(stream(0, 0), parse_state("111111|1,2"))
        assert rounds == 0
        assert trace == []

    def test_trace_is_a_legal_playthrough(self):
        for i in range(200):
            rounds, trace = play_once(stream(11, i), ROOT)
            assert trace[0] == ROOT
            assert len(trace) == rounds + 1
            assert is_terminal(trace[-1])
            for a, b in zip(trace, trace[1:]):
                assert b in successors(a)

    def test_rounds_bounded_by_order(self):
        start = parse_state("101000|1,3")
        for i in range(200):
            rounds, _ = play_once(stream(2, i), start)
            assert rounds >= order(start)

    def test_single_vacant_bit_ends_in_one_round_half_the_time(self):
        start = parse_state("111110|2,3")
        one_round = 0
        for i in range(1000):
            rounds, trace = play_once(stream(4, i), start)
            if rounds == 1:
                one_round += 1
                assert trace == [start, transition(start, 3)]
        assert 400 <= one_round <= 600


class TestRunBatch:
    def test_rejects_bad_config(self):
        with pytest.raises(ValueError):
            SimConfig(start=ROOT, samples=0)
        with pytest.raises(ValueError):
            SimConfig(start=ROOT, samples=10, mode="dice")

    def test_deterministic(self):
        cfg = SimConfig(start=ROOT, samples=500, seed=123)
        assert run_batch(cfg) == run_batch(cfg)

    def test_single_sample(self):
        summary = run_batch(SimConfig(start=ROOT, samples=1, seed=9))
        assert summary.mean == summary.min == summary.max
        assert summary.histogram == {summary.min: 1}
        assert summary.sample_variance == 0.0

    def test_histogram_sums_to_samples(self):
        summary = run_batch(SimConfig(start=ROOT, samples=800, seed=5))
        assert sum(summary.histogram.values()) == 800
        assert summary.min <= summary.mean <= summary.max

    def test_batch_matches_play_once(self):
        cfg = SimConfig(start=ROOT, samples=50, seed=77)
        summary = run_batch(cfg)
        rounds = [play_once(stream(77, i), ROOT)[0] for i in range(50)]
        assert summary.mean == sum(rounds) / 50
        assert summary.min == min(rounds) and summary.max == max(rounds)

    def test_support_starts_at_shortest_game(self):
        summary = run_batch(SimConfig(start=ROOT, samples=2000, seed=0))
        assert summary.min == 6

    def test_mean_near_exact_value(self):
        summary = run_batch(SimConfig(start=ROOT, samples=2000, seed=0))
        # 4 sigma of the exact variance 754/25
        assert abs(summary.mean - 12.4) < 4 * (30.16 / 2000) ** 0.5

    def test_merge_equals_one_big_batch(self):
        big = run_batch(SimConfig(start=ROOT, samples=300, seed=21))
        # same replication indices, aggregated in two chunks
        first = run_batch(SimConfig(start=ROOT, samples=200, seed=21))
        rest_hist: dict[int, int] = {}
        for i in range(200, 300):
            r, _ = play_once(stream(21, i), ROOT)
            rest_hist[r] = rest_hist.get(r, 0) + 1
        rest = SimSummary(
            samples=100,
            mean=sum(k * v for k, v in rest_hist.items()) / 100,
            sample_variance=0.0,
            min=min(rest_hist),
            max=max(rest_hist),
            histogram=dict(sorted(rest_hist.items())),
            seed=21,
            mode="game",
        )
        combined = merge(first, rest)
        assert combined.histogram == big.histogram
        assert combined.mean == big.mean
        assert combined.sample_variance == big.sample_variance


class TestStringWalk:
    def test_starts_with_a_and_never_repeats(self):
        for i in range(500):
            length, word = string_walk(stream(8, i))
            assert word[0] == "a"
            assert len(word) == length
            assert all(x != y for x, y in zip(word, word[1:]))

    def test_stops_exactly_when_all_pairs_seen(self):
        for i in range(200):
            _, word = string_walk(stream(13, i))
            pairs = set(zip(word, word[1:]))
            assert len(pairs) == 6
            shy = set(zip(word[:-2], word[1:-1]))
            assert len(shy) == 5  # the final character completes the last pair

    def test_length_is_rounds_plus_one_on_matched_streams(self):
        # the walk is the game seen through the bystander: with identical
        # draws, each replication's length is exactly rounds + 1
        for i in range(500):
            rounds, _ = play_once(stream(6, i), ROOT)
            length, _ = string_walk(stream(6, i))
            assert length == rounds + 1

    def test_word_is_the_relabelled_bystander_trace(self):
        # letter for player p is "abc"[3 - p]: order-reversing, so the
        # walk's low-bit branch matches the game's low-bit branch
        for i in range(100):
            _, trace = play_once(stream(31, i), ROOT)
            _, word = string_walk(stream(31, i))
            assert word == "".join("abc"[3 - s.bystander] for s in trace)

    def test_string_mode_batch(self):
        summary = run_batch(SimConfig(start=ROOT, samples=2000, seed=1, mode="string"))
        assert summary.mode == "string"
        assert summary.min >= 7
        assert abs(summary.mean - 13.4) < 4 * (30.16 / 2000) ** 0.5


class TestExport:
    def test_histogram_csv(self, tmp_path):
        summary = run_batch(SimConfig(start=ROOT, samples=100, seed=2))
        path = tmp_path / "hist.csv"
        export_histogram(summary, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "# ringgame-histogram/1"
        assert lines[1] == "rounds,count"
        rows = [line.split(",") for line in lines[2:]]
        assert sum(int(c) for _, c in rows) == 100
        values = [int(v) for v, _ in rows]
        assert values == sorted(values)
        assert values[0] == summary.min

    def test_histogram_deterministic(self, tmp_path):
        summary = run_batch(SimConfig(start=ROOT, samples=100, seed=2))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        export_histogram(summary, a)
        export_histogram(summary, b)
        assert a.read_bytes() == b.read_bytes()

    def test_summary_json_fields(self):
        summary = run_batch(SimConfig(start=ROOT, samples=10, seed=3))
        doc = summary_json(summary, ROOT)
        assert doc["schema"] == "ringgame-summary/1"
        assert doc["samples"] == 10
        assert doc["seed"] == 3
        assert doc["mode"] == "game"
        assert doc["start"] == "000000|1,2"
        assert set(doc) >= {"mean", "variance", "min", "max"}

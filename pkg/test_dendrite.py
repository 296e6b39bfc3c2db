"""Tests for the dendrite engine: inference, updates, op counts, snapshots, streaming"""

import itertools
import math

import numpy as np
import pytest

from dendrite import (
    AccountingMode, Dendrite, DendriteConfig, FeatureArray, OpCounters, StreamingSorter,
    count_ops, formula_counts, init_templates, load_snapshot
)


def random_dendrite(config: DendriteConfig, seed: int = 0) -> Dendrite:
    rng = np.random.default_rng(seed)
    raw = rng.integers(0, config.w_max * config.scale + 1, size=(config.p, config.m, config.n))
    return Dendrite.from_fixed_point(config, raw)


def random_stream(count: int, m: int = 6, n: int = 32, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).integers(1, n + 1, size=(count, m))


# Configuration

def test_config_defaults_follow_small_deviation_column():
    config = DendriteConfig()
    assert (config.w_max, config.w_base, config.capture, config.backoff, config.r) == (32, 28, 3, 2, 3)
    assert config.scale == 16
    assert DendriteConfig(search=0).scale == 1
    assert DendriteConfig(prob_search=True).scale == 1


@pytest.mark.parametrize("fields", [
    {"w_base": 32},
    {"w_base": 0},
    {"r": 4, "n": 8},
    {"search": 3.0},
    {"capture": 0},
    {"backoff": -1},
    {"search": 1 / 2048},
])
def test_config_rejects_invalid_values(fields):
    with pytest.raises(ValueError):
        DendriteConfig(**fields)


# infer

def test_infer_picks_the_heaviest_template():
    config = DendriteConfig(p=3, m=3, n=3, r=0)
    weights = np.zeros((3, 3, 3))
    x = [3, 1, 2]
    for i, addressed in enumerate([(4, 4, 4), (5, 5, 4), (5, 4, 4)]):
        for j, w in enumerate(addressed):
            weights[i, j, x[j] - 1] = w
    weights[0, 0, 0] = 20  # not addressed by x

    result = Dendrite(config, weights).infer(x)

    assert result.cid == 2
    assert result.winning_score == 14
    np.testing.assert_array_equal(result.scores, [12, 14, 13])


def test_infer_all_zero_weights_ties_to_first_cid():
    result = Dendrite(DendriteConfig()).infer([5, 9, 17, 17, 30, 1])
    assert result.cid == 1
    assert not result.scores.any()


def test_infer_similarity_window_reaches_nearby_values():
    config = DendriteConfig(p=2, m=1, n=8, r=2)
    weights = np.zeros((2, 1, 8))
    weights[0, 0, 5] = 5  # value 6
    weights[1, 0, 0] = 5  # value 1

    result = Dendrite(config, weights).infer([4])

    assert result.cid == 1
    np.testing.assert_array_equal(result.scores, [5, 0])


def test_infer_window_is_clamped_at_the_edges():
    config = DendriteConfig(p=1, m=1, n=8, r=2)
    dendrite = Dendrite(config, np.ones((1, 1, 8)))
    assert dendrite.infer([1]).winning_score == 3
    assert dendrite.infer([8]).winning_score == 3
    assert dendrite.infer([4]).winning_score == 5


@pytest.mark.parametrize("x", [[0, 1, 1, 1, 1, 1], [33, 1, 1, 1, 1, 1], [1, 1, 1], [1.5, 1, 1, 1, 1, 1]])
def test_infer_rejects_malformed_vectors(x):
    with pytest.raises(ValueError):
        Dendrite(DendriteConfig()).infer(x)


def test_infer_does_not_mutate_weights():
    dendrite = random_dendrite(DendriteConfig(p=4))
    before = dendrite.weights.copy()
    first = dendrite.infer([3, 7, 11, 15, 19, 23])
    second = dendrite.infer([3, 7, 11, 15, 19, 23])
    assert first.cid == second.cid
    np.testing.assert_array_equal(first.scores, second.scores)
    np.testing.assert_array_equal(dendrite.weights, before)


def test_infer_ties_resolve_to_lowest_cid():
    config = DendriteConfig(p=4, m=2, n=8, r=1)
    weights = np.zeros((4, 2, 8))
    weights[1, :, 2:5] = 6
    weights[2, :, 2:5] = 6
    weights[3, :, 2:5] = 5
    assert Dendrite(config, weights).infer([4, 4]).cid == 2


def test_infer_with_zero_radius_matches_plain_lookup():
    rng = np.random.default_rng(11)
    for _ in range(200):
        p, m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5)), int(rng.integers(2, 9))
        config = DendriteConfig(p=p, m=m, n=n, r=0)
        dendrite = random_dendrite(config, seed=int(rng.integers(1 << 30)))
        x = rng.integers(1, n + 1, size=m)

        values = dendrite.weight_values
        scores = [sum(values[i, j, x[j] - 1] for j in range(m)) for i in range(p)]
        best = max(scores)
        expected = next(i for i, s in enumerate(scores) if s == best) + 1

        result = dendrite.infer(x)
        assert result.cid == expected
        np.testing.assert_allclose(result.scores, scores)


# infer_multi

def test_infer_multi_with_one_value_per_feature_equals_infer():
    dendrite = random_dendrite(DendriteConfig(p=5), seed=3)
    for x in random_stream(20, seed=4):
        single = dendrite.infer(x)
        multi = dendrite.infer_multi(FeatureArray.from_vector(x))
        assert multi.cid == single.cid
        np.testing.assert_array_equal(multi.scores, single.scores)


def test_infer_multi_fully_active_scores_total_mass():
    config = DendriteConfig(p=4, m=3, n=8, r=1)
    dendrite = random_dendrite(config, seed=5)
    everything = FeatureArray(tuple(tuple(range(1, 9)) for _ in range(3)))

    result = dendrite.infer_multi(everything)

    mass = dendrite.weight_values.sum(axis=(1, 2))
    np.testing.assert_allclose(result.scores, mass)
    assert result.cid == int(np.argmax(mass)) + 1


def test_infer_multi_sums_disjoint_windows():
    config = DendriteConfig(p=3, m=1, n=16, r=1)
    dendrite = random_dendrite(config, seed=6)
    values = dendrite.weight_values

    result = dendrite.infer_multi(FeatureArray(((3, 10),)))

    expected = [sum(values[i, 0, k - 1] for k in (2, 3, 4, 9, 10, 11)) for i in range(3)]
    np.testing.assert_allclose(result.scores, expected)


def test_infer_multi_rejects_out_of_range_values():
    with pytest.raises(ValueError):
        Dendrite(DendriteConfig(m=1, n=8, r=1)).infer_multi(FeatureArray(((2, 9),)))


# update_winner

def test_update_winner_captures_addressed_and_backs_off_the_rest():
    config = DendriteConfig(p=2, m=3, n=3, r=0, capture=1, backoff=1)
    weights = np.random.default_rng(7).integers(0, 6, size=(2, 3, 3)).astype(float)
    dendrite = Dendrite(config, weights)
    x = [3, 1, 2]
    before_score = dendrite.infer(x).scores[0]

    captured, backed_off = dendrite.update_winner(x, 1)

    after = dendrite.weight_values
    addressed = np.zeros((3, 3), dtype=bool)
    addressed[[0, 1, 2], [2, 0, 1]] = True
    np.testing.assert_array_equal(after[0][addressed], weights[0][addressed] + 1)
    np.testing.assert_array_equal(after[0][~addressed], np.maximum(weights[0][~addressed] - 1, 0))
    np.testing.assert_array_equal(after[1], weights[1])
    assert dendrite.infer(x).scores[0] > before_score
    assert captured == 3
    assert backed_off == np.count_nonzero(weights[0][~addressed] > 0)


def test_update_winner_leaves_saturated_weights():
    config = DendriteConfig(p=1, m=1, n=8, r=0)
    weights = np.zeros((1, 1, 8))
    weights[0, 0, 3] = 32
    dendrite = Dendrite(config, weights)

    captured, _ = dendrite.update_winner([4], 1)

    assert dendrite.weight_values[0, 0, 3] == 32
    assert captured == 0


def test_update_winner_without_backoff_only_adds_capture():
    config = DendriteConfig(p=1, m=2, n=8, r=1, capture=3, backoff=0)
    weights = np.random.default_rng(8).integers(0, 21, size=(1, 2, 8)).astype(float)
    weights[0, 0, 4] = 32
    dendrite = Dendrite(config, weights)
    x = [5, 2]
    addressed = dendrite.window_mask(np.asarray(x))

    dendrite.update_winner(x, 1)

    after = dendrite.weight_values[0]
    np.testing.assert_array_equal(after[~addressed], weights[0][~addressed])
    below = np.count_nonzero(weights[0][addressed] < 32)
    assert after.sum() - weights[0].sum() == 3 * below


def test_update_winner_touches_only_the_winner():
    config = DendriteConfig(p=5)
    dendrite = random_dendrite(config, seed=9)
    rng = np.random.default_rng(10)
    for x in random_stream(50, seed=12):
        z = int(rng.integers(1, 6))
        before = dendrite.weights.copy()
        dendrite.update_winner(x, z)
        others = np.arange(5) != z - 1
        assert np.abs(dendrite.weights[others] - before[others]).sum() == 0


def test_update_winner_rejects_unknown_cid():
    with pytest.raises(ValueError):
        Dendrite(DendriteConfig(p=3)).update_winner([1] * 6, 4)


# update_search

def test_update_search_never_lowers_strong_weights():
    config = DendriteConfig(p=2, m=1, n=8, r=0)
    weights = np.zeros((2, 1, 8))
    weights[1, 0, 2] = 28
    weights[1, 0, 5] = 32
    dendrite = Dendrite(config, weights)

    dendrite.update_search([3], 1)
    dendrite.update_search([6], 1)

    assert dendrite.weight_values[1, 0, 2] == 28
    assert dendrite.weight_values[1, 0, 5] == 32


def test_update_search_accumulates_sixteenths_exactly():
    config = DendriteConfig(p=2, m=1, n=8, r=0)
    dendrite = Dendrite(config)

    for _ in range(16):
        dendrite.update_search([3], 1)

    assert dendrite.weight_values[1, 0, 2] == 1.0
    assert dendrite.weights[1, 0, 2] == 16
    assert not dendrite.weights[0].any()


@pytest.mark.parametrize("prob_search", [False, True])
def test_update_search_is_monotone_and_capped(prob_search):
    config = DendriteConfig(p=4, m=3, n=8, r=1, prob_search=prob_search, search_probability=0.5)
    dendrite = random_dendrite(config, seed=13)
    ceiling = config.w_base * config.scale
    rng = np.random.default_rng(14)
    for x in random_stream(100, m=3, n=8, seed=15):
        before = dendrite.weights.copy()
        dendrite.update_search(x, int(rng.integers(1, 5)))
        assert np.all(dendrite.weights >= before)
        assert np.all(dendrite.weights <= np.maximum(before, ceiling))


def test_probabilistic_search_uses_integer_steps():
    config = DendriteConfig(p=2, m=6, n=32, prob_search=True, search_probability=1.0)
    dendrite = Dendrite(config)

    added = dendrite.update_search([10] * 6, 1)

    assert added == 6 * 7
    assert set(np.unique(dendrite.weight_values[1])) == {0.0, 1.0}


def test_probabilistic_search_draws_from_the_given_source():
    config = DendriteConfig(p=3, prob_search=True)
    first, second = Dendrite(config), Dendrite(config)
    for x in random_stream(40, seed=16):
        first.update_search(x, 1, np.random.default_rng(99))
        second.update_search(x, 1, np.random.default_rng(99))
    np.testing.assert_array_equal(first.weights, second.weights)


# step

def test_step_repeats_the_same_cid_for_the_same_input():
    config = DendriteConfig(p=3, m=2)
    dendrite = init_templates([[5, 5], [16, 16], [27, 27]], config)
    x = [5, 5]

    scores = [dendrite.infer(x).winning_score]
    cids = []
    for _ in range(2):
        cids.append(dendrite.step(x))
        scores.append(dendrite.infer(x).scores[cids[-1] - 1])

    assert cids == [1, 1]
    assert scores == sorted(scores)


def test_step_saturates_after_ceil_wmax_over_capture():
    config = DendriteConfig(p=1, m=2, n=8, r=1, capture=5, backoff=0, search=0)
    dendrite = Dendrite(config)
    x = [4, 4]
    addressed = dendrite.window_mask(np.asarray(x))
    steps = math.ceil(config.w_max / config.capture)

    for _ in range(steps - 1):
        dendrite.step(x)
    assert not np.all(dendrite.weight_values[0][addressed] == config.w_max)

    dendrite.step(x)
    assert np.all(dendrite.weight_values[0][addressed] == config.w_max)


@pytest.mark.parametrize("fields", [{}, {"capture": 9, "backoff": 7}, {"prob_search": True}])
def test_step_keeps_weights_in_bounds(fields):
    config = DendriteConfig(p=5, **fields)
    dendrite = init_templates(random_stream(5, seed=17), config)
    for x in random_stream(500, seed=18):
        dendrite.step(x)
        assert dendrite.weights.min() >= 0
        assert dendrite.weights.max() <= config.w_max * config.scale


def test_step_is_deterministic():
    config = DendriteConfig(p=4, prob_search=True, seed=7)
    stream = random_stream(300, seed=19)
    runs = []
    for _ in range(2):
        dendrite = init_templates(stream[:4], config)
        cids = [dendrite.step(x) for x in stream]
        runs.append((cids, dendrite.weights))
    assert runs[0][0] == runs[1][0]
    np.testing.assert_array_equal(runs[0][1], runs[1][1])


def test_backoff_can_widen_the_first_winner_through_ties():
    # Backoff 1 hands x=[2] to template 2, whose backoff zeroes positions 3 and 4;
    # those inputs then tie at 0 and fall to CId 1.
    won = {}
    for backoff in (0, 1):
        config = DendriteConfig(p=2, m=1, n=4, r=0, capture=1, backoff=backoff, search=0)
        dendrite = Dendrite(config, np.array([[[2, 1, 0, 0]], [[0, 1, 1, 1]]], dtype=float))
        assert dendrite.step([1]) == 1
        assert dendrite.step([2]) == (1 if backoff == 0 else 2)
        won[backoff] = [dendrite.infer([v]).cid for v in range(1, 5)]

    assert won[0] == [1, 1, 2, 2]
    assert won[1] == [1, 2, 1, 1]


def strict_wins(dendrite: Dendrite, cid: int) -> int:
    """Inputs on which template cid scores strictly above every other template"""
    n, m = dendrite.config.n, dendrite.config.m
    wins = 0
    for x in itertools.product(range(1, n + 1), repeat=m):
        scores = dendrite.infer(list(x)).scores
        wins += bool(scores[cid - 1] > np.delete(scores, cid - 1).max())
    return wins


def test_larger_backoff_tends_to_narrow_the_first_winner():
    widths = {0: [], 9: []}
    for seed in range(32):
        rng = np.random.default_rng(seed)
        initial = rng.integers(0, 9, size=(2, 2, 8)).astype(float)
        centres = rng.integers(2, 8, size=(2, 2))
        training = [np.clip(centres[i % 2] + rng.integers(-1, 2, size=2), 1, 8) for i in range(12)]
        for backoff in widths:
            config = DendriteConfig(p=2, m=2, n=8, r=1, capture=3, backoff=backoff, search=0)
            dendrite = Dendrite(config, initial.copy())
            first = dendrite.step(training[0])
            for x in training[1:]:
                dendrite.step(x)
            widths[backoff].append(strict_wins(dendrite, first))

    assert np.mean(widths[9]) < np.mean(widths[0])


# init_templates

def test_init_templates_stamps_base_weight_over_the_window():
    dendrite = init_templates([[10]], DendriteConfig(p=1, m=1, n=32, r=3))
    expected = np.zeros(32)
    expected[6:13] = 28
    np.testing.assert_array_equal(dendrite.weight_values[0, 0], expected)


def test_init_templates_zero_radius_stamps_one_value_per_feature():
    config = DendriteConfig(p=4, r=0)
    dendrite = init_templates(random_stream(4, seed=20), config)
    assert np.all(np.count_nonzero(dendrite.weights, axis=(1, 2)) == config.m)


def test_init_templates_disjoint_centroids_win_their_own_templates():
    rng = np.random.default_rng(21)
    columns = [4 + 8 * rng.permutation(4) for _ in range(6)]
    centroids = np.stack(columns, axis=1)
    dendrite = init_templates(centroids, DendriteConfig(p=4))
    for i, centroid in enumerate(centroids):
        assert dendrite.infer(centroid).cid == i + 1


def test_init_templates_rejects_wrong_centroid_count():
    with pytest.raises(ValueError):
        init_templates(random_stream(3, seed=22), DendriteConfig(p=4))


# count_ops

def test_formula_counts_at_default_settings():
    counts = formula_counts(DendriteConfig(p=8, m=6, n=32, r=3))
    assert (counts.inference, counts.capture, counts.backoff, counts.search) == (328, 42, 150, 294)
    assert counts.total == 814
    assert count_ops(DendriteConfig(), AccountingMode.FORMULA) == counts


def test_formula_counts_single_template_has_no_search():
    assert formula_counts(DendriteConfig(p=1)).search == 0


def test_formula_counters_scale_with_steps():
    config = DendriteConfig(p=8)
    dendrite = init_templates(random_stream(8, seed=23), config)
    counters = OpCounters()
    for x in random_stream(25, seed=24):
        dendrite.step(x, counters)
    assert counters.steps == 25
    assert (counters.inference_adds, counters.capture_adds, counters.backoff_adds, counters.search_adds) == (
        25 * 328, 25 * 42, 25 * 150, 25 * 294)


def test_bypass_skips_zero_addends_on_a_fresh_dendrite():
    counts = count_ops(DendriteConfig(), AccountingMode.BYPASS, features=[[10] * 6])
    assert counts.inference == 0


@pytest.mark.parametrize("mode", [AccountingMode.BYPASS, AccountingMode.BYPASS_PROBABILISTIC])
def test_bypass_counts_never_exceed_the_formula(mode):
    config = DendriteConfig(p=8)
    stream = random_stream(400, seed=25)
    measured = count_ops(config, mode, stream, init_templates(stream[:8], config))
    formula = formula_counts(config)
    for got, limit in zip(measured.as_row(), formula.as_row()):
        assert got <= limit


def test_bypass_needs_features():
    with pytest.raises(ValueError):
        count_ops(DendriteConfig(), AccountingMode.BYPASS)


# snapshots and streaming

def test_snapshot_restores_weights_exactly(tmp_path):
    config = DendriteConfig(p=4, seed=3)
    dendrite = init_templates(random_stream(4, seed=26), config)
    for x in random_stream(100, seed=27):
        dendrite.step(x)

    path = dendrite.snapshot(tmp_path / "dendrite.npz")
    restored = load_snapshot(path)

    assert restored.config == config
    assert restored.weights.dtype == np.int64
    np.testing.assert_array_equal(restored.weights, dendrite.weights)


def test_snapshot_rejects_other_versions(tmp_path):
    path = tmp_path / "future.npz"
    with open(path, "wb") as f:
        np.savez(f, format_version=np.int64(99), config=np.array(DendriteConfig().model_dump_json()),
                 weights=np.zeros((8, 6, 32), dtype=np.int64))
    with pytest.raises(ValueError):
        load_snapshot(path)


def test_streaming_sorter_matches_direct_steps():
    config = DendriteConfig(p=4)
    stream = random_stream(300, seed=28)
    direct = init_templates(stream[:4], config)
    expected = [direct.step(x) for x in stream]

    counters = OpCounters(mode=AccountingMode.BYPASS)
    sorter = StreamingSorter(init_templates(stream[:4], config), counters)
    cids = sorter.sort(stream)

    np.testing.assert_array_equal(cids, expected)
    np.testing.assert_array_equal(sorter.dendrite.weights, direct.weights)
    assert counters.steps == 300


def test_streaming_sorter_reports_bad_spikes():
    sorter = StreamingSorter(Dendrite(DendriteConfig()))
    with pytest.raises(ValueError):
        sorter.sort([[1] * 6, [0] * 6, [2] * 6])


def test_streaming_sorter_surfaces_any_step_failure(monkeypatch):
    dendrite = Dendrite(DendriteConfig())
    calls = []

    def failing_step(features, counters=None):
        calls.append(features)
        if len(calls) == 2:
            raise RuntimeError("weights corrupted")
        return 1

    monkeypatch.setattr(dendrite, "step", failing_step)
    sorter = StreamingSorter(dendrite)
    with pytest.raises(RuntimeError, match="weights corrupted"):
        sorter.sort(random_stream(5, seed=29))
    assert not sorter.sorter_thread.is_alive()
    assert len(calls) == 2


def test_bypass_mode_runs_deterministic_search_even_from_a_probabilistic_config():
    stream = random_stream(200, seed=30)
    deterministic = DendriteConfig(p=8)
    probabilistic = DendriteConfig(p=8, prob_search=True)
    from_probabilistic = count_ops(probabilistic, AccountingMode.BYPASS, stream,
                                   init_templates(stream[:8], probabilistic))
    from_deterministic = count_ops(deterministic, AccountingMode.BYPASS, stream,
                                   init_templates(stream[:8], deterministic))
    assert from_probabilistic == from_deterministic

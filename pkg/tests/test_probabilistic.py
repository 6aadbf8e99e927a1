import random

import numpy as np
import pytest

from conftest import random_graph
from seedfix.core import SeedAssignment, TfpError, TfpInstance, TournamentGraph, is_valid_bracket, replay_bracket
from seedfix.counting import count_valid_winning_brackets
from seedfix.probabilistic import (
    CSV_HEADER,
    Model,
    RandomModelConfig,
    embed_seeds,
    fix_nonseeded,
    fix_seeded_random,
    matching_probability_experiment,
    run_trial,
    sample_tournament,
    trial_seed,
)


def test_sampling_is_reproducible():
    cfg = RandomModelConfig(Model.UNIFORM, 16, rng_seed=7)
    assert sample_tournament(cfg) == sample_tournament(cfg)
    assert sample_tournament(cfg) != sample_tournament(RandomModelConfig(Model.UNIFORM, 16, rng_seed=8))


def test_condorcet_extremes():
    g = sample_tournament(RandomModelConfig(Model.CONDORCET, 8, p=0.0))
    assert g == TournamentGraph.from_order(range(8))


def test_condorcet_frequency():
    n, p = 32, 0.2
    upsets = sum(
        sample_tournament(RandomModelConfig(Model.CONDORCET, n, p, rng_seed=k)).adj[np.triu_indices(n, 1)[1], np.triu_indices(n, 1)[0]].sum()
        for k in range(20)
    )
    pairs = 20 * n * (n - 1) // 2
    assert abs(upsets / pairs - p) < 0.02


def test_generalized_validation():
    probs = np.full((4, 4), 0.5)
    RandomModelConfig(Model.GENERALIZED, 4, 0.3, probs)
    probs[0, 1] = 0.9
    with pytest.raises(TfpError):
        RandomModelConfig(Model.GENERALIZED, 4, 0.3, probs)
    with pytest.raises(TfpError):
        RandomModelConfig(Model.UNIFORM, 4, p=0.7)


def test_trial_seeds_differ():
    assert len({trial_seed(0, t) for t in range(100)}) == 100


@pytest.mark.parametrize("n", [4, 8])
def test_nonseeded_never_lies(n):
    rng = random.Random(n)
    for _ in range(40):
        g = random_graph(n, rng)
        x = rng.randrange(n)
        bracket = fix_nonseeded(g, x, rng=rng, restarts=5, exact_max_n=0)
        truth = count_valid_winning_brackets(TfpInstance(g, SeedAssignment(()), x))[x] > 0
        if bracket is not None:
            assert truth and replay_bracket(bracket, g)[0] == x
        exact = fix_nonseeded(g, x, rng=rng, restarts=0, exact_max_n=16)
        assert (exact is not None) == truth


@pytest.mark.parametrize("n, s", [(8, 2), (8, 4), (16, 4), (16, 8), (32, 16)])
def test_seeded_fixer_outputs_verify(n, s):
    rng = random.Random(n + s)
    found = 0
    for _ in range(15):
        g = random_graph(n, rng)
        seeds = SeedAssignment(tuple(rng.sample(range(n), s)))
        for x in range(0, n, 3):
            inst = TfpInstance(g, seeds, x)
            b = fix_seeded_random(inst, rng, restarts=20, exact_max_n=8)
            if b is not None:
                found += 1
                assert replay_bracket(b, g)[0] == x and is_valid_bracket(b, seeds)
                if n == 8:
                    assert count_valid_winning_brackets(inst)[x] > 0
    assert found > 0


def test_embedding_respects_sections():
    rng = random.Random(2)
    g = sample_tournament(RandomModelConfig(Model.UNIFORM, 32, rng_seed=3))
    seeds = SeedAssignment(tuple(range(16, 32)))
    hits = 0
    for x in range(16):
        inner = fix_nonseeded(g, x, list(range(16)), rng, restarts=50, exact_max_n=0)
        if inner is None:
            continue
        bracket, stages = embed_seeds(TfpInstance(g, seeds, x), inner)
        if bracket is not None:
            hits += 1
            assert is_valid_bracket(bracket, seeds) and replay_bracket(bracket, g)[0] == x
            # the inner bracket sits on the odd leaves and seeds open against it
            assert tuple(bracket.leaves[1::2]) == inner.leaves
            assert all(p >= 16 for p in bracket.leaves[0::2])
    assert hits > 0


def test_matching_experiment():
    exp = matching_probability_experiment(4, 0.05, 2000, rng_seed=1)
    assert exp.hypothesis_holds and exp.frequency >= exp.bound - 3 * exp.std_error
    assert matching_probability_experiment(3, 1.0, 10).frequency == 0.0
    assert matching_probability_experiment(3, 0.0, 10).frequency == 1.0
    # a lone cell present with probability 0.7
    lone = matching_probability_experiment(1, 0.3, 10000, rng_seed=2)
    assert abs(lone.frequency - 0.7) < 4 * lone.std_error


def test_run_trial_rows():
    rows = run_trial(16, 4, "UNIFORM", 0.5, trial=3, rng_seed=9, restarts=10)
    assert len(rows) == 16 and all(len(r) == len(CSV_HEADER) for r in rows)
    assert rows == run_trial(16, 4, Model.UNIFORM, 0.5, trial=3, rng_seed=9, restarts=10)
    gen = run_trial(8, 2, "GENERALIZED", 0.2, trial=0, rng_seed=1, restarts=5)
    assert {r[2] for r in gen} == {"GENERALIZED"}

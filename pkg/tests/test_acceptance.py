"""Acceptance criteria, one test each.  Every test prints a single line

    [criterion N] PASS|FAIL  <measurements>

to the terminal (also when output is captured).  Run directly with
``python tests/test_acceptance.py`` to get just those lines.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import all_tournaments, random_graph  # noqa: E402
from seedfix.core import SeedAssignment, TfpInstance, is_valid_bracket, replay_bracket  # noqa: E402
from seedfix.counting import (  # noqa: E402
    FAST,
    NAIVE,
    SetFunction,
    count_valid_winning_brackets,
    popcounts,
    subset_convolution,
)
from seedfix.instances import (  # noqa: E402
    random_king_instance,
    random_superking_instance,
    random_ultraking_instance,
)
from seedfix.oracle import count_winners_bruteforce  # noqa: E402
from seedfix.probabilistic import matching_probability_experiment, run_trial  # noqa: E402
from seedfix.reductions import audit, reduce_to_seeded_constant, reduce_to_seeded_half  # noqa: E402
from seedfix.structural import (  # noqa: E402
    MIN_N,
    Counterexample,
    build_special_tournament,
    fix_king_two_seeds,
    fix_superking_two_seeds,
    fix_ultraking,
    make_counterexample,
)

SEED = 20240611


def report(number: int, ok: bool, detail: str) -> None:
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'}  {detail}"
    capman = _capture_manager()
    if capman is None:
        print(line, flush=True)
    else:
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)


_CONFIG = None


def _capture_manager():
    return None if _CONFIG is None else _CONFIG.pluginmanager.getplugin("capturemanager")


@pytest.fixture(autouse=True)
def _grab_config(pytestconfig):
    global _CONFIG
    _CONFIG = pytestconfig
    yield


def test_criterion_1_oracle_dp_exactness():
    start = time.perf_counter()
    checked = mismatches = 0
    seedings = [()] + list(itertools.permutations(range(4), 2))
    for g in all_tournaments(4):
        for seeded in seedings:
            inst = TfpInstance(g, SeedAssignment(seeded), 0)
            # the count vector covers every target at once
            checked += 1
            mismatches += count_valid_winning_brackets(inst) != count_winners_bruteforce(inst)
    rng = random.Random(SEED)
    for _ in range(500):
        g = random_graph(8, rng)
        s = rng.choice((0, 2, 4))
        inst = TfpInstance(g, SeedAssignment(tuple(rng.sample(range(8), s))), 0)
        checked += 1
        mismatches += count_valid_winning_brackets(inst) != count_winners_bruteforce(inst)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 300
    report(1, ok, f"{checked} instances ({64 * len(seedings)} at n=4, 500 at n=8), {mismatches} mismatches, {elapsed:.1f}s")
    assert ok


FIXERS = {
    "king": (fix_king_two_seeds, random_king_instance),
    "superking": (fix_superking_two_seeds, random_superking_instance),
    "ultraking": (fix_ultraking, random_ultraking_instance),
}


@pytest.mark.parametrize("name", list(FIXERS))
def test_criterion_2_structural_fixers(name):
    fixer, make = FIXERS[name]
    rng = random.Random(SEED)
    start = time.perf_counter()
    good = total = 0
    for n in (8, 16, 32, 64):
        for _ in range(250):
            inst = make(n, rng)
            bracket = fixer(inst, random.Random(rng.random()))
            total += 1
            good += replay_bracket(bracket, inst.graph)[0] == inst.target and is_valid_bracket(bracket, inst.seeds)
    elapsed = time.perf_counter() - start
    ok = good == total and elapsed < 60
    report(2, ok, f"{name}: {good}/{total} verified, {elapsed:.1f}s")
    assert ok


def test_criterion_3_negative_suite():
    results = []
    for kind in Counterexample:
        n = max(MIN_N[kind], 8)
        inst = make_counterexample(kind, n)
        results.append((kind.value, n, count_valid_winning_brackets(inst)[inst.target]))
    tight, _ = build_special_tournament(8, 4, ("x", "w"))
    tight_count = count_valid_winning_brackets(tight)[tight.target]
    loose, _ = build_special_tournament(8, 5, ("x", "w"))
    bracket = fix_king_two_seeds(loose)
    loose_ok = replay_bracket(bracket, loose.graph)[0] == loose.target and is_valid_bracket(bracket, loose.seeds)
    ok = all(c == 0 for *_, c in results) and tight_count == 0 and loose_ok
    summary = ", ".join(f"{k}@n={n}:{c}" for k, n, c in results)
    report(3, ok, f"{summary}; tight outdeg 4 count {tight_count}; outdeg 5 fixed {loose_ok}")
    assert ok


def test_criterion_4_base_case():
    # x = 0, w = 1, y = 2, z = 3, seeds on x and z
    inst, part = build_special_tournament(4, 2, ("x", "z"))
    bracket = fix_king_two_seeds(inst)
    pairs = {frozenset(bracket.leaves[:2]), frozenset(bracket.leaves[2:])}
    expected = {frozenset({0, 1}), frozenset({part.y, 3})}
    winner = replay_bracket(bracket, inst.graph)[0]
    ok = pairs == expected and winner == 0 and is_valid_bracket(bracket, inst.seeds)
    report(4, ok, f"bracket {bracket.leaves}, winner {winner}")
    assert ok


def test_criterion_5_randomized_seeded_fixer():
    start = time.perf_counter()
    hits = total = 0
    for trial in range(200):
        # run_trial replays and re-validates every success itself
        rows = run_trial(64, 32, "UNIFORM", 0.5, trial, SEED)
        hits += sum(r[6] for r in rows)
        total += len(rows)
    elapsed = time.perf_counter() - start
    rate = hits / total
    ok = rate >= 0.95 and elapsed < 600
    report(5, ok, f"{hits}/{total} = {rate:.4f} verified successes (need >= 0.95), {elapsed:.1f}s")
    assert ok


def test_criterion_6_matching_bound():
    start = time.perf_counter()
    parts, ok = [], True
    for m, delta in ((4, 0.05), (8, 0.2), (16, 0.4)):
        exp = matching_probability_experiment(m, delta, 10_000, rng_seed=SEED)
        floor = exp.bound - 3 * exp.std_error
        ok &= exp.frequency >= floor
        parts.append(f"(m={m}, d={delta}) freq {exp.frequency:.4f} >= {floor:.4f} [hypothesis {'holds' if exp.hypothesis_holds else 'fails'}]")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 60
    report(6, ok, "; ".join(parts) + f"; {elapsed:.1f}s")
    assert ok


def test_criterion_7_fast_equals_naive():
    rng = np.random.default_rng(SEED)
    bad = 0
    for n in (6, 8, 10, 12):
        pc = popcounts(n)
        for _ in range(100):
            rf = int(rng.integers(0, n + 1))
            rg = int(rng.integers(0, n - rf + 1))
            f = SetFunction(n, rf, np.where(pc == rf, rng.integers(-1000, 1001, 1 << n), 0))
            g = SetFunction(n, rg, np.where(pc == rg, rng.integers(-1000, 1001, 1 << n), 0))
            bad += subset_convolution(f, g, FAST) != subset_convolution(f, g, NAIVE)
    ok = bad == 0
    report(7, ok, f"400 rank pairs over n in {{6, 8, 10, 12}}, {bad} disagreements")
    assert ok


def test_criterion_8_reduction_equivalence():
    start = time.perf_counter()
    disagreements = {"half": 0, "const s=2": 0, "const s=4": 0}
    broken = 0
    builders = {
        "half": reduce_to_seeded_half,
        "const s=2": lambda src: reduce_to_seeded_constant(src, 2),
        "const s=4": lambda src: reduce_to_seeded_constant(src, 4),
    }
    for g in all_tournaments(4):
        truth = count_valid_winning_brackets(TfpInstance(g, SeedAssignment(()), 0))
        for x in range(4):
            src = TfpInstance(g, SeedAssignment(()), x)
            for name, build in builders.items():
                out = build(src)
                broken += bool(audit(out))
                wins = count_valid_winning_brackets(out.instance)[x] > 0
                disagreements[name] += wins != (truth[x] > 0)
    elapsed = time.perf_counter() - start
    ok = not any(disagreements.values()) and broken == 0
    detail = ", ".join(f"{k}: {v}" for k, v in disagreements.items())
    report(8, ok, f"256 sources per reduction, disagreements {detail}, audit failures {broken}, {elapsed:.1f}s")
    assert ok


def test_criterion_9_performance():
    rng = random.Random(SEED)
    g = random_graph(16, rng)
    timings = {}
    for s in (0, 2, 8):
        inst = TfpInstance(g, SeedAssignment(tuple(rng.sample(range(16), s))), 0)
        t = time.perf_counter()
        count_valid_winning_brackets(inst)
        timings[f"dp16 s={s}"] = time.perf_counter() - t
    inst8 = TfpInstance(random_graph(8, rng), SeedAssignment(()), 0)
    t = time.perf_counter()
    count_winners_bruteforce(inst8)
    timings["oracle8"] = time.perf_counter() - t
    nprng = np.random.default_rng(SEED)
    pc = popcounts(16)
    f = SetFunction(16, 8, np.where(pc == 8, nprng.integers(0, 100, 1 << 16), 0))
    h = SetFunction(16, 8, np.where(pc == 8, nprng.integers(0, 100, 1 << 16), 0))
    t = time.perf_counter()
    subset_convolution(f, h, FAST)
    timings["fast16"] = time.perf_counter() - t
    limits = {"oracle8": 1.0, "fast16": 5.0}
    ok = all(v < limits.get(k, 60.0) for k, v in timings.items())
    report(9, ok, ", ".join(f"{k} {v:.2f}s" for k, v in timings.items()))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))

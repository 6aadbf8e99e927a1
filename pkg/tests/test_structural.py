import random

import pytest

from seedfix.core import (
    Bracket,
    PreconditionError,
    SeedAssignment,
    TfpError,
    TfpInstance,
    TournamentGraph,
    is_valid_bracket,
    replay_bracket,
)
from seedfix.counting import count_valid_winning_brackets
from seedfix.instances import random_king_instance, random_superking_instance, random_ultraking_instance
from seedfix.structural import (
    MIN_N,
    Counterexample,
    build_special_tournament,
    classify_player,
    fix_king_two_seeds,
    fix_superking_two_seeds,
    fix_ultraking,
    make_counterexample,
    partition,
)


def check(bracket, inst):
    assert replay_bracket(bracket, inst.graph)[0] == inst.target
    assert is_valid_bracket(bracket, inst.seeds)


FIXERS = [
    (fix_king_two_seeds, random_king_instance),
    (fix_superking_two_seeds, random_superking_instance),
    (fix_ultraking, random_ultraking_instance),
]


@pytest.mark.parametrize("fixer, make", FIXERS, ids=["king", "superking", "ultraking"])
@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_fixers_on_random_instances(fixer, make, n):
    rng = random.Random(n)
    for _ in range(60):
        inst = make(n, rng)
        check(fixer(inst), inst)
        check(fixer(inst, random.Random(rng.random())), inst)


def test_classification():
    g = TournamentGraph.from_order(range(8))
    prof = classify_player(g, 0)
    assert prof.is_king and prof.is_superking and prof.is_ultraking and prof.outdegree == 7
    inst, part = build_special_tournament(8, 4, ("x", "w"))
    prof = classify_player(inst.graph, 0)
    # B is beaten only by y
    assert prof.is_king and not prof.is_superking and prof.outdegree == 4
    assert part.special and part.y == 4
    assert partition(inst.graph, 0).y == 4
    assert not classify_player(g, 7).is_king


def test_preconditions():
    inst, _ = build_special_tournament(8, 4, ("x", "w"))
    with pytest.raises(PreconditionError):
        fix_king_two_seeds(inst)
    with pytest.raises(PreconditionError):
        fix_superking_two_seeds(inst)
    with pytest.raises(PreconditionError):
        fix_ultraking(inst)
    unseeded, _ = build_special_tournament(8, 5, ("w", "z"))
    with pytest.raises(PreconditionError):
        fix_king_two_seeds(unseeded)


@pytest.mark.parametrize("kind", list(Counterexample))
def test_counterexamples_have_no_winning_bracket(kind):
    for n in (MIN_N[kind], 2 * MIN_N[kind]):
        inst = make_counterexample(kind, n)
        assert count_valid_winning_brackets(inst)[inst.target] == 0


def test_counterexample_too_small():
    with pytest.raises(TfpError):
        make_counterexample(Counterexample.SUPERKING_S4, 4)


def test_king_tightness_n8():
    tight, _ = build_special_tournament(8, 4, ("x", "w"))
    assert count_valid_winning_brackets(tight)[0] == 0
    loose, _ = build_special_tournament(8, 5, ("x", "w"))
    check(fix_king_two_seeds(loose), loose)
    assert count_valid_winning_brackets(loose)[0] > 0


def test_base_case_pairing():
    # x = 0, A = {1, 2} with y = 2, B = {3}; seeds on x and z
    inst, part = build_special_tournament(4, 2, ("x", "z"))
    bracket = fix_king_two_seeds(inst)
    check(bracket, inst)
    pairs = {frozenset(bracket.leaves[:2]), frozenset(bracket.leaves[2:])}
    assert pairs == {frozenset({0, 1}), frozenset({2, 3})}


def test_n2_trivial():
    g = TournamentGraph.from_order([1, 0])
    inst = TfpInstance(g, SeedAssignment(()), 1)
    assert fix_ultraking(inst) == Bracket((1, 0)) or set(fix_ultraking(inst).leaves) == {0, 1}

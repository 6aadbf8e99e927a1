import random

import pytest

from conftest import all_tournaments, random_graph
from seedfix.core import SeedAssignment, TfpError, TfpInstance, is_valid_bracket
from seedfix.counting import count_valid_winning_brackets
from seedfix.reductions import APEX, audit, reduce_to_seeded_constant, reduce_to_seeded_half


def test_half_reduction_equivalence_n4():
    for g in all_tournaments(4):
        counts = count_valid_winning_brackets(TfpInstance(g, SeedAssignment(()), 0))
        for x in range(4):
            out = reduce_to_seeded_half(TfpInstance(g, SeedAssignment(()), x))
            assert audit(out) == []
            assert (count_valid_winning_brackets(out.instance)[x] > 0) == (counts[x] > 0)


def test_constant_reduction_equivalence_n4_s2():
    for g in all_tournaments(4):
        counts = count_valid_winning_brackets(TfpInstance(g, SeedAssignment(()), 0))
        for x in range(4):
            out = reduce_to_seeded_constant(TfpInstance(g, SeedAssignment(()), x), 2)
            assert audit(out) == []
            assert (count_valid_winning_brackets(out.instance)[x] > 0) == (counts[x] > 0)


def test_half_padding_meets_originals_first():
    """In any valid bracket each original player opens against a padding player."""
    src = TfpInstance(random_graph(4, random.Random(3)), SeedAssignment(()), 0)
    out = reduce_to_seeded_half(src)
    from seedfix.oracle import enumerate_valid_brackets

    for b in enumerate_valid_brackets(out.instance):
        for a, c in zip(b.leaves[::2], b.leaves[1::2]):
            assert (a < 4) != (c < 4)


@pytest.mark.parametrize("n, s", [(4, 2), (4, 4), (2, 8), (8, 4)])
def test_constant_shapes(n, s):
    src = TfpInstance(random_graph(n, random.Random(n * s)), SeedAssignment(()), n - 1)
    out = reduce_to_seeded_constant(src, s, random.Random(1))
    inst = out.instance
    assert inst.n == n * s and inst.seeds.s == s
    assert audit(out) == []
    assert inst.seeds.seeded[0] == src.target
    apexes = out.members(APEX)
    assert inst.seeds.seeded[1] == apexes[-1]
    assert set(apexes) <= set(inst.seeds.seeded)


def test_ladder_n4_s4():
    src = TfpInstance(random_graph(4, random.Random(0)), SeedAssignment(()), 0)
    out = reduce_to_seeded_constant(src, 4)
    # x, x_2, x_1, then one fresh member of V_2
    assert out.instance.seeds.seeded == (0, 8, 4, 9)


def test_rejects_seeded_source():
    src = TfpInstance(random_graph(8, random.Random(0)), SeedAssignment((0, 1)), 0)
    with pytest.raises(TfpError):
        reduce_to_seeded_half(src)
    with pytest.raises(TfpError):
        reduce_to_seeded_constant(TfpInstance(src.graph, SeedAssignment(()), 0), 3)


def test_audit_flags_broken_gadget():
    src = TfpInstance(random_graph(4, random.Random(0)), SeedAssignment(()), 0)
    out = reduce_to_seeded_constant(src, 2)
    adj = out.instance.graph.adj.copy()
    adj[4, 0], adj[0, 4] = True, False
    from dataclasses import replace

    from seedfix.core import TournamentGraph

    broken = replace(out, instance=TfpInstance(TournamentGraph(adj), out.instance.seeds, 0))
    assert audit(broken)

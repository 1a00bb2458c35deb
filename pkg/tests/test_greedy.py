import pytest
from hypothesis import given, settings

from conftest import related_instances
from oracles import greedy_by_definition
from mcsp.blocks import enumerate_blocks
from mcsp.core import CommonBlock, Instance
from mcsp.greedy import greedy_partition, greedy_select
from mcsp.solver import brute_force_optimal


def test_example_trace(ex):
    chosen = greedy_select(ex.n, enumerate_blocks(ex))
    assert chosen == [CommonBlock("ACT", 3, 1), CommonBlock("AG", 1, 4), CommonBlock("G", 6, 6)]
    assert len(greedy_partition(ex)) == 3


@pytest.mark.parametrize("s1,s2,size", [("AGGC", "AGGC", 1), ("AB", "BA", 2), ("A", "A", 1)])
def test_small_cases(s1, s2, size):
    p = greedy_partition(Instance(s1, s2))
    assert p.is_complete and len(p) == size


@settings(max_examples=150, deadline=None)
@given(related_instances(max_n=12))
def test_greedy_bounds_and_rule(inst):
    B = enumerate_blocks(inst)
    p = greedy_partition(inst, B)
    assert p.is_complete
    assert brute_force_optimal(inst) <= len(p) <= inst.n
    # the one-pass implementation equals "take a longest compatible block" round by round
    assert greedy_select(inst.n, B) == greedy_by_definition(inst)

import statistics

import pytest
from hypothesis import given, strategies as st

from mcsp.blocks import enumerate_blocks
from mcsp.core import is_related
from mcsp.instgen import DEFAULT_SEED, DNA, generate_instance, instance_filename, write_instance
from mcsp.core import Instance


@given(st.integers(1, 200), st.integers(0, 2**32), st.sampled_from(["AB", "ACGT", "ABCDEFGH"]))
def test_related_and_deterministic(n, seed, alphabet):
    inst = generate_instance(n, alphabet, seed)
    assert inst.n == n and is_related(inst.s1, inst.s2)
    assert set(inst.s1) <= set(alphabet)
    assert generate_instance(n, alphabet, seed) == inst


def test_defaults_and_seed_sensitivity():
    a = generate_instance(50)
    assert a == generate_instance(50, DNA, DEFAULT_SEED)
    assert a != generate_instance(50, DNA, DEFAULT_SEED + 1)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        generate_instance(0)
    with pytest.raises(ValueError):
        generate_instance(5, "")


def test_file_naming(tmp_path):
    inst = generate_instance(6, seed=1)
    assert instance_filename(6, 1) == "rand_6_1.txt"
    path = write_instance(inst, tmp_path, 1)
    assert path.name == "rand_6_1.txt" and Instance.read(path) == inst


def test_block_count_concentration():
    ratios = [len(enumerate_blocks(generate_instance(500, DNA, seed))) / 500**2 for seed in range(20)]
    assert 0.31 <= statistics.mean(ratios) <= 0.36

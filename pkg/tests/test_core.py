import pytest
from hypothesis import given

from conftest import b, related_instances
from mcsp.core import (
    CommonBlock,
    Instance,
    InstanceFormatError,
    InvalidPartitionError,
    Partition,
    PartitionStatus,
    UnrelatedStringsError,
    check_blocks,
    is_related,
    singleton_partition,
    validate_partition,
)
from mcsp.blocks import enumerate_blocks


@pytest.mark.parametrize("s1,s2,expected", [
    ("AGACTG", "ACTAGG", True),
    ("A", "B", False),
    ("AB", "BA", True),
    ("AAB", "ABB", False),
    ("AB", "ABA", False),
])
def test_is_related(s1, s2, expected):
    assert is_related(s1, s2) is expected


def test_instance_rejects_unrelated_and_empty():
    with pytest.raises(UnrelatedStringsError):
        Instance("AB", "AC")
    with pytest.raises(InstanceFormatError):
        Instance("", "")


def test_instance_text_roundtrip(ex, tmp_path):
    assert ex.n == 6 and ex.alphabet == frozenset("ACGT")
    path = tmp_path / "ex.txt"
    ex.write(path)
    assert path.read_text() == "AGACTG\nACTAGG\n"
    assert Instance.read(path) == ex


@pytest.mark.parametrize("text", ["AB\n", "AB\nBA\nAB\n", "A B\nB A\n", "AB\n\n", "\nAB\n"])
def test_from_text_format_errors(text):
    with pytest.raises(InstanceFormatError):
        Instance.from_text(text)


def test_from_text_unrelated_is_not_a_format_error():
    with pytest.raises(UnrelatedStringsError):
        Instance.from_text("AB\nCD")


def test_common_block_geometry(ex):
    blk = CommonBlock("ACT", 3, 1)
    assert (blk.length, blk.end1, blk.end2) == (3, 5, 3)
    assert blk.is_block_of(ex)
    assert not CommonBlock("ACT", 1, 1).is_block_of(ex)
    assert not CommonBlock("G", 7, 1).is_block_of(ex)
    assert blk.overlaps(CommonBlock("AC", 3, 1))
    assert blk.overlaps(CommonBlock("A", 1, 1))      # shares s2 position 1 only
    assert not blk.overlaps(CommonBlock("AG", 1, 4))


def test_check_blocks_known_optimum(ex):
    v = check_blocks(ex, [b(1), b(2), b(14)])
    assert v.status is PartitionStatus.COMPLETE and v.size == 3 and v


def test_check_blocks_singletons(ex):
    sel = [b(7), b(6), b(9), b(10), b(11), b(14)]   # A3-1, A1-4, C, T, G2-5, G6-6
    v = check_blocks(ex, sel)
    assert v.status is PartitionStatus.COMPLETE and v.size == 6


def test_check_blocks_overlap_reason(ex):
    v = check_blocks(ex, [b(1), b(3)])
    assert v.status is PartitionStatus.INVALID and not v
    assert "overlap in s1 and s2" in v.reason


def test_check_blocks_partial_and_non_block(ex):
    assert check_blocks(ex, [b(1)]).status is PartitionStatus.PARTIAL
    assert check_blocks(ex, []).status is PartitionStatus.PARTIAL
    v = check_blocks(ex, [CommonBlock("GG", 5, 5)])
    assert v.status is PartitionStatus.INVALID and "not a common block" in v.reason


def test_validate_partition_indices(ex):
    blocks = enumerate_blocks(ex)
    assert validate_partition(ex, blocks, [1, 2, 14]).status is PartitionStatus.COMPLETE
    with pytest.raises(IndexError):
        validate_partition(ex, blocks, [0])
    with pytest.raises(IndexError):
        validate_partition(ex, blocks, [15])


def test_partition_from_blocks(ex):
    p = Partition.from_blocks(ex, [b(14), b(1), b(2)])
    assert p.is_complete and len(p) == 3 and p.covered_len == 6
    assert [x.k1 for x in p.blocks] == [1, 3, 6]
    assert p.substrings() == ["ACT", "AG", "G"]
    assert b(1) in p and b(3) not in p
    assert p.cover1 == b"\x01" * 6
    with pytest.raises(InvalidPartitionError):
        Partition.from_blocks(ex, [b(1), b(3)])
    with pytest.raises(InvalidPartitionError):
        Partition.from_blocks(ex, [CommonBlock("GG", 5, 5)])


def test_partition_extended_and_empty(ex):
    p = Partition.empty(ex)
    assert len(p) == 0 and not p.is_complete and p.cover1 == bytes(6)
    q = p.extended(ex, [b(1)]).extended(ex, [b(2), b(14)])
    assert q.is_complete


@given(related_instances(max_n=12))
def test_singleton_partition_always_complete(inst):
    p = singleton_partition(inst)
    assert p.is_complete and len(p) == inst.n
    assert check_blocks(inst, p.blocks).status is PartitionStatus.COMPLETE


@given(related_instances(max_n=10))
def test_check_blocks_agrees_with_partition_construction(inst):
    sel = list(singleton_partition(inst).blocks)[: max(1, inst.n // 2)]
    v = check_blocks(inst, sel)
    p = Partition.from_blocks(inst, sel)
    assert v.status is (PartitionStatus.COMPLETE if p.is_complete else PartitionStatus.PARTIAL)

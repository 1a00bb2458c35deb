import pytest
from hypothesis import strategies as st

from mcsp.core import CommonBlock, Instance

EX_S1, EX_S2 = "AGACTG", "ACTAGG"

# Worked example: blocks b1..b14 in the order the example lists them, with
# the s1 / s2 positions each one covers (the rows of the M1 / M2 matrices).
EX_LISTED = [
    CommonBlock("ACT", 3, 1), CommonBlock("AG", 1, 4), CommonBlock("AC", 3, 1),
    CommonBlock("CT", 4, 2), CommonBlock("A", 1, 1), CommonBlock("A", 1, 4),
    CommonBlock("A", 3, 1), CommonBlock("A", 3, 4), CommonBlock("C", 4, 2),
    CommonBlock("T", 5, 3), CommonBlock("G", 2, 5), CommonBlock("G", 2, 6),
    CommonBlock("G", 6, 5), CommonBlock("G", 6, 6),
]
EX_M1 = [
    "001110", "110000", "001100", "000110", "100000", "100000", "001000",
    "001000", "000100", "000010", "010000", "010000", "000001", "000001",
]
EX_M2 = [
    "111000", "000110", "110000", "011000", "100000", "000100", "100000",
    "000100", "010000", "001000", "000010", "000001", "000010", "000001",
]


def b(i: int) -> CommonBlock:
    """Block b_i of the worked example (1-based, listing order)."""
    return EX_LISTED[i - 1]


@pytest.fixture
def ex() -> Instance:
    return Instance(EX_S1, EX_S2)


@st.composite
def related_instances(draw, min_n=1, max_n=10, alphabets=("AB", "ACGT")):
    alphabet = draw(st.sampled_from(alphabets))
    s1 = draw(st.text(alphabet=alphabet, min_size=min_n, max_size=max_n))
    s2 = "".join(draw(st.permutations(list(s1))))
    return Instance(s1, s2)

import pytest
from hypothesis import given, settings, strategies as st

from monarb.core import KColoring, Tournament
from monarb.errors import InvalidInputError
from monarb.io import (
    coloring_from_text,
    coloring_to_text,
    load_order9_anchor,
    tournament_from_compact,
    tournament_from_matrix_text,
    tournament_to_compact,
    tournament_to_matrix_text,
)

from conftest import random_tournament


@given(st.integers(1, 12), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_matrix_roundtrip(n, rnd):
    t = random_tournament(n, rnd)
    assert tournament_from_matrix_text(tournament_to_matrix_text(t)) == t


@given(st.integers(1, 12), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_compact_roundtrip(n, rnd):
    t = random_tournament(n, rnd)
    s = tournament_to_compact(t)
    assert tournament_from_compact(s) == t
    assert s.startswith(f"{n}:")


def test_compact_format_examples():
    # single arc 0 -> 1: one bit set, padded into one hex digit (1000 -> 8)
    t = Tournament(2, [0b10, 0])
    assert tournament_to_compact(t) == "2:8"
    assert tournament_to_compact(Tournament(2, [0, 0b01])) == "2:0"
    t3 = Tournament(3, [0b010, 0b100, 0b001])  # bits (0,1)=1 (0,2)=0 (1,2)=1
    assert tournament_to_compact(t3) == "3:A"


def test_matrix_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        tournament_from_matrix_text("0 1\n1 0")  # digon
    with pytest.raises(InvalidInputError):
        tournament_from_matrix_text("0 1 1\n0 0 1")  # ragged
    with pytest.raises(InvalidInputError):
        tournament_from_matrix_text("2 0\n0 0")
    with pytest.raises(InvalidInputError):
        tournament_from_compact("5:QQ")


def test_coloring_text_roundtrip():
    c = KColoring(3, bytes([0, 2, 1, 1, 0, 2]))
    assert coloring_from_text(coloring_to_text(c), 3) == c
    wide = KColoring(12, bytes([0, 11, 5]))
    txt = coloring_to_text(wide)
    assert "," in txt
    assert coloring_from_text(txt, 12) == wide


def test_anchor_fixture_checksum():
    t = load_order9_anchor()
    assert t.n == 9
    assert all(t.out_degree(v) == 4 for v in range(9))

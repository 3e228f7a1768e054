import itertools
import random

import pytest

from monarb.core import ColoredTournament, Tournament, domination_sum, max_domination
from monarb.constructions import (
    cyclic_tournament,
    rainbow_triangle,
    red_path_tournament,
    transitive_tournament,
)
from monarb.enumeration import enumerate_tournaments
from monarb.errors import CapacityError, InvalidInputError
from monarb.search import (
    automorphism_group,
    f_exact_bnb,
    f_exact_bruteforce,
    greedy_two_coloring,
    s_exact,
    s_exact_bruteforce,
)

from conftest import random_tournament


def test_f_values_pinned():
    c3 = Tournament(3, [0b010, 0b100, 0b001])
    assert f_exact_bruteforce(c3, 3, 2).value == 2
    assert f_exact_bruteforce(c3, 3, 7).value == 2
    # two colors cannot prevent a spanning dominator (full depth)
    for n in (3, 4, 5):
        t = random_tournament(n, random.Random(n))
        assert f_exact_bruteforce(t, 2, n - 1).value == n
    # depth 1 is one more than the maximum out-degree, for any palette
    t = random_tournament(5, random.Random(17))
    want = 1 + max(t.out_degree(v) for v in range(5))
    for k in (1, 2, 3):
        assert f_exact_bruteforce(t, k, 1).value == want
    # a single color makes any king dominate everything at depth 2
    assert f_exact_bnb(cyclic_tournament(7), 1, 2).value == 7
    # a transitive source dominates everything at depth 1
    for k in (1, 2, 3):
        assert f_exact_bnb(transitive_tournament(5), k, 3).value == 5


def test_f_engines_agree_on_all_small_classes():
    for n in (1, 2, 3, 4, 5):
        for t in enumerate_tournaments(n):
            for depth in (1, 2, 3):
                if n == 1:
                    continue
                brute = f_exact_bruteforce(t, 2, depth)
                bnb = f_exact_bnb(t, 2, depth)
                assert brute.value == bnb.value


def test_f_witness_reproduces_value():
    t = random_tournament(5, random.Random(23))
    for k, depth in ((2, 2), (3, 2), (2, 3)):
        res = f_exact_bruteforce(t, k, depth)
        assert max_domination(ColoredTournament(t, res.witness), depth).count == res.value
        res2 = f_exact_bnb(t, k, depth)
        assert max_domination(ColoredTournament(t, res2.witness), depth).count == res2.value


def test_f_bounds_sandwich():
    rng = random.Random(4)
    for _ in range(5):
        t = random_tournament(5, rng)
        n = t.n
        vals = {}
        for k in (1, 2, 3):
            for depth in (1, 2, 3, 4):
                vals[k, depth] = f_exact_bnb(t, k, depth).value
                assert vals[k, depth] >= (n + 2) // 2
        for k, kp in ((2, 1), (3, 2)):
            for depth in (1, 2, 3):
                assert vals[k, depth] <= vals[kp, depth]
                assert vals[k, depth] <= vals[k, depth + 1]


def test_f_isomorphism_invariance():
    rng = random.Random(6)
    for _ in range(4):
        t = random_tournament(5, rng)
        perm = list(range(5))
        rng.shuffle(perm)
        t2 = t.relabel(perm)
        assert f_exact_bnb(t, 2, 2).value == f_exact_bnb(t2, 2, 2).value
        assert s_exact(t).value == s_exact(t2).value


def test_s_values_pinned():
    c3 = Tournament(3, [0b010, 0b100, 0b001])
    assert s_exact(c3).value == 4
    for q in (3, 4, 5, 6):
        assert s_exact(transitive_tournament(q)).value == q * (q - 1) // 2


def test_s_engines_agree_on_all_small_classes():
    for n in (2, 3, 4, 5):
        for t in enumerate_tournaments(n):
            brute = s_exact_bruteforce(t)
            pairs = s_exact(t, engine="pairs")
            edges = s_exact(t, engine="edges")
            assert brute.value == pairs.value == edges.value


def test_s_engines_agree_on_random_order6_and_other_depths():
    rng = random.Random(12)
    for _ in range(3):
        t = random_tournament(6, rng)
        assert s_exact(t, engine="pairs").value == s_exact_bruteforce(t).value
        for depth in (1, 3, 5):
            assert (
                s_exact(t, depth, engine="edges").value
                == s_exact_bruteforce(t, depth).value
            )


def test_s_witness_reproduces_value():
    rng = random.Random(2)
    for _ in range(5):
        t = random_tournament(6, rng)
        res = s_exact(t)
        assert domination_sum(ColoredTournament(t, res.witness), 2) == res.value


def test_order4_classes_never_exceed_eight():
    values = [s_exact(t).value for t in enumerate_tournaments(4)]
    assert len(values) == 4
    assert all(v <= 8 for v in values)


def test_greedy_coloring_is_valid_seed():
    t = cyclic_tournament(7)
    c = greedy_two_coloring(t)
    assert len(c.colors) == 21
    assert domination_sum(ColoredTournament(t, c), 2) >= s_exact(t).value


def test_capacity_errors():
    big = transitive_tournament(8)
    with pytest.raises(CapacityError):
        f_exact_bruteforce(big, 2, 2)
    with pytest.raises(CapacityError):
        s_exact(big, 3)  # depth != 2 needs the edge engine, capped lower
    with pytest.raises(CapacityError):
        f_exact_bnb(transitive_tournament(13), 2, 2)
    with pytest.raises(InvalidInputError):
        s_exact(transitive_tournament(4), 3, engine="pairs")


def test_automorphism_group():
    c3 = Tournament(3, [0b010, 0b100, 0b001])
    assert len(automorphism_group(c3)) == 3
    assert len(automorphism_group(transitive_tournament(6))) == 1
    for t in enumerate_tournaments(5):
        perms = automorphism_group(t)
        assert tuple(range(5)) in perms
        for p in perms:
            assert t.relabel(p) == t
        assert len(perms) % 2 == 1  # tournament automorphism groups have odd order

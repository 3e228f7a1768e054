import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from monarb._bitops import bits, mask_of
from monarb.core import (
    ColoredTournament,
    KColoring,
    all_dominated_rows,
    dominated_set,
    edge_count,
    max_domination,
    mono_reach_set,
)
from monarb.constructions import (
    bipartition_coloring,
    cyclic_tournament,
    domination_rate_closed_form,
    domination_rate_sequence,
    lex_product,
    parse_construction,
    power,
    rainbow_triangle,
    recursive_partition_coloring,
    red_path_tournament,
    transitive_tournament,
)
from monarb.errors import CapacityError, InvalidInputError

from conftest import random_tournament


def _has_mono_cycle(ct: ColoredTournament) -> bool:
    # a color class has a cycle iff its subgraph has a vertex reaching itself
    for rows in ct.rows_by_color():
        n = ct.n
        for v in range(n):
            seen = 0
            frontier = rows[v]
            while frontier & ~seen:
                seen |= frontier
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= rows[low.bit_length() - 1]
                    f ^= low
                frontier = nxt & ~seen
            if seen >> v & 1:
                return True
    return False


def test_red_path_tournament_layout():
    r4 = red_path_tournament(4)
    red = {(0, 1), (1, 2), (2, 3)}
    blue = {(2, 0), (3, 0), (3, 1)}
    assert set(r4.t.arcs()) == red | blue
    assert all(r4.arc_color(i, j) == 0 for i, j in red)
    assert all(r4.arc_color(i, j) == 1 for i, j in blue)
    with pytest.raises(InvalidInputError):
        red_path_tournament(1)


@pytest.mark.parametrize("q", [3, 4, 5, 6])
def test_red_path_tournament_domination(q):
    rq = red_path_tournament(q)
    assert max_domination(rq, q - 2).count == q - 1
    assert not _has_mono_cycle(rq)


def test_rainbow_triangle_properties():
    rb = rainbow_triangle()
    assert rb.n == 3 and rb.k == 3
    assert all(rb.t.out_degree(v) == 1 for v in range(3))
    for depth in (1, 2, 5):
        for v in range(3):
            assert dominated_set(rb, v, depth).bit_count() == 1


def test_transitive():
    tt = transitive_tournament(5)
    assert [tt.out_degree(v) for v in range(5)] == [4, 3, 2, 1, 0]
    assert all(not tt.has_arc(j, i) for i in range(5) for j in range(i + 1, 5))


def test_lex_product_shape_and_identity():
    a, b = red_path_tournament(3), rainbow_triangle()
    p = lex_product(a, b)
    assert p.n == a.n * b.n
    assert p.k == 3
    one = ColoredTournament(
        transitive_tournament(1), KColoring(1, b"")
    )
    q = lex_product(one, b)
    assert q.t == b.t and bytes(q.c.colors) == bytes(b.c.colors)


def test_lex_product_definition_spotcheck():
    # outer arcs follow the second factor and inherit its colors; inner
    # arcs follow the first factor inside each block
    a, b = red_path_tournament(2), red_path_tournament(3)
    p = lex_product(a, b)
    na = 2
    for v1, v2 in itertools.permutations(range(3), 2):
        for u1, u2 in itertools.product(range(2), repeat=2):
            x, y = v1 * na + u1, v2 * na + u2
            assert p.t.has_arc(x, y) == b.t.has_arc(v1, v2)
            if p.t.has_arc(x, y):
                assert p.arc_color(x, y) == b.arc_color(v1, v2)
    for v in range(3):
        for u1, u2 in itertools.permutations(range(2), 2):
            x, y = v * na + u1, v * na + u2
            assert p.t.has_arc(x, y) == a.t.has_arc(u1, u2)
            if p.t.has_arc(x, y):
                assert p.arc_color(x, y) == a.arc_color(u1, u2)


def test_power_identity_and_associativity():
    rb = rainbow_triangle()
    assert power(rb, 1) is rb
    assert power(rb, 3) == lex_product(power(rb, 2), rb)
    with pytest.raises(CapacityError):
        power(rb, 20)


def test_product_preserves_mono_acyclicity():
    for base in (red_path_tournament(3), red_path_tournament(4), rainbow_triangle()):
        assert not _has_mono_cycle(base)
        assert not _has_mono_cycle(power(base, 2))


@pytest.mark.parametrize("depth,r", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_red_path_power_reach_formula(depth, r):
    ct = power(red_path_tournament(depth + 2), r)
    n = ct.n
    expected = (1 + depth * n) // (depth + 1)
    assert (1 + depth * n) % (depth + 1) == 0
    counts = {1 + row.bit_count() for row in all_dominated_rows(ct, depth)}
    assert counts == {expected}


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_rainbow_power_dominates_exactly_out_neighbors(r):
    ct = power(rainbow_triangle(), r)
    n = ct.n
    assert all(ct.t.out_degree(v) == (n - 1) // 2 for v in range(n))
    for depth in (1, 2, n - 1):
        rows = all_dominated_rows(ct, depth)
        assert rows == list(ct.t.out_rows)
    assert max_domination(ct, 2).count == (n + 1) // 2


def test_bipartition_coloring_small():
    t = random_tournament(2, __import__("random").Random(3))
    ct = bipartition_coloring(t, 1)
    assert ct.c.colors == b"\x00"  # the single arc crosses the parts


def test_bipartition_blocks_cross_nonneighbors():
    import random

    rng = random.Random(5)
    for trial in range(5):
        t = random_tournament(11, rng)
        ct = bipartition_coloring(t, trial)
        # recover the parts from the coloring: blue arcs stay inside
        part0 = {0}
        for j in range(1, 11):
            if ct.c.colors[j - 1] == 1:  # pair (0, j) stays inside the part
                part0.add(j)
        for v in range(11):
            dom = dominated_set(ct, v, 2)
            for u in range(11):
                same = (u in part0) == (v in part0)
                if u != v and not same and not t.has_arc(v, u):
                    assert not dom >> u & 1


def test_recursive_partition_base_case_monochromatic():
    t = random_tournament(7, __import__("random").Random(9))
    ct = recursive_partition_coloring(t, 1, 0)
    assert set(ct.c.colors) == {0}


def test_recursive_partition_no_mono_escape_and_return():
    # no monochromatic path may leave a top-level part and reach a vertex
    # that is not a direct out-neighbor
    import random

    rng = random.Random(31)
    for k in (2, 3, 4):
        t = random_tournament(12, rng)
        ct = recursive_partition_coloring(t, k, 77)
        tsplit = _top_split(ct, k, 77)
        for v in range(12):
            dom = dominated_set(ct, v, 11)
            for u in bits(dom & ~t.out_rows[v]):
                assert tsplit[u] == tsplit[v]


def _top_split(ct: ColoredTournament, k: int, seed) -> list[int]:
    """Replay the seeded shuffle to recover the top-level partition."""
    from monarb.constructions import _best_split
    from monarb.rng import make_rng, shuffled

    t_split, _ = _best_split(k)
    n = ct.n
    order = shuffled(make_rng(seed), list(range(n)))
    part = [0] * n
    base, rem = divmod(n, t_split)
    pos = 0
    for p in range(t_split):
        size = base + (1 if p < rem else 0)
        for v in order[pos : pos + size]:
            part[v] = p
        pos += size
    return part


def test_rate_sequence_values():
    rates = domination_rate_sequence(6)
    assert rates[1] == 1  # two colors change nothing
    assert rates[2] == Fraction(3, 4)
    assert rates[3] == Fraction(2, 3)
    assert rates[4] == Fraction(5, 8)
    assert rates[5] == Fraction(7, 12)


def test_rate_closed_form_bounds():
    rates = domination_rate_sequence(30)
    for k in range(3, 31):
        assert rates[k - 1] <= domination_rate_closed_form(k)
    assert domination_rate_closed_form(3) == Fraction(3, 4)
    assert domination_rate_closed_form(4) == Fraction(2, 3)
    assert domination_rate_closed_form(5) == Fraction(5, 8)


def test_parse_construction_tokens():
    assert parse_construction("R:4") == red_path_tournament(4)
    assert parse_construction("rainbow3") == rainbow_triangle()
    assert parse_construction("transitive:6") == transitive_tournament(6)
    assert parse_construction("power:R:4:2") == power(red_path_tournament(4), 2)
    with pytest.raises(InvalidInputError):
        parse_construction("nonsense")
    with pytest.raises(InvalidInputError):
        parse_construction("power:transitive:4:2")

"""Generators for the named tournaments and colorings, the lexicographic
product / power machinery, partition colorings, and the exact domination
rate recurrence.

Colors are small ints; by convention color 0 is "red" and color 1
"blue" in the two-color constructions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import (
    MAX_N,
    _NUMPY_MIN_N,
    ColoredTournament,
    KColoring,
    Tournament,
    edge_count,
    edge_index,
)
from .errors import CapacityError, InvalidInputError
from .rng import make_rng, shuffled

RED = 0
BLUE = 1


def red_path_tournament(q: int) -> ColoredTournament:
    """Red Hamiltonian path 0 -> 1 -> ... -> q-1; every other arc is blue
    and points from the higher index to the lower one."""
    if q < 2:
        raise InvalidInputError("path construction needs at least 2 vertices")
    rows = [0] * q
    colors = bytearray()
    for i in range(q):
        if i + 1 < q:
            rows[i] |= 1 << (i + 1)
        for j in range(i + 2, q):
            rows[j] |= 1 << i
    for i, j in itertools.combinations(range(q), 2):
        colors.append(RED if j == i + 1 else BLUE)
    return ColoredTournament(Tournament(q, rows, validate=False), KColoring(2, bytes(colors)))


def rainbow_triangle() -> ColoredTournament:
    """Directed triangle 0 -> 1 -> 2 -> 0 with three distinct edge colors."""
    rows = [0b010, 0b100, 0b001]
    # pairs (0,1), (0,2), (1,2): arcs 0->1 color 0, 2->0 color 2, 1->2 color 1
    colors = bytes([0, 2, 1])
    return ColoredTournament(Tournament(3, rows, validate=False), KColoring(3, colors))


def transitive_tournament(q: int) -> Tournament:
    """Arc i -> j exactly when i < j."""
    if q < 1:
        raise InvalidInputError("order must be >= 1")
    full = (1 << q) - 1
    rows = [(full >> (i + 1)) << (i + 1) for i in range(q)]
    return Tournament(q, rows, validate=False)


def cyclic_tournament(q: int) -> Tournament:
    """Circulant tournament on odd q: i -> i+d (mod q) for d = 1..(q-1)/2."""
    if q < 1 or q % 2 == 0:
        raise InvalidInputError("circulant tournament needs odd order")
    rows = []
    for i in range(q):
        r = 0
        for d in range(1, (q - 1) // 2 + 1):
            r |= 1 << ((i + d) % q)
        rows.append(r)
    return Tournament(q, rows, validate=False)


# ---------------------------------------------------------------------------
# lexicographic product and powers


def lex_product(a: ColoredTournament, b: ColoredTournament) -> ColoredTournament:
    """Compose two colored tournaments.

    Vertex (u, v) with u from ``a`` and v from ``b`` gets index
    v * |V(a)| + u, so blocks over the second factor are contiguous.
    Arcs between blocks follow ``b`` on the second coordinate and carry
    that arc's color (outer); arcs inside a block follow ``a`` and carry
    the corresponding color of ``a`` (inner).  Palettes merge to
    max(k_a, k_b).
    """
    na, nb = a.n, b.n
    n = na * nb
    if n > MAX_N:
        raise CapacityError(f"product order {n} exceeds cap {MAX_N}")
    block = (1 << na) - 1
    rows = [0] * n
    arows = a.t.out_rows
    brows = b.t.out_rows
    for v in range(nb):
        outer = 0
        bv = brows[v]
        for v2 in range(nb):
            if bv >> v2 & 1:
                outer |= block << (v2 * na)
        base = v * na
        for u in range(na):
            rows[base + u] = outer | (arows[u] << base)

    acolors = a.c.colors
    bcolors = b.c.colors
    colors = bytearray(edge_count(n))
    e = 0
    for x in range(n):
        ux, vx = x % na, x // na
        for y in range(x + 1, n):
            uy, vy = y % na, y // na
            if vx == vy:
                colors[e] = acolors[edge_index(ux, uy, na)]
            else:
                colors[e] = bcolors[edge_index(vx, vy, nb)]
            e += 1
    return ColoredTournament(
        Tournament(n, rows, validate=False), KColoring(max(a.k, b.k), bytes(colors))
    )


def power(ct: ColoredTournament, r: int) -> ColoredTournament:
    """r-fold lexicographic power with the iterated product coloring."""
    if r < 1:
        raise InvalidInputError("power exponent must be >= 1")
    if ct.n**r > MAX_N:
        raise CapacityError(f"power order {ct.n ** r} exceeds cap {MAX_N}")
    acc = ct
    for _ in range(r - 1):
        acc = lex_product(acc, ct)
    return acc


# ---------------------------------------------------------------------------
# partition colorings


def _balanced_parts(rng, n: int, t: int) -> list[int]:
    """part id per vertex; part sizes differ by at most one."""
    order = shuffled(rng, range(n))
    part = [0] * n
    base, rem = divmod(n, t)
    pos = 0
    for p in range(t):
        size = base + (1 if p < rem else 0)
        for v in order[pos : pos + size]:
            part[v] = p
        pos += size
    return part


def bipartition_coloring(t: Tournament, seed) -> ColoredTournament:
    """Balanced 2-partition by seeded shuffle; arcs between the parts are
    red (0), arcs inside a part blue (1)."""
    if t.n < 2:
        raise InvalidInputError("need at least 2 vertices")
    rng = make_rng(seed)
    part = _balanced_parts(rng, t.n, 2)
    n = t.n
    if n >= _NUMPY_MIN_N:
        pa = np.asarray(part, dtype=np.int8)
        iu, ju = np.triu_indices(n, 1)
        colors = (pa[iu] == pa[ju]).astype(np.uint8).tobytes()
    else:
        colors = bytes(
            BLUE if part[i] == part[j] else RED
            for i, j in itertools.combinations(range(n), 2)
        )
    return ColoredTournament(t, KColoring(2, colors))


@lru_cache(maxsize=None)
def _best_split(k: int) -> tuple[int, Fraction]:
    """Smallest t in 1..k-1 minimizing (t-1)/(2t) + rate(k-t)/t."""
    rates = domination_rate_sequence(k - 1)
    best_t, best = 1, None
    for t in range(1, k):
        val = Fraction(t - 1, 2 * t) + rates[k - t - 1] / t
        if best is None or val < best:
            best, best_t = val, t
    return best_t, best


def recursive_partition_coloring(t: Tournament, k: int, seed) -> ColoredTournament:
    """Partition coloring driving the domination rate recurrence.

    With palette size k the vertex set is split (seeded shuffle) into the
    t parts minimizing the recurrence term (smallest t on ties); every
    arc between parts gets the color of its tail's part; each part is
    then colored recursively with the remaining k - t colors.  k = 1
    colors everything with the single remaining color.
    """
    if k < 1:
        raise InvalidInputError("color count must be >= 1")
    n = t.n
    rng = make_rng(seed)
    colors = bytearray(edge_count(n))
    use_np = n >= _NUMPY_MIN_N
    adj = None
    carr = None
    if use_np:
        from .core import _rows_to_bool

        adj = _rows_to_bool(t.out_rows, n)
        carr = np.frombuffer(colors, dtype=np.uint8)  # writable view of bytearray

    def _pair_indices(sub: np.ndarray):
        iu, ju = np.triu_indices(len(sub), 1)
        gi, gj = sub[iu], sub[ju]
        return iu, ju, gi, gj, gi * (2 * n - gi - 1) // 2 + (gj - gi - 1)

    def rec(vertices: list[int], palette: list[int]) -> None:
        m = len(vertices)
        if m <= 1:
            return
        vs = sorted(vertices)
        if len(palette) == 1:
            col = palette[0]
            if use_np and m > 64:
                _, _, _, _, eidx = _pair_indices(np.asarray(vs))
                carr[eidx] = col
            else:
                for a in range(m):
                    for b in range(a + 1, m):
                        colors[edge_index(vs[a], vs[b], n)] = col
            return
        t_split, _ = _best_split(len(palette))
        order = shuffled(rng, vs)
        base, rem = divmod(m, t_split)
        parts: list[list[int]] = []
        part_of = {}
        pos = 0
        for p in range(t_split):
            size = base + (1 if p < rem else 0)
            chunk = order[pos : pos + size]
            pos += size
            parts.append(chunk)
            for v in chunk:
                part_of[v] = p
        if use_np and m > 64:
            sub = np.asarray(vs)
            parr = np.asarray([part_of[v] for v in vs], dtype=np.int64)
            iu, ju, gi, gj, eidx = _pair_indices(sub)
            cross = parr[iu] != parr[ju]
            gi_c, gj_c = gi[cross], gj[cross]
            tail_part = np.where(
                adj[gi_c, gj_c].astype(bool), parr[iu][cross], parr[ju][cross]
            )
            carr[eidx[cross]] = np.asarray(palette, dtype=np.uint8)[tail_part]
        else:
            for a in range(m):
                i = vs[a]
                pi = part_of[i]
                for b in range(a + 1, m):
                    j = vs[b]
                    pj = part_of[j]
                    if pi == pj:
                        continue
                    tail = pi if t.has_arc(i, j) else pj
                    colors[edge_index(i, j, n)] = palette[tail]
        for p in range(t_split):
            rec(parts[p], palette[t_split:])

    rec(list(range(n)), list(range(k)))
    return ColoredTournament(t, KColoring(k, bytes(colors)))


# ---------------------------------------------------------------------------
# exact rate recurrence


def domination_rate_sequence(k_max: int) -> list[Fraction]:
    """Exact rationals rate_1..rate_{k_max} of the recursive partition
    coloring: rate_1 = 1, rate_k = min over t of (t-1)/(2t) + rate_{k-t}/t."""
    if k_max < 1:
        raise InvalidInputError("need k_max >= 1")
    rates = [Fraction(1)]
    for k in range(2, k_max + 1):
        rates.append(
            min(
                Fraction(t - 1, 2 * t) + rates[k - t - 1] / t
                for t in range(1, k)
            )
        )
    return rates


def domination_rate_closed_form(k: int) -> Fraction:
    """Closed-form upper bound for the rate at k >= 3 colors."""
    if k < 3:
        raise InvalidInputError("closed form defined for k >= 3")
    if k % 3 == 0:
        return Fraction(1, 2) + Fraction(1, 4 * 3 ** (k // 3 - 1))
    if k % 3 == 1:
        return Fraction(1, 2) + Fraction(1, 2 * 3 ** ((k - 1) // 3))
    return Fraction(1, 2) + Fraction(1, 8 * 3 ** ((k - 5) // 3))


# ---------------------------------------------------------------------------
# construction tokens (CLI input specifiers)


def parse_construction(token: str):
    """Resolve a construction token to a ColoredTournament or Tournament.

    Tokens: ``R:q``, ``rainbow3``, ``transitive:q``, ``cyclic:q``,
    ``power:<base>:<r>``.
    """
    if token == "rainbow3":
        return rainbow_triangle()
    if token.startswith("R:"):
        return red_path_tournament(int(token[2:]))
    if token.startswith("transitive:"):
        return transitive_tournament(int(token.split(":", 1)[1]))
    if token.startswith("cyclic:"):
        return cyclic_tournament(int(token.split(":", 1)[1]))
    if token.startswith("power:"):
        base_txt, _, r_txt = token[6:].rpartition(":")
        base = parse_construction(base_txt)
        if not isinstance(base, ColoredTournament):
            raise InvalidInputError("power base must carry a coloring")
        return power(base, int(r_txt))
    raise InvalidInputError(f"unknown construction {token!r}")

"""Exact minimization over edge colorings.

Two quantities are minimized over colorings of a fixed tournament:

- the best single-root domination count (``f_exact_*``): the largest
  1 + |dominated_set(v, depth)| over vertices, minimized over all
  k-colorings;
- the domination sum (``s_exact``): sum over vertices of the number of
  depth-2 dominated vertices, minimized over 2-colorings.

Brute force serves as the oracle.  The branch-and-bound engines branch
over edge colors in edge-index order with an admissible bound from
forced dominations (out-neighbors plus monochromatic paths over the
arcs colored so far), color labels canonicalized by requiring first
occurrences of colors to appear in increasing edge order.

For the depth-2 domination sum a much stronger exact engine exists:
every potentially avoidable domination (v 2-dominates an in-neighbor u)
is avoided exactly when, for each 2-path v -> w -> u, the two arcs get
different colors.  Those are parity constraints between edge variables,
so choosing a maximum set of simultaneously avoidable dominations is a
branch-and-bound over constraint sets with a union-find consistency
check, which handles order 9 in well under a second.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional

from ._bitops import bits, full_mask
from .core import ColoredTournament, KColoring, Tournament, edge_count, edge_index
from .errors import CapacityError, InvalidInputError

_BRUTE_LIMIT = 1 << 21
_BNB_MAX_N = 12
_S_EDGE_MAX_EDGES = 21


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: KColoring
    nodes_explored: int
    wall_time: float


# ---------------------------------------------------------------------------
# shared evaluation helpers (small orders, hot loops)


def _rows_for(t: Tournament, colors, k: int) -> list[list[int]]:
    rows = [[0] * t.n for _ in range(k)]
    e = 0
    trows = t.out_rows
    for i in range(t.n):
        ri = trows[i]
        for j in range(i + 1, t.n):
            c = colors[e]
            e += 1
            if ri >> j & 1:
                rows[c][i] |= 1 << j
            else:
                rows[c][j] |= 1 << i
    return rows


def _bfs(rows, v, depth):
    me = 1 << v
    seen = me
    frontier = me
    while depth:
        depth -= 1
        new = 0
        f = frontier
        while f:
            low = f & -f
            new |= rows[low.bit_length() - 1]
            f ^= low
        new &= ~seen
        if not new:
            break
        seen |= new
        frontier = new
    return seen


def _max_dom(rows_by_color, n, depth) -> int:
    """max over vertices of 1 + |dominated set|; early exit at n."""
    best = 0
    for v in range(n):
        me = 1 << v
        acc = 0
        for rows in rows_by_color:
            acc |= _bfs(rows, v, depth)
        cnt = (acc | me).bit_count()
        if cnt > best:
            best = cnt
            if best == n:
                break
    return best


def _dom_sum(rows_by_color, n, depth) -> int:
    total = 0
    for v in range(n):
        me = 1 << v
        acc = 0
        for rows in rows_by_color:
            acc |= _bfs(rows, v, depth)
        total += (acc & ~me).bit_count()
    return total


# ---------------------------------------------------------------------------
# brute force


def _check_brute_caps(t: Tournament, k: int) -> None:
    e = edge_count(t.n)
    if (k == 2 and t.n > 6) or (k == 3 and t.n > 5) or k**e > _BRUTE_LIMIT:
        raise CapacityError(
            f"{k}^{e} colorings is beyond the brute-force cap"
        )


def f_exact_bruteforce(t: Tournament, k: int, depth: int) -> SearchResult:
    """Minimum over all k-colorings of the best domination count."""
    if k < 1 or depth < 1:
        raise InvalidInputError("need k >= 1 and depth >= 1")
    _check_brute_caps(t, k)
    start = time.perf_counter()
    n = t.n
    e = edge_count(n)
    best: Optional[int] = None
    witness = None
    nodes = 0
    for combo in itertools.product(range(k), repeat=e):
        nodes += 1
        val = _max_dom(_rows_for(t, combo, k), n, depth)
        if best is None or val < best:
            best = val
            witness = combo
    return SearchResult(
        best, KColoring(k, bytes(witness)), nodes, time.perf_counter() - start
    )


def s_exact_bruteforce(t: Tournament, depth: int = 2) -> SearchResult:
    """Minimum over all 2-colorings of the domination sum (oracle)."""
    _check_brute_caps(t, 2)
    start = time.perf_counter()
    n = t.n
    e = edge_count(n)
    best: Optional[int] = None
    witness = None
    nodes = 0
    for combo in itertools.product(range(2), repeat=e):
        nodes += 1
        val = _dom_sum(_rows_for(t, combo, 2), n, depth)
        if best is None or val < best:
            best = val
            witness = combo
    return SearchResult(
        best, KColoring(2, bytes(witness)), nodes, time.perf_counter() - start
    )


# ---------------------------------------------------------------------------
# branch and bound over edge colors


class _EdgeBnb:
    """Shared skeleton: static edge-index branch order, canonical color
    introduction, forced-domination bound of the partial coloring."""

    def __init__(self, t: Tournament, k: int, depth: int):
        self.t = t
        self.k = k
        self.depth = depth
        self.n = t.n
        self.e = edge_count(t.n)
        self.pairs = list(itertools.combinations(range(t.n), 2))
        self.arc = [
            (i, j) if t.has_arc(i, j) else (j, i) for i, j in self.pairs
        ]
        self.rows = [[0] * t.n for _ in range(k)]
        self.colors = bytearray(self.e)
        self.nodes = 0
        self.best: Optional[int] = None
        self.best_colors: Optional[bytes] = None

    # bound = objective of forced dominations; out-neighbors always count
    def _forced_masks(self) -> list[int]:
        n = self.n
        out_rows = self.t.out_rows
        masks = []
        for v in range(n):
            me = 1 << v
            acc = out_rows[v]
            for rows in self.rows:
                acc |= _bfs(rows, v, self.depth)
            masks.append(acc & ~me)
        return masks

    def _objective(self, masks: list[int]) -> int:
        raise NotImplementedError

    def _seed_incumbents(self) -> list[bytes]:
        raise NotImplementedError

    def run(self) -> SearchResult:
        start = time.perf_counter()
        for colors in self._seed_incumbents():
            val = self._evaluate(colors)
            if self.best is None or val < self.best:
                self.best = val
                self.best_colors = bytes(colors)
        self._dfs(0, 0)
        return SearchResult(
            self.best,
            KColoring(self.k, self.best_colors),
            self.nodes,
            time.perf_counter() - start,
        )

    def _evaluate(self, colors) -> int:
        return self._objective(
            [
                m & ~(1 << v)
                for v, m in enumerate(
                    self._full_masks(_rows_for(self.t, colors, self.k))
                )
            ]
        )

    def _full_masks(self, rows_by_color):
        return [
            self._union_reach(rows_by_color, v) for v in range(self.n)
        ]

    def _union_reach(self, rows_by_color, v):
        acc = 0
        for rows in rows_by_color:
            acc |= _bfs(rows, v, self.depth)
        return acc

    def _dfs(self, pos: int, used: int) -> None:
        self.nodes += 1
        bound = self._objective(self._forced_masks())
        if self.best is not None and bound >= self.best:
            return
        if pos == self.e:
            self.best = bound
            self.best_colors = bytes(self.colors)
            return
        tail, head = self.arc[pos]
        bit = 1 << head
        for c in range(min(self.k, used + 1)):
            self.rows[c][tail] |= bit
            self.colors[pos] = c
            self._dfs(pos + 1, used + (1 if c == used else 0))
            self.rows[c][tail] &= ~bit
        self.colors[pos] = 0


class _FBnb(_EdgeBnb):
    def _objective(self, masks):
        return 1 + max(m.bit_count() for m in masks)

    def _seed_incumbents(self):
        return [bytes(self.e)]


class _SBnb(_EdgeBnb):
    def _objective(self, masks):
        return sum(m.bit_count() for m in masks)

    def _seed_incumbents(self):
        return [bytes(self.e), greedy_two_coloring(self.t, self.depth).colors]


def greedy_two_coloring(t: Tournament, depth: int = 2) -> KColoring:
    """Color edges in index order, each time taking the color that keeps
    the forced domination sum smallest (color 0 on ties)."""
    n = t.n
    rows = [[0] * n, [0] * n]
    colors = bytearray()
    for i, j in itertools.combinations(range(n), 2):
        tail, head = (i, j) if t.has_arc(i, j) else (j, i)
        bit = 1 << head
        scores = []
        for c in (0, 1):
            rows[c][tail] |= bit
            scores.append(
                sum(
                    (
                        (_bfs(rows[0], v, depth) | _bfs(rows[1], v, depth))
                        & ~(1 << v)
                    ).bit_count()
                    for v in range(n)
                )
            )
            rows[c][tail] &= ~bit
        c = 0 if scores[0] <= scores[1] else 1
        rows[c][tail] |= bit
        colors.append(c)
    return KColoring(2, bytes(colors))


def f_exact_bnb(t: Tournament, k: int, depth: int) -> SearchResult:
    """Branch-and-bound computation of the same value as
    :func:`f_exact_bruteforce`."""
    if k < 1 or depth < 1:
        raise InvalidInputError("need k >= 1 and depth >= 1")
    if t.n > _BNB_MAX_N:
        raise CapacityError(f"order {t.n} beyond branch-and-bound cap {_BNB_MAX_N}")
    res = _FBnb(t, k, depth).run()
    _verify_f(t, k, depth, res)
    return res


def _verify_f(t, k, depth, res):
    from .core import max_domination

    got = max_domination(ColoredTournament(t, res.witness), depth).count
    if got != res.value:
        raise AssertionError(
            f"witness re-evaluation mismatch: {got} != {res.value}"
        )


def _verify_s(t, depth, res):
    from .core import domination_sum

    got = domination_sum(ColoredTournament(t, res.witness), depth)
    if got != res.value:
        raise AssertionError(
            f"witness re-evaluation mismatch: {got} != {res.value}"
        )


# ---------------------------------------------------------------------------
# depth-2 domination-sum engine (parity constraints)


def _avoidable_dominations(t: Tournament):
    """For every arc u -> v, v dominates u at depth 2 iff some 2-path
    v -> w -> u is monochromatic.  Returns, per such (v, u) with at
    least one middle w, the list of edge-variable pairs that must get
    distinct colors to avoid it."""
    n = t.n
    rows = t.out_rows
    in_rows = [0] * n
    for i in range(n):
        for j in bits(rows[i]):
            in_rows[j] |= 1 << i
    groups = []
    for u in range(n):
        for v in bits(rows[u]):
            middles = rows[v] & in_rows[u]
            if middles:
                groups.append(
                    [
                        (edge_index(v, w, n), edge_index(w, u, n))
                        for w in bits(middles)
                    ]
                )
    return groups


class _ParityDSU:
    """Union-find with parity and an undo trail (no path compression)."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n  # parity to parent
        self.rank = [0] * n
        self.trail: list[int] = []

    def find(self, x: int) -> tuple[int, int]:
        p = 0
        parent = self.parent
        parity = self.parity
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    def union(self, a: int, b: int, want: int) -> Optional[bool]:
        """Enforce color(a) xor color(b) == want.

        Returns True if a new merge happened, False if already implied,
        None on contradiction.
        """
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return False if (pa ^ pb) == want else None
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
            pa, pb = pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ want
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
            self.trail.append(rb | (1 << 30))
        else:
            self.trail.append(rb)
        return True

    def mark(self) -> int:
        return len(self.trail)

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            item = self.trail.pop()
            rb = item & ~(1 << 30)
            if item >> 30 & 1:
                self.rank[self.parent[rb]] -= 1
            self.parent[rb] = rb
            self.parity[rb] = 0


def _s_exact_parity(t: Tournament, start: float) -> SearchResult:
    n = t.n
    e = edge_count(n)
    groups = _avoidable_dominations(t)
    # most-constrained first: more parity edges fail earlier
    order = sorted(range(len(groups)), key=lambda g: (-len(groups[g]), g))
    groups = [groups[g] for g in order]
    total = len(groups)
    dsu = _ParityDSU(e)
    nodes = 0

    # greedy incumbent: include each group in order when still consistent
    greedy_sets: list[int] = []
    for i, grp in enumerate(groups):
        mark = dsu.mark()
        if all(dsu.union(a, b, 1) is not None for a, b in grp):
            greedy_sets.append(i)
        else:
            dsu.rollback(mark)
    dsu.rollback(0)
    best_saved = len(greedy_sets) - 1  # strict improvement required
    best_sets: list[int] = greedy_sets
    chosen: list[int] = []

    def dfs(i: int, saved: int) -> None:
        nonlocal nodes, best_saved, best_sets
        nodes += 1
        if saved + (total - i) <= best_saved:
            return
        if i == total:
            best_saved = saved
            best_sets = list(chosen)
            return
        mark = dsu.mark()
        added = False
        feasible = True
        for a, b in groups[i]:
            got = dsu.union(a, b, 1)
            if got is None:
                feasible = False
                break
            added = added or got
        if feasible:
            chosen.append(i)
            dfs(i + 1, saved + 1)
            chosen.pop()
            if not added:
                dsu.rollback(mark)
                return  # implied for free: excluding it can never help
        dsu.rollback(mark)
        dfs(i + 1, saved)

    dfs(0, 0)

    # rebuild the witness coloring from the chosen constraint sets
    dsu = _ParityDSU(e)
    for i in best_sets:
        for a, b in groups[i]:
            dsu.union(a, b, 1)
    colors = bytes(dsu.find(x)[1] for x in range(e))
    value = e + (total - len(best_sets))
    return SearchResult(
        value, KColoring(2, colors), nodes, time.perf_counter() - start
    )


def s_exact(t: Tournament, depth: int = 2, engine: str = "auto") -> SearchResult:
    """Minimum over 2-colorings of the domination sum at ``depth``.

    ``engine``: "auto" picks the parity engine for depth 2 and the edge
    branch-and-bound otherwise; "pairs" / "edges" force a choice.
    """
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    if t.n > _BNB_MAX_N:
        raise CapacityError(f"order {t.n} beyond cap {_BNB_MAX_N}")
    if engine not in ("auto", "pairs", "edges"):
        raise InvalidInputError(f"unknown engine {engine!r}")
    if engine == "pairs" and depth != 2:
        raise InvalidInputError("the parity engine is exact only for depth 2")
    start = time.perf_counter()
    if depth == 2 and engine in ("auto", "pairs"):
        res = _s_exact_parity(t, start)
    else:
        if edge_count(t.n) > _S_EDGE_MAX_EDGES:
            raise CapacityError(
                "edge-order branch and bound for the domination sum is capped "
                f"at {_S_EDGE_MAX_EDGES} edges; use depth 2 for larger orders"
            )
        res = _SBnb(t, 2, depth).run()
    _verify_s(t, depth, res)
    return res


# ---------------------------------------------------------------------------
# automorphisms


def automorphism_group(t: Tournament) -> list[tuple[int, ...]]:
    """All vertex permutations mapping the arc set onto itself.

    Backtracking over degree-compatible assignments; capped at order 16.
    """
    if t.n > 16:
        raise CapacityError("automorphism search capped at order 16")
    n = t.n
    rows = t.out_rows
    degs = [r.bit_count() for r in rows]
    by_deg: dict[int, list[int]] = {}
    for v in range(n):
        by_deg.setdefault(degs[v], []).append(v)
    image = [-1] * n
    used = [False] * n
    found: list[tuple[int, ...]] = []

    def extend(v: int) -> None:
        if v == n:
            found.append(tuple(image))
            return
        for w in by_deg.get(degs[v], ()):
            if used[w]:
                continue
            ok = True
            for u in range(v):
                if (rows[u] >> v & 1) != (rows[image[u]] >> w & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used[w] = True
                extend(v + 1)
                used[w] = False
                image[v] = -1

    extend(0)
    return found

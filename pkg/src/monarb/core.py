"""Tournament / coloring data model and monochromatic domination primitives.

A tournament on n vertices is stored as n out-neighbor bit rows (Python
ints; bit j of row i set iff the arc i->j is present).  An edge coloring
assigns one of k colors to each unordered pair {i, j}, indexed in
row-major upper-triangle order; orientation lives in the tournament, the
color in the coloring.

Vertex sets returned by the reachability operations are plain int
bitsets (see :mod:`monarb._bitops`).

All objects here are immutable after construction and all operations are
pure functions of their inputs, so everything is safe to share across
workers.

Capacity: orders up to ``MAX_N`` are supported.  Bulk all-pairs
operations switch to a packed numpy representation above
``_NUMPY_MIN_N`` vertices; single-source operations always use plain int
rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from ._bitops import bits, full_mask, mask_of
from .errors import CapacityError, InvalidInputError

MAX_N = 4096
_NUMPY_MIN_N = 192


# ---------------------------------------------------------------------------
# edge indexing


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Index of the unordered pair {i, j} in row-major upper-triangle order."""
    if i > j:
        i, j = j, i
    if i == j or j >= n or i < 0:
        raise InvalidInputError(f"bad vertex pair ({i}, {j}) for order {n}")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def edge_pairs(n: int):
    """All unordered pairs in edge-index order."""
    return itertools.combinations(range(n), 2)


# ---------------------------------------------------------------------------
# graphs


class Digraph:
    """Loop-free digraph as out-neighbor bit rows.  No completeness required."""

    __slots__ = ("n", "out_rows")

    def __init__(self, n: int, out_rows: Sequence[int], validate: bool = True):
        if not 1 <= n <= MAX_N:
            raise CapacityError(f"order {n} outside supported range 1..{MAX_N}")
        self.n = n
        self.out_rows = tuple(out_rows)
        if len(self.out_rows) != n:
            raise InvalidInputError("row count does not match order")
        if validate:
            self._validate()

    def _validate(self) -> None:
        full = full_mask(self.n)
        for i, row in enumerate(self.out_rows):
            if row & ~full:
                raise InvalidInputError(f"row {i} has bits beyond order {self.n}")
            if row >> i & 1:
                raise InvalidInputError(f"loop at vertex {i}")

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.out_rows[i] >> j & 1)

    def out_degree(self, v: int) -> int:
        return self.out_rows[v].bit_count()

    def in_rows(self) -> list[int]:
        """Transposed adjacency (bit j of entry i set iff arc j->i)."""
        n = self.n
        rows = self.out_rows
        if n >= _NUMPY_MIN_N:
            m = _rows_to_bool(rows, n)
            return _bool_to_int_rows(m.T)
        cols = [0] * n
        for i in range(n):
            for j in bits(rows[i]):
                cols[j] |= 1 << i
        return cols

    def arcs(self):
        for i in range(self.n):
            for j in bits(self.out_rows[i]):
                yield i, j

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.n == other.n
            and self.out_rows == other.out_rows
        )

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.out_rows))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class Tournament(Digraph):
    """Complete oriented graph: exactly one of i->j, j->i for every pair."""

    __slots__ = ()

    def _validate(self) -> None:
        super()._validate()
        n = self.n
        rows = self.out_rows
        if n >= _NUMPY_MIN_N:
            m = _rows_to_bool(rows, n)
            if not np.array_equal(m | m.T | np.eye(n, dtype=np.uint8), np.ones((n, n), np.uint8)):
                raise InvalidInputError("not a tournament: missing or doubled pair")
            if np.any(m & m.T):
                raise InvalidInputError("not a tournament: digon")
            return
        for i in range(n):
            for j in range(i + 1, n):
                fwd = rows[i] >> j & 1
                bwd = rows[j] >> i & 1
                if fwd == bwd:
                    raise InvalidInputError(
                        f"pair ({i}, {j}) must have exactly one orientation"
                    )

    def relabel(self, perm: Sequence[int]) -> "Tournament":
        """Tournament with vertex i renamed perm[i]."""
        n = self.n
        new_rows = [0] * n
        for i in range(n):
            ri = 0
            for j in bits(self.out_rows[i]):
                ri |= 1 << perm[j]
            new_rows[perm[i]] = ri
        return Tournament(n, new_rows, validate=False)

    def out_degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(r.bit_count() for r in self.out_rows))


# ---------------------------------------------------------------------------
# colorings


class KColoring:
    """Assignment of one of k colors to each unordered pair, edge-index order."""

    __slots__ = ("k", "colors")

    def __init__(self, k: int, colors: bytes | Sequence[int]):
        if k < 1:
            raise InvalidInputError("color count must be >= 1")
        if k > 255:
            raise CapacityError("color count above 255 unsupported")
        self.k = k
        self.colors = bytes(colors)
        if self.colors and max(self.colors) >= k:
            raise InvalidInputError("color entry out of palette range")

    def __len__(self):
        return len(self.colors)

    def __eq__(self, other):
        return (
            isinstance(other, KColoring)
            and self.k == other.k
            and self.colors == other.colors
        )

    def __hash__(self):
        return hash((self.k, self.colors))

    def relabeled(self, color_perm: Sequence[int]) -> "KColoring":
        return KColoring(self.k, bytes(color_perm[c] for c in self.colors))

    def __repr__(self):
        return f"KColoring(k={self.k}, edges={len(self.colors)})"


class ColoredTournament:
    """A tournament paired with a compatible edge coloring."""

    __slots__ = ("t", "c", "_rows_by_color")

    def __init__(self, t: Tournament, c: KColoring):
        if len(c.colors) != edge_count(t.n):
            raise InvalidInputError(
                f"coloring has {len(c.colors)} entries, expected {edge_count(t.n)}"
            )
        self.t = t
        self.c = c
        self._rows_by_color: Optional[list[list[int]]] = None

    @property
    def n(self) -> int:
        return self.t.n

    @property
    def k(self) -> int:
        return self.c.k

    def arc_color(self, i: int, j: int) -> int:
        """Color of the arc i->j (which must exist)."""
        if not self.t.has_arc(i, j):
            raise InvalidInputError(f"no arc {i}->{j}")
        return self.c.colors[edge_index(i, j, self.t.n)]

    def rows_by_color(self) -> list[list[int]]:
        """Out-neighbor rows restricted to each color; cached."""
        if self._rows_by_color is None:
            self._rows_by_color = _split_rows_by_color(self.t, self.c)
        return self._rows_by_color

    def __eq__(self, other):
        return (
            isinstance(other, ColoredTournament)
            and self.t == other.t
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.t, self.c))

    def __repr__(self):
        return f"ColoredTournament(n={self.n}, k={self.k})"


def _split_rows_by_color(t: Tournament, c: KColoring) -> list[list[int]]:
    n = t.n
    if n >= _NUMPY_MIN_N:
        adj = _rows_to_bool(t.out_rows, n)
        cm = _color_matrix(n, c.colors)
        out = []
        for col in range(c.k):
            out.append(_bool_to_int_rows(adj & (cm == col)))
        return out
    rows = [[0] * n for _ in range(c.k)]
    trows = t.out_rows
    colors = c.colors
    e = 0
    for i in range(n):
        ri = trows[i]
        for j in range(i + 1, n):
            col = colors[e]
            e += 1
            if ri >> j & 1:
                rows[col][i] |= 1 << j
            else:
                rows[col][j] |= 1 << i
    return rows


# ---------------------------------------------------------------------------
# packed numpy helpers (large-order bulk reachability)


def _rows_to_bool(rows: Sequence[int], n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    arr = np.frombuffer(buf, dtype=np.uint8).reshape(n, nbytes)
    return np.unpackbits(arr, axis=1, bitorder="little")[:, :n]


def _bool_to_int_rows(m: np.ndarray) -> list[int]:
    packed = np.packbits(m, axis=1, bitorder="little")
    data = packed.tobytes()
    w = packed.shape[1]
    return [int.from_bytes(data[i * w : (i + 1) * w], "little") for i in range(m.shape[0])]


def _color_matrix(n: int, colors: bytes) -> np.ndarray:
    cm = np.zeros((n, n), dtype=np.uint8)
    iu, ju = np.triu_indices(n, 1)
    flat = np.frombuffer(colors, dtype=np.uint8)
    cm[iu, ju] = flat
    cm[ju, iu] = flat
    return cm


def _int_rows_to_packed(rows: Sequence[int], n: int) -> np.ndarray:
    w = (n + 63) // 64
    buf = b"".join(r.to_bytes(w * 8, "little") for r in rows)
    return np.frombuffer(buf, dtype="<u8").reshape(n, w).copy()


def _packed_to_int_rows(arr: np.ndarray) -> list[int]:
    data = arr.astype("<u8").tobytes()
    w8 = arr.shape[1] * 8
    return [int.from_bytes(data[i * w8 : (i + 1) * w8], "little") for i in range(arr.shape[0])]


def _packed_column(arr: np.ndarray, v: int) -> np.ndarray:
    return ((arr[:, v >> 6] >> np.uint64(v & 63)) & np.uint64(1)).astype(bool)


def _packed_closure(adj: np.ndarray) -> np.ndarray:
    """All-pairs reachability (any positive length) of a packed adjacency."""
    reach = adj.copy()
    n = adj.shape[0]
    for m in range(n):
        col = _packed_column(reach, m)
        if col.any():
            reach[col] |= reach[m]
    return reach


def _packed_bounded(adj: np.ndarray, depth: int) -> np.ndarray:
    """Reachability by directed paths of length 1..depth (packed rows)."""
    reach = adj.copy()
    n = adj.shape[0]
    for _ in range(depth - 1):
        new = adj.copy()
        for m in range(n):
            col = _packed_column(adj, m)
            if col.any():
                new[col] |= reach[m]
        if np.array_equal(new, reach):
            break
        reach = new
    return reach


# ---------------------------------------------------------------------------
# single-source reachability


def _bfs_reach(rows: Sequence[int], v: int, depth: int) -> int:
    """Vertices reachable from v by <= depth arcs within one row set; v excluded."""
    me = 1 << v
    seen = me
    frontier = me
    for _ in range(depth):
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
    return seen & ~me


def _check_vertex(ct: ColoredTournament, v: int) -> None:
    if not 0 <= v < ct.n:
        raise InvalidInputError(f"vertex {v} out of range for order {ct.n}")


def mono_reach_set(ct: ColoredTournament, v: int, color: int, depth: int) -> int:
    """Bitset of vertices (other than v) reachable from v by a directed path
    of length <= depth whose arcs all carry ``color``.

    Shortest monochromatic reach never needs to revisit a vertex, so a
    level BFS over the single-color subgraph is exact.  depth 0 reaches
    nothing; v is excluded even when a monochromatic closed walk returns
    to it.
    """
    _check_vertex(ct, v)
    if not 0 <= color < ct.k:
        raise InvalidInputError(f"color {color} out of range for palette {ct.k}")
    if depth < 0:
        raise InvalidInputError("depth must be >= 0")
    if depth == 0:
        return 0
    return _bfs_reach(ct.rows_by_color()[color], v, depth)


def dominated_set(ct: ColoredTournament, v: int, depth: int) -> int:
    """Union over all colors of ``mono_reach_set``; v excluded."""
    _check_vertex(ct, v)
    if depth <= 0:
        return 0
    acc = 0
    for rows in ct.rows_by_color():
        acc |= _bfs_reach(rows, v, depth)
    return acc & ~(1 << v)


def all_dominated_rows(ct: ColoredTournament, depth: int) -> list[int]:
    """dominated_set for every vertex at once (row v = dominated set of v)."""
    n = ct.n
    if depth <= 0:
        return [0] * n
    if n >= _NUMPY_MIN_N:
        acc = None
        for rows in ct.rows_by_color():
            packed = _int_rows_to_packed(rows, n)
            if depth >= n - 1:
                reach = _packed_closure(packed)
            else:
                reach = _packed_bounded(packed, depth)
            acc = reach if acc is None else acc | reach
        out = _packed_to_int_rows(acc)
        return [row & ~(1 << v) for v, row in enumerate(out)]
    return [dominated_set(ct, v, depth) for v in range(n)]


class DominationResult(NamedTuple):
    vertex: int
    count: int  # root included


def max_domination(ct: ColoredTournament, depth: int) -> DominationResult:
    """Vertex maximizing 1 + |dominated_set| and that maximum.

    Ties break toward the smallest vertex index.
    """
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    best_v = 0
    best = -1
    for v, row in enumerate(all_dominated_rows(ct, depth)):
        cnt = 1 + row.bit_count()
        if cnt > best:
            best = cnt
            best_v = v
    return DominationResult(best_v, best)


def domination_sum(ct: ColoredTournament, depth: int = 2) -> int:
    """Sum over all vertices of |dominated_set(ct, v, depth)|."""
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    return sum(row.bit_count() for row in all_dominated_rows(ct, depth))


def failure_digraph(ct: ColoredTournament, depth: int) -> Digraph:
    """Digraph with arc (u, v) iff u does not dominate v within ``depth``."""
    if depth < 1:
        raise InvalidInputError("depth must be >= 1")
    n = ct.n
    full = full_mask(n)
    rows = [
        ~dom & full & ~(1 << u)
        for u, dom in enumerate(all_dominated_rows(ct, depth))
    ]
    return Digraph(n, rows, validate=False)


def directed_girth(d: Digraph) -> Optional[int]:
    """Length of a shortest directed cycle, or None if acyclic."""
    n = d.n
    rows = d.out_rows
    best: Optional[int] = None
    for v in range(n):
        me = 1 << v
        seen = me
        frontier = me
        dist = 0
        while frontier:
            dist += 1
            if best is not None and dist >= best:
                break
            new = 0
            f = frontier
            while f:
                low = f & -f
                new |= rows[low.bit_length() - 1]
                f ^= low
            new &= ~seen
            if not new:
                break
            back = 0
            g = new
            while g:
                low = g & -g
                u = low.bit_length() - 1
                if rows[u] >> v & 1:
                    back = 1
                    break
                g ^= low
            if back:
                cycle_len = dist + 1
                if best is None or cycle_len < best:
                    best = cycle_len
                break
            seen |= new
            frontier = new
    return best


def min_out_degree(d: Digraph) -> int:
    return min(r.bit_count() for r in d.out_rows)


# ---------------------------------------------------------------------------
# induced substructures


def _normalize_vertices(n: int, vertices) -> list[int]:
    if isinstance(vertices, int):
        sel = list(bits(vertices))
    else:
        sel = sorted(set(vertices))
    if not sel:
        raise InvalidInputError("vertex set must be nonempty")
    if sel[0] < 0 or sel[-1] >= n:
        raise InvalidInputError("vertex out of range")
    return sel


def induced_subtournament(t: Tournament, vertices) -> Tournament:
    """Induced tournament on the given vertices (bitset or iterable),
    relabeled 0..m-1 preserving relative vertex order."""
    sel = _normalize_vertices(t.n, vertices)
    m = len(sel)
    rows = []
    for a, i in enumerate(sel):
        row = 0
        src = t.out_rows[i]
        for b, j in enumerate(sel):
            if src >> j & 1:
                row |= 1 << b
        rows.append(row)
    return Tournament(m, rows, validate=False)


def induced_colored(ct: ColoredTournament, vertices) -> ColoredTournament:
    """Induced subtournament with the induced coloring carried along."""
    sel = _normalize_vertices(ct.n, vertices)
    sub_t = induced_subtournament(ct.t, sel)
    n = ct.n
    cols = bytearray()
    for a in range(len(sel)):
        for b in range(a + 1, len(sel)):
            cols.append(ct.c.colors[edge_index(sel[a], sel[b], n)])
    return ColoredTournament(sub_t, KColoring(ct.k, bytes(cols)))


# ---------------------------------------------------------------------------
# arborescences


@dataclass(frozen=True)
class Arborescence:
    """Witness tree: per-vertex parent and the color of the parent arc.

    parent[v] is None for the root and for vertices outside the tree;
    membership is root plus every vertex with a parent.
    """

    root: int
    parent: tuple[Optional[int], ...]
    edge_color: tuple[Optional[int], ...]
    depth_bound: int

    def vertex_mask(self) -> int:
        m = 1 << self.root
        for v, p in enumerate(self.parent):
            if p is not None:
                m |= 1 << v
        return m

    def size(self) -> int:
        return self.vertex_mask().bit_count()

    def depth(self) -> int:
        best = 0
        for v, p in enumerate(self.parent):
            if p is None:
                continue
            d = 0
            u: Optional[int] = v
            while u is not None and u != self.root:
                u = self.parent[u]
                d += 1
            best = max(best, d)
        return best

    def check(self, ct: ColoredTournament) -> None:
        """Raise InvalidInputError if any structural invariant fails."""
        n = len(self.parent)
        if not 0 <= self.root < n or self.parent[self.root] is not None:
            raise InvalidInputError("bad root")
        for v, p in enumerate(self.parent):
            if p is None:
                continue
            if not ct.t.has_arc(p, v):
                raise InvalidInputError(f"tree arc {p}->{v} missing in tournament")
            if self.edge_color[v] != ct.arc_color(p, v):
                raise InvalidInputError(f"tree arc {p}->{v} has wrong color")
            # walk to root: acyclic, depth bound, single color per path
            seen = {v}
            u = p
            d = 1
            color = self.edge_color[v]
            while u != self.root:
                if u is None or u in seen or self.parent[u] is None:
                    raise InvalidInputError("parent links do not reach the root")
                if self.edge_color[u] != color:
                    raise InvalidInputError("root path is not monochromatic")
                seen.add(u)
                u = self.parent[u]
                d += 1
                if d > n:
                    raise InvalidInputError("parent cycle")
            if d > self.depth_bound:
                raise InvalidInputError("path exceeds depth bound")


def _restricted_reach(rows: Sequence[int], v: int, allowed: int, depth: int):
    """BFS from v using only vertices in ``allowed`` as targets; returns
    (reached mask, parent dict)."""
    me = 1 << v
    seen = me
    frontier = me
    parents: dict[int, int] = {}
    for _ in range(depth):
        new = 0
        f = frontier
        while f:
            low = f & -f
            u = low.bit_length() - 1
            cand = rows[u] & allowed & ~seen & ~new
            for w in bits(cand):
                parents[w] = u
            new |= cand
            f ^= low
        if not new:
            break
        seen |= new
        frontier = new
    return seen & ~me, parents


_EXACT_ASSIGNMENT_LIMIT = 200_000


def arborescence_witness(ct: ColoredTournament, v: int, depth: int) -> Arborescence:
    """A maximum-size path-monochromatic arborescence of depth <= depth
    rooted at v.

    Every such tree decomposes into vertex-disjoint single-color subtrees
    hanging off the root, so the search assigns each dominated vertex to
    one color class and keeps, per class, the part reachable inside the
    class.  Small instances are solved exactly by enumerating class
    assignments; past _EXACT_ASSIGNMENT_LIMIT combinations the best of
    all color processing orders is used (lowest color first among ties).
    """
    _check_vertex(ct, v)
    if depth < 0:
        raise InvalidInputError("depth must be >= 0")
    n = ct.n
    k = ct.k
    rows = ct.rows_by_color()
    reach = [_bfs_reach(rows[c], v, depth) & ~(1 << v) for c in range(k)]
    dom = 0
    for r in reach:
        dom |= r
    if dom == 0:
        return Arborescence(v, tuple([None] * n), tuple([None] * n), depth)

    dom_list = list(bits(dom))
    choice_lists = [[c for c in range(k) if reach[c] >> u & 1] for u in dom_list]

    def evaluate(class_masks: list[int]):
        total = 0
        placed = []
        for c in range(k):
            if class_masks[c]:
                got, parents = _restricted_reach(
                    rows[c], v, class_masks[c], depth
                )
                total += got.bit_count()
                placed.append((c, parents, got))
            else:
                placed.append((c, {}, 0))
        return total, placed

    best_total = -1
    best_placed = None

    size = 1
    for ch in choice_lists:
        size *= len(ch)
        if size > _EXACT_ASSIGNMENT_LIMIT:
            break
    if size <= _EXACT_ASSIGNMENT_LIMIT:
        for combo in itertools.product(*choice_lists):
            masks = [0] * k
            for u, c in zip(dom_list, combo):
                masks[c] |= 1 << u
            total, placed = evaluate(masks)
            if total > best_total:
                best_total = total
                best_placed = placed
    else:
        orders = (
            list(itertools.permutations(range(k)))
            if k <= 5
            else [
                tuple(range(k)),
                tuple(reversed(range(k))),
                tuple(sorted(range(k), key=lambda c: -reach[c].bit_count())),
            ]
        )
        for order in orders:
            masks = [0] * k
            assigned = 0
            for c in order:
                masks[c] = reach[c] & ~assigned
                assigned |= masks[c]
            total, placed = evaluate(masks)
            if total > best_total:
                best_total = total
                best_placed = placed

    parent: list[Optional[int]] = [None] * n
    edge_color: list[Optional[int]] = [None] * n
    for c, parents, got in best_placed:
        for u in bits(got):
            parent[u] = parents[u]
            edge_color[u] = c
    return Arborescence(v, tuple(parent), tuple(edge_color), depth)

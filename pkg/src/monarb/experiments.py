"""Seeded Monte Carlo probes and heuristic packing.

Every operation here is a pure function of (inputs, seed).  Trials draw
independent substreams derived from the master seed (see
:mod:`monarb.rng`), so any single trial can be replayed in isolation and
results do not depend on scheduling.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._bitops import full_mask
from .constructions import bipartition_coloring, recursive_partition_coloring
from .core import (
    _NUMPY_MIN_N,
    ColoredTournament,
    KColoring,
    Tournament,
    _bfs_reach,
    edge_count,
    failure_digraph,
    directed_girth,
    max_domination,
    min_out_degree,
)
from .errors import CapacityError, CheckFailure, InvalidInputError
from .rng import derive_seed, make_rng, rand_below, shuffled


@dataclass(frozen=True)
class TrialStats:
    """Per-trial values (already normalized where applicable) plus summaries."""

    kind: str
    n: int
    trials: int
    seed: int
    values: tuple[float, ...]
    params: dict = field(default_factory=dict)

    @property
    def vmin(self) -> float:
        return min(self.values)

    @property
    def vmax(self) -> float:
        return max(self.values)

    @property
    def vmean(self) -> float:
        return sum(self.values) / len(self.values)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "values": list(self.values),
            "min": self.vmin,
            "mean": self.vmean,
            "max": self.vmax,
            **self.params,
        }


# ---------------------------------------------------------------------------
# sampling


def sample_tournament(n: int, seed) -> Tournament:
    """Uniform random tournament: each pair's orientation is a fair coin.

    All coins come from one ``getrandbits`` call on the seeded generator
    (bit e decides edge e, set meaning i -> j for the pair (i, j)), so
    identical (n, seed) give identical tournaments on every platform.
    """
    if n < 1:
        raise InvalidInputError("order must be >= 1")
    rng = make_rng(seed)
    e = edge_count(n)
    if e == 0:
        return Tournament(1, (0,), validate=False)
    coins = rng.getrandbits(e)
    if n >= _NUMPY_MIN_N:
        from .core import _bool_to_int_rows

        flat = np.frombuffer(
            coins.to_bytes((e + 7) // 8, "little"), dtype=np.uint8
        )
        b = np.unpackbits(flat, bitorder="little")[:e].astype(bool)
        iu, ju = np.triu_indices(n, 1)
        m = np.zeros((n, n), dtype=np.uint8)
        m[iu[b], ju[b]] = 1
        m[ju[~b], iu[~b]] = 1
        return Tournament(n, _bool_to_int_rows(m), validate=False)
    rows = [0] * n
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if coins >> idx & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            idx += 1
    return Tournament(n, rows, validate=False)


def sample_coloring(n: int, k: int, seed) -> KColoring:
    """Uniform random k-coloring of the n(n-1)/2 edges."""
    rng = make_rng(seed)
    e = edge_count(n)
    if k == 2:
        coins = rng.getrandbits(e) if e else 0
        return KColoring(2, bytes(coins >> i & 1 for i in range(e)))
    return KColoring(k, bytes(rand_below(rng, k) for _ in range(e)))


# ---------------------------------------------------------------------------
# Monte Carlo estimates of the minimum domination fraction


def mc_bipartition(n: int, trials: int, seed: int) -> TrialStats:
    """Per trial: sample a tournament, apply the balanced 2-partition
    coloring, record the best depth-2 domination count divided by n."""
    if n < 4:
        raise InvalidInputError("need n >= 4")
    values = []
    for i in range(trials):
        rng = make_rng(derive_seed(seed, f"bipartition:{i}"))
        t = sample_tournament(n, rng)
        ct = bipartition_coloring(t, rng)
        values.append(max_domination(ct, 2).count / n)
    return TrialStats("mc-bipartition", n, trials, seed, tuple(values))


def mc_recursive(n: int, k: int, trials: int, seed: int) -> TrialStats:
    """Per trial: sample a tournament, apply the recursive partition
    coloring with k colors, record the best unbounded-depth domination
    count divided by n."""
    if k < 1:
        raise InvalidInputError("need k >= 1")
    values = []
    for i in range(trials):
        rng = make_rng(derive_seed(seed, f"recursive:{i}"))
        t = sample_tournament(n, rng)
        ct = recursive_partition_coloring(t, k, rng)
        values.append(max_domination(ct, n - 1).count / n)
    return TrialStats("mc-recursive", n, trials, seed, tuple(values), {"k": k})


# ---------------------------------------------------------------------------
# greedy edge-disjoint packing


def _embed_once(
    host: Tournament,
    pattern: Tournament,
    host_in_rows: list[int],
    used_rows: list[int],
    rng,
    node_budget: int,
) -> Optional[tuple[int, ...]]:
    """One randomized backtracking attempt to embed the pattern into the
    host, orientation-preserving and avoiding used pairs.

    Candidates for each position are a single bitmask intersection over
    the placed vertices, so a node costs O(q) row operations.
    """
    n = host.n
    q = pattern.n
    hrows = host.out_rows
    prows = pattern.out_rows
    image = [-1] * q
    budget = [node_budget]
    order = shuffled(rng, range(n))
    all_mask = full_mask(n)

    def place(m: int, free: int) -> bool:
        if m == q:
            return True
        cand_mask = free
        for idx in range(m):
            img = image[idx]
            rel = hrows[img] if prows[idx] >> m & 1 else host_in_rows[img]
            cand_mask &= rel & ~used_rows[img]
            if not cand_mask:
                return False
        for cand in order:
            if not cand_mask >> cand & 1:
                continue
            if budget[0] <= 0:
                return False
            budget[0] -= 1
            image[m] = cand
            if place(m + 1, free & ~(1 << cand)):
                return True
            image[m] = -1
        return False

    if place(0, all_mask):
        return tuple(image)
    return None


def greedy_pack(
    host: Tournament,
    pattern: Tournament,
    seed,
    failure_budget: Optional[int] = None,
    node_budget: int = 600,
) -> list[tuple[int, ...]]:
    """Greedy collection of pairwise edge-disjoint pattern copies.

    Copies are found by randomized backtracking embeddings (seeded);
    each accepted copy reserves all its host pairs.  The search stops
    after ``failure_budget`` consecutive failed attempts (default
    50 * C(n,2) / C(q,2)); ``node_budget`` caps the backtracking done in
    a single attempt.  Every returned copy is verified isomorphic to the
    pattern and edge-disjoint from the others.
    """
    n, q = host.n, pattern.n
    if q > n:
        raise InvalidInputError("pattern larger than host")
    if failure_budget is None:
        failure_budget = 50 * edge_count(n) // edge_count(q) if q > 1 else 50
    rng = make_rng(seed)
    host_in_rows = host.in_rows()
    used_rows = [0] * n
    copies: list[tuple[int, ...]] = []
    failures = 0
    while failures < failure_budget:
        image = _embed_once(host, pattern, host_in_rows, used_rows, rng, node_budget)
        if image is None:
            failures += 1
            continue
        failures = 0
        copies.append(image)
        for a in range(q):
            for b in range(a + 1, q):
                used_rows[image[a]] |= 1 << image[b]
                used_rows[image[b]] |= 1 << image[a]
    verify_packing(host, pattern, copies)
    return copies


def verify_packing(host: Tournament, pattern: Tournament, copies) -> int:
    """Check every copy is an orientation-preserving embedding and all
    copies are pairwise edge-disjoint; returns the number of host edges
    covered.  Raises CheckFailure on any violation."""
    q = pattern.n
    seen_pairs: set[tuple[int, int]] = set()
    for image in copies:
        if len(set(image)) != q:
            raise CheckFailure("copy image is not injective")
        for a in range(q):
            for b in range(q):
                if a != b and pattern.has_arc(a, b) != host.has_arc(image[a], image[b]):
                    raise CheckFailure("copy is not orientation-preserving")
        for a in range(q):
            for b in range(a + 1, q):
                key = (min(image[a], image[b]), max(image[a], image[b]))
                if key in seen_pairs:
                    raise CheckFailure("copies share a host edge")
                seen_pairs.add(key)
    return len(seen_pairs)


def pack_coverage(host: Tournament, pattern: Tournament, copies) -> float:
    return len(copies) * edge_count(pattern.n) / edge_count(host.n)


# ---------------------------------------------------------------------------
# instance checks


@dataclass(frozen=True)
class ChInstanceReport:
    """Failure-digraph girth check on one colored instance.

    When every vertex fails to reach at least ceil(n/(depth+1)) others,
    the failure digraph must contain a short directed cycle (length at
    most depth+1) for the domination lower bound to hold; an instance
    where it does not is a loud counterexample candidate.
    """

    n: int
    depth: int
    min_out_degree: int
    threshold: int
    triggered: bool
    girth: Optional[int]
    consistent: bool

    def summary(self) -> dict:
        return {
            "n": self.n,
            "depth": self.depth,
            "min_out_degree": self.min_out_degree,
            "threshold": self.threshold,
            "triggered": self.triggered,
            "girth": self.girth,
            "consistent": self.consistent,
        }


def ch_instance_check(ct: ColoredTournament, depth: int) -> ChInstanceReport:
    f = failure_digraph(ct, depth)
    dmin = min_out_degree(f)
    threshold = -(-ct.n // (depth + 1))  # ceil
    triggered = dmin >= threshold
    girth = directed_girth(f) if triggered else None
    consistent = (not triggered) or (girth is not None and girth <= depth + 1)
    return ChInstanceReport(
        ct.n, depth, dmin, threshold, triggered, girth, consistent
    )


# ---------------------------------------------------------------------------
# exhaustive coloring probe at depth 3


def probe_conjecture(n: int, trials: int, seed: int) -> TrialStats:
    """Per trial: sample a tournament and sweep all 2-colorings, recording
    the fraction that leave some vertex dominating everything at depth 3.

    Color swap is factored out (first edge fixed to color 0), halving the
    sweep without changing the fraction.
    """
    if n > 7:
        raise CapacityError("exhaustive coloring probe capped at order 7")
    if n < 2:
        raise InvalidInputError("need n >= 2")
    e = edge_count(n)
    full = full_mask(n)
    values = []
    for i in range(trials):
        rng = make_rng(derive_seed(seed, f"probe:{i}"))
        t = sample_tournament(n, rng)
        pairs = list(itertools.combinations(range(n), 2))
        arcs = [(a, b) if t.has_arc(a, b) else (b, a) for a, b in pairs]
        hits = 0
        for mask in range(1 << (e - 1)):
            mask <<= 1  # edge 0 keeps color 0
            rows0 = [0] * n
            rows1 = [0] * n
            for idx, (tail, head) in enumerate(arcs):
                if mask >> idx & 1:
                    rows1[tail] |= 1 << head
                else:
                    rows0[tail] |= 1 << head
            for v in range(n):
                reach = _bfs_reach(rows0, v, 3) | _bfs_reach(rows1, v, 3)
                if (reach | (1 << v)) == full:
                    hits += 1
                    break
        values.append(hits / (1 << (e - 1)))
    return TrialStats("probe-depth3", n, trials, seed, tuple(values))

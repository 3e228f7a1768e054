"""Isomorph-free tournament generation, canonical forms, and the
domination-sum survey.

The canonical form of a tournament is the minimum, over all vertex
orderings, of the compact-format bit string (upper-triangle orientation
bits in row-major edge order).  The minimizing search walks an ordered
partition of the vertices: picking the vertex for the next position
forces, for every later cell, its in-neighbors to precede its
out-neighbors (anything else yields a lexicographically larger row), so
cells split as positions are fixed and only first-cell ties branch.
That makes orders up to 12 cheap, including the regular ones where
plain degree sorting has no traction.

Generation by augmentation: every representative of order n-1 is
extended by all 2^(n-1) orientation patterns of a new vertex and
deduplicated by canonical id.  Counts for n = 1..9:
1, 1, 2, 4, 12, 56, 456, 6880, 191536.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Optional

from ._bitops import bits, full_mask
from .core import Tournament, edge_count
from .errors import CapacityError, InvalidInputError
from .io import tournament_from_compact
from .search import s_exact

_CANON_MAX_N = 12
_ENUM_MAX_N = 9
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CanonicalId:
    """Labeling-independent identifier: order plus canonical compact string."""

    n: int
    key: str  # "n:HEX", the compact form of the canonically relabeled tournament


def _canonical_rows(rows: tuple[int, ...], n: int) -> list[int]:
    """Per-position upper-triangle bit patterns of the canonical relabeling."""
    if n == 1:
        return []
    full = full_mask(n)
    in_rows = [~rows[v] & full & ~(1 << v) for v in range(n)]
    best: Optional[list[int]] = None
    cur: list[int] = []
    version = 0

    def dfs(cells: list[int], rel: int) -> None:
        nonlocal best, version
        pos = len(cur)
        if pos == n:
            if rel < 0:
                best = cur.copy()
                version += 1
            return
        cand = []
        first = cells[0]
        rest = cells[1:]
        for v in bits(first):
            out_v = rows[v]
            in_v = in_rows[v]
            row = 0
            newcells: list[int] = []
            rem = first & ~(1 << v)
            for seg in (rem, *rest):
                if not seg:
                    continue
                ins = seg & in_v
                outs = seg ^ ins  # seg & out_v: every pair is oriented
                row = (row << seg.bit_count()) | ((1 << outs.bit_count()) - 1)
                if ins:
                    newcells.append(ins)
                if outs:
                    newcells.append(outs)
            cand.append((row, v, newcells))
        cand.sort(key=lambda it: (it[0], it[1]))
        my_rel = rel
        for row, v, newcells in cand:
            if best is not None and my_rel == 0:
                ref = best[pos]
                if row > ref:
                    break
                child_rel = 0 if row == ref else -1
            else:
                child_rel = -1
            before = version
            cur.append(row)
            dfs(newcells, child_rel)
            cur.pop()
            if version != before and my_rel < 0:
                my_rel = 0

    dfs([full], -1)
    return best


def _rows_key(canon: list[int], n: int) -> str:
    e = edge_count(n)
    acc = 0
    for pos, row in enumerate(canon):
        acc = (acc << (n - 1 - pos)) | row
    digits = (e + 3) // 4
    acc <<= digits * 4 - e
    return f"{n}:{acc:0{digits}X}" if e else f"{n}:"


def canonical_form(t: Tournament) -> CanonicalId:
    """Canonical id of the isomorphism class of ``t``."""
    if t.n > _CANON_MAX_N:
        raise CapacityError(f"canonical form capped at order {_CANON_MAX_N}")
    return CanonicalId(t.n, _rows_key(_canonical_rows(t.out_rows, t.n), t.n))


def canonical_key(rows: tuple[int, ...], n: int) -> str:
    return _rows_key(_canonical_rows(rows, n), n)


def is_regular(t: Tournament) -> bool:
    """All out-degrees equal (n-1)/2 (impossible for even order)."""
    if t.n % 2 == 0:
        return False
    want = (t.n - 1) // 2
    return all(r.bit_count() == want for r in t.out_rows)


# ---------------------------------------------------------------------------
# generation


@lru_cache(maxsize=None)
def _class_keys(n: int) -> tuple[str, ...]:
    if n < 1:
        raise InvalidInputError("order must be >= 1")
    if n > _ENUM_MAX_N:
        raise CapacityError(f"enumeration capped at order {_ENUM_MAX_N}")
    if n == 1:
        return ("1:",)
    seen: set[str] = set()
    for key in _class_keys(n - 1):
        parent = tournament_from_compact(key)
        prows = parent.out_rows
        m = n - 1
        newbit = 1 << m
        for pattern in range(1 << m):
            rows = [
                prows[j] | (newbit if not pattern >> j & 1 else 0)
                for j in range(m)
            ]
            rows.append(pattern)
            k = canonical_key(tuple(rows), n)
            seen.add(k)
    return tuple(sorted(seen))


def enumerate_tournaments(n: int) -> Iterator[Tournament]:
    """One representative per isomorphism class of order n, in canonical-id
    order; each yielded tournament is canonically labeled."""
    for key in _class_keys(n):
        yield tournament_from_compact(key)


def class_count(n: int) -> int:
    return len(_class_keys(n))


def orientation_class_count(n: int) -> int:
    """Independent count oracle: canonicalize every one of the
    2^(n(n-1)/2) labeled orientations and count distinct ids."""
    if n > 6:
        raise CapacityError("orientation sweep oracle capped at order 6")
    e = edge_count(n)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen: set[str] = set()
    for mask in range(1 << e):
        rows = [0] * n
        for idx, (i, j) in enumerate(pairs):
            if mask >> idx & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
        seen.add(canonical_key(tuple(rows), n))
    return len(seen)


# ---------------------------------------------------------------------------
# survey


@dataclass(frozen=True)
class SurveyRecord:
    """One solved class: canonical id, order, regularity, minimum
    domination sum, a witness coloring, and solver statistics."""

    id: str
    n: int
    regular: bool
    s_value: int
    witness: str
    nodes: int
    seconds: float
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @staticmethod
    def from_json(line: str) -> "SurveyRecord":
        d = json.loads(line)
        d.pop("schema_version", None)
        return SurveyRecord(schema_version=SCHEMA_VERSION, **d)


def _solve_class(args) -> SurveyRecord:
    key, depth = args
    t = tournament_from_compact(key)
    res = s_exact(t, depth)
    from .io import coloring_to_text

    return SurveyRecord(
        id=key,
        n=t.n,
        regular=is_regular(t),
        s_value=res.value,
        witness=coloring_to_text(res.witness),
        nodes=res.nodes_explored,
        seconds=round(res.wall_time, 6),
    )


def survey_s(
    n: int,
    sink,
    depth: int = 2,
    regular_only: bool = False,
    resume: bool = False,
    jobs: int = 1,
) -> dict[int, int]:
    """Solve the domination-sum minimum for every class of order ``n``,
    appending one JSON record per class to ``sink`` (flushed per record,
    restartable via ``resume``).  Returns the histogram of values over
    all records present for this order at the end.
    """
    path = Path(sink)
    done: set[str] = set()
    records: dict[str, SurveyRecord] = {}
    if resume and path.exists():
        with path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = SurveyRecord.from_json(line)
                if rec.n == n:
                    done.add(rec.id)
                    records[rec.id] = rec
    keys = [
        k
        for k in _class_keys(n)
        if not regular_only or is_regular(tournament_from_compact(k))
    ]
    todo = [k for k in keys if k not in done]
    mode = "a" if (resume and path.exists()) else "w"
    with path.open(mode) as fh:
        if mode == "w":
            records.clear()
        if jobs > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for rec in pool.map(_solve_class, [(k, depth) for k in todo]):
                    records[rec.id] = rec
                    fh.write(rec.to_json() + "\n")
                    fh.flush()
        else:
            for k in todo:
                rec = _solve_class((k, depth))
                records[rec.id] = rec
                fh.write(rec.to_json() + "\n")
                fh.flush()
    hist: dict[int, int] = {}
    for k in keys:
        rec = records.get(k)
        if rec is not None:
            hist[rec.s_value] = hist.get(rec.s_value, 0) + 1
    return hist

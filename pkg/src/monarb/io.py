"""Text formats for tournaments and colorings.

Matrix format: n lines of n space-separated 0/1 entries, zero diagonal,
entry (i, j) = 1 meaning the arc i->j.

Compact format: ``n:HEX`` where the hex string encodes the
upper-triangle orientation bits (bit = 1 iff i->j for i < j) in
edge-index order, most significant bit first, zero-padded to a whole
number of hex digits.

Coloring format: a single line with one digit per edge when the palette
has at most 10 colors, else comma-separated integers, in edge-index
order.
"""

from __future__ import annotations

import importlib.resources

from .core import ColoredTournament, KColoring, Tournament, edge_count
from .errors import InvalidInputError


def tournament_to_matrix_text(t: Tournament) -> str:
    lines = []
    for i in range(t.n):
        row = t.out_rows[i]
        lines.append(" ".join("1" if row >> j & 1 else "0" for j in range(t.n)))
    return "\n".join(lines) + "\n"


def tournament_from_matrix_text(text: str) -> Tournament:
    rows_txt = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    n = len(rows_txt)
    if n == 0:
        raise InvalidInputError("empty matrix")
    rows = []
    for i, row in enumerate(rows_txt):
        if len(row) != n:
            raise InvalidInputError(f"row {i} has {len(row)} entries, expected {n}")
        r = 0
        for j, cell in enumerate(row):
            if cell not in ("0", "1"):
                raise InvalidInputError(f"matrix entry ({i}, {j}) must be 0 or 1")
            if cell == "1":
                r |= 1 << j
        rows.append(r)
    return Tournament(n, rows)


def tournament_to_compact(t: Tournament) -> str:
    n = t.n
    e = edge_count(n)
    acc = 0
    for i in range(n):
        row = t.out_rows[i]
        for j in range(i + 1, n):
            acc = (acc << 1) | (row >> j & 1)
    digits = (e + 3) // 4
    acc <<= digits * 4 - e
    return f"{n}:{acc:0{digits}X}" if e else f"{n}:"


def tournament_from_compact(s: str) -> Tournament:
    try:
        n_txt, hex_txt = s.split(":", 1)
        n = int(n_txt)
    except ValueError as exc:
        raise InvalidInputError(f"bad compact string {s!r}") from exc
    e = edge_count(n)
    digits = (e + 3) // 4
    if len(hex_txt) != digits:
        raise InvalidInputError(
            f"compact string for order {n} needs {digits} hex digits, got {len(hex_txt)}"
        )
    acc = int(hex_txt, 16) if hex_txt else 0
    acc >>= digits * 4 - e
    rows = [0] * n
    pos = e
    for i in range(n):
        for j in range(i + 1, n):
            pos -= 1
            if acc >> pos & 1:
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
    return Tournament(n, rows)


def coloring_to_text(c: KColoring) -> str:
    if c.k <= 10:
        return "".join(str(x) for x in c.colors)
    return ",".join(str(x) for x in c.colors)


def coloring_from_text(text: str, k: int) -> KColoring:
    text = text.strip()
    if "," in text:
        vals = [int(x) for x in text.split(",")]
    else:
        vals = [int(ch) for ch in text]
    return KColoring(k, vals)


def colored_from_files(matrix_text: str, coloring_text: str, k: int) -> ColoredTournament:
    t = tournament_from_matrix_text(matrix_text)
    c = coloring_from_text(coloring_text, k)
    return ColoredTournament(t, c)


_ORDER9_FIXTURE = "table1.mat"


def load_order9_anchor() -> Tournament:
    """The shipped regular order-9 tournament used as the survey anchor.

    The fixture is checked before use: every row must sum to 4
    (out-degree regularity), and the matrix parser enforces the
    tournament invariants.
    """
    text = (
        importlib.resources.files("monarb.data")
        .joinpath(_ORDER9_FIXTURE)
        .read_text()
    )
    t = tournament_from_matrix_text(text)
    if t.n != 9 or any(t.out_degree(v) != 4 for v in range(9)):
        raise InvalidInputError("order-9 anchor fixture failed its checksum")
    return t

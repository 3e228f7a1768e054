"""The ``monarb`` command.

Every subcommand prints one JSON object (with a ``schema_version``
field) on stdout; logs go to stderr.  Exit codes: 0 success, 1 invalid
input, 2 capacity exceeded, 3 failed consistency check.

A config file of ``key=value`` lines (``--config``) supplies defaults
for any flag of the chosen subcommand; explicit flags win.  The
``MONARB_THREADS`` environment variable overrides the thread count
only.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions, enumeration, experiments, io, search
from .core import (
    ColoredTournament,
    Tournament,
    all_dominated_rows,
    max_domination,
)
from .errors import CapacityError, CheckFailure, InvalidInputError

SCHEMA_VERSION = 1
log = logging.getLogger("monarb")


def _emit(payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _load_tournament(spec: str) -> Tournament:
    obj = _load_any(spec)
    return obj.t if isinstance(obj, ColoredTournament) else obj


def _load_any(spec: str):
    """A path to a matrix file, a compact string, or a construction token."""
    p = Path(spec)
    if p.exists():
        return io.tournament_from_matrix_text(p.read_text())
    if ":" in spec and spec.split(":", 1)[0].isdigit():
        return io.tournament_from_compact(spec)
    return constructions.parse_construction(spec)


def _load_colored(spec: str, coloring_path: str | None, k: int | None) -> ColoredTournament:
    obj = _load_any(spec)
    if isinstance(obj, ColoredTournament):
        if coloring_path is not None:
            raise InvalidInputError(
                "construction already carries a coloring; --coloring not allowed"
            )
        return obj
    if coloring_path is None:
        raise InvalidInputError("a plain tournament input needs --coloring")
    colors = io.coloring_from_text(Path(coloring_path).read_text(), k or 2)
    return ColoredTournament(obj, colors)


def _threads(args) -> int:
    env = os.environ.get("MONARB_THREADS")
    if env is not None:
        return max(1, int(env))
    if getattr(args, "threads", None):
        return max(1, args.threads)
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# subcommands


def _cmd_f(args) -> int:
    t = _load_tournament(args.input)
    fn = search.f_exact_bruteforce if args.brute else search.f_exact_bnb
    res = fn(t, args.colors, args.depth)
    _emit(
        {
            "command": "f",
            "n": t.n,
            "colors": args.colors,
            "depth": args.depth,
            "value": res.value,
            "witness": io.coloring_to_text(res.witness),
            "nodes": res.nodes_explored,
            "seconds": round(res.wall_time, 6),
        }
    )
    return 0


def _cmd_s(args) -> int:
    t = _load_tournament(args.input)
    res = search.s_exact(t, args.depth, engine=args.engine)
    _emit(
        {
            "command": "s",
            "n": t.n,
            "depth": args.depth,
            "value": res.value,
            "witness": io.coloring_to_text(res.witness),
            "nodes": res.nodes_explored,
            "seconds": round(res.wall_time, 6),
        }
    )
    return 0


def _cmd_enumerate(args) -> int:
    records = []
    regular = 0
    for t in enumeration.enumerate_tournaments(args.n):
        reg = enumeration.is_regular(t)
        regular += reg
        if args.regular and not reg:
            continue
        records.append(
            {
                "schema_version": SCHEMA_VERSION,
                "id": io.tournament_to_compact(t),
                "n": t.n,
                "regular": reg,
            }
        )
    if args.out:
        with open(args.out, "w") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    _emit(
        {
            "command": "enumerate",
            "n": args.n,
            "classes": enumeration.class_count(args.n),
            "regular_classes": regular,
            "listed": len(records),
            "out": args.out,
        }
    )
    return 0


def _cmd_survey(args) -> int:
    hist = enumeration.survey_s(
        args.n,
        args.out,
        depth=args.depth,
        regular_only=args.regular,
        resume=args.resume,
        jobs=_threads(args),
    )
    _emit(
        {
            "command": "survey",
            "n": args.n,
            "depth": args.depth,
            "regular_only": args.regular,
            "histogram": {str(k): v for k, v in sorted(hist.items())},
            "classes_solved": sum(hist.values()),
            "out": args.out,
        }
    )
    return 0


def _cmd_mc(args) -> int:
    if args.mode == "bipartition":
        stats = experiments.mc_bipartition(args.n, args.trials, args.seed)
    else:
        stats = experiments.mc_recursive(args.n, args.colors, args.trials, args.seed)
    _emit({"command": f"mc-{args.mode}", **stats.summary()})
    return 0


def _cmd_pack(args) -> int:
    host = _load_tournament(args.host)
    pattern = _load_tournament(args.pattern)
    copies = experiments.greedy_pack(
        host, pattern, args.seed, failure_budget=args.budget
    )
    covered = experiments.verify_packing(host, pattern, copies)
    _emit(
        {
            "command": "pack",
            "host_n": host.n,
            "pattern_n": pattern.n,
            "seed": args.seed,
            "copies": len(copies),
            "edges_covered": covered,
            "coverage": experiments.pack_coverage(host, pattern, copies),
        }
    )
    if args.out:
        with open(args.out, "w") as fh:
            for image in copies:
                fh.write(json.dumps({"schema_version": SCHEMA_VERSION, "image": list(image)}) + "\n")
    return 0


def _cmd_probe(args) -> int:
    stats = experiments.probe_conjecture(args.n, args.trials, args.seed)
    _emit(
        {
            "command": "probe",
            **stats.summary(),
            "all_full": all(v == 1.0 for v in stats.values),
        }
    )
    return 0


def _cmd_chcheck(args) -> int:
    ct = _load_colored(args.input, args.coloring, args.colors)
    report = experiments.ch_instance_check(ct, args.depth)
    _emit({"command": "chcheck", **report.summary()})
    if not report.consistent:
        log.error("short-cycle check violated: counterexample candidate at order %d", ct.n)
        return 3
    return 0


def _cmd_make(args) -> int:
    obj = constructions.parse_construction(args.name)
    t = obj.t if isinstance(obj, ColoredTournament) else obj
    payload = {
        "command": "make",
        "name": args.name,
        "n": t.n,
        "compact": io.tournament_to_compact(t),
    }
    if isinstance(obj, ColoredTournament):
        payload["colors"] = obj.k
        payload["coloring"] = io.coloring_to_text(obj.c)
    if args.out_matrix:
        Path(args.out_matrix).write_text(io.tournament_to_matrix_text(t))
    if args.out_coloring:
        if not isinstance(obj, ColoredTournament):
            raise InvalidInputError(f"construction {args.name!r} has no coloring")
        Path(args.out_coloring).write_text(io.coloring_to_text(obj.c) + "\n")
    _emit(payload)
    return 0


# ---------------------------------------------------------------------------
# named verification bundles


def _check_r_power(args) -> dict:
    details = []
    ok = True
    for depth, r in ((2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3)):
        base = constructions.red_path_tournament(depth + 2)
        ct = constructions.power(base, r)
        n = ct.n
        expected = (1 + depth * n) // (depth + 1)
        counts = {1 + row.bit_count() for row in all_dominated_rows(ct, depth)}
        good = counts == {expected}
        ok = ok and good
        details.append(
            {"depth": depth, "r": r, "n": n, "expected": expected, "counts": sorted(counts), "pass": good}
        )
    return {"pass": ok, "details": details}


def _check_rainbow_power(args) -> dict:
    r = args.r or 3
    depth = args.depth or 2
    ct = constructions.power(constructions.rainbow_triangle(), r)
    n = ct.n
    expected = (n + 1) // 2
    res = max_domination(ct, depth)
    rows = all_dominated_rows(ct, depth)
    per_vertex = all(
        rows[v] == ct.t.out_rows[v] for v in range(n)
    )
    good = res.count == expected and per_vertex
    return {
        "pass": good,
        "details": [
            {
                "r": r,
                "depth": depth,
                "n": n,
                "expected": expected,
                "value": res.count,
                "dominates_exactly_out_neighbors": per_vertex,
            }
        ],
    }


def _check_q_power_bound(args) -> dict:
    details = []
    ok = True
    rmax = args.r or 3
    cases = [("R:4", constructions.red_path_tournament(4).t)]
    cases += [
        (f"order4#{i}", t) for i, t in enumerate(enumeration.enumerate_tournaments(4))
    ]
    for name, q_t in cases:
        q = q_t.n
        fres = search.f_exact_bnb(q_t, 2, 2)
        t_val = fres.value - 1
        base = ColoredTournament(q_t, fres.witness)
        for r in range(1, rmax + 1):
            ct = constructions.power(base, r)
            bound = 1 + t_val * (q**r - 1) // (q - 1)
            got = max_domination(ct, 2).count
            good = got <= bound
            ok = ok and good
            details.append(
                {"base": name, "r": r, "bound": bound, "value": got, "pass": good}
            )
    return {"pass": ok, "details": details}


def _check_rk_table(args) -> dict:
    kmax = args.kmax or 12
    rates = constructions.domination_rate_sequence(max(kmax, 5))
    expected = {3: Fraction(3, 4), 4: Fraction(2, 3), 5: Fraction(5, 8)}
    details = []
    ok = True
    for k, want in expected.items():
        good = rates[k - 1] == want
        ok = ok and good
        details.append({"k": k, "expected": str(want), "actual": str(rates[k - 1]), "pass": good})
    for k in range(3, kmax + 1):
        bound = constructions.domination_rate_closed_form(k)
        good = rates[k - 1] <= bound
        ok = ok and good
        details.append(
            {"k": k, "rate": str(rates[k - 1]), "closed_form": str(bound), "pass": good}
        )
    return {"pass": ok, "details": details}


def _check_fig1(args) -> dict:
    details = []
    ok = True
    for i, t in enumerate(enumeration.enumerate_tournaments(4)):
        res = search.s_exact(t)
        good = res.value <= 8
        ok = ok and good
        details.append({"class": i, "s": res.value, "bound": 8, "pass": good})
    return {"pass": ok, "details": details}


def _check_counts(args) -> dict:
    n = args.n or 6
    expected = {1: 1, 2: 1, 3: 2, 4: 4, 5: 12, 6: 56, 7: 456, 8: 6880, 9: 191536}
    details = []
    ok = True
    for m in range(1, n + 1):
        got = enumeration.class_count(m)
        good = got == expected[m]
        entry = {"n": m, "classes": got, "expected": expected[m], "pass": good}
        if m <= 6:
            oracle = enumeration.orientation_class_count(m)
            entry["orientation_oracle"] = oracle
            good = good and oracle == got
            entry["pass"] = good
        ok = ok and good
        details.append(entry)
    return {"pass": ok, "details": details}


_CHECKS = {
    "r-power": _check_r_power,
    "rainbow-power": _check_rainbow_power,
    "q-power-bound": _check_q_power_bound,
    "rk-table": _check_rk_table,
    "fig1": _check_fig1,
    "counts": _check_counts,
}


def _cmd_verify(args) -> int:
    if args.name not in _CHECKS:
        raise InvalidInputError(
            f"unknown check {args.name!r}; known: {', '.join(sorted(_CHECKS))}"
        )
    result = _CHECKS[args.name](args)
    _emit({"command": "verify", "check": args.name, **result})
    return 0 if result["pass"] else 3


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monarb",
        description="Monochromatic depth-bounded domination in edge-colored tournaments",
    )
    parser.add_argument("--config", help="key=value file supplying flag defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("f", help="minimize the best domination count over k-colorings")
    p.add_argument("--input", required=True, help="matrix file, compact string, or construction")
    p.add_argument("--colors", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--brute", action="store_true")
    g.add_argument("--bnb", action="store_true")
    p.add_argument("--sequential", action="store_true", help="reserved; runs are sequential")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_f)

    p = sub.add_parser("s", help="minimize the depth-2 domination sum over 2-colorings")
    p.add_argument("--input", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--engine", choices=("auto", "pairs", "edges"), default="auto")
    p.add_argument("--sequential", action="store_true")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_s)

    p = sub.add_parser("enumerate", help="isomorph-free tournament classes")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--regular", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("survey", help="domination-sum survey over all classes of an order")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--regular", action="store_true")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_survey)

    p = sub.add_parser("mc", help="Monte Carlo domination fraction estimates")
    p.add_argument("mode", choices=("bipartition", "recursive"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--colors", type=int, default=3, help="palette size for recursive mode")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("pack", help="greedy edge-disjoint pattern packing")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, help="consecutive-failure budget")
    p.add_argument("--out", help="write accepted embeddings as JSON lines")
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("probe", help="exhaustive 2-coloring sweep for depth-3 full dominators")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_probe)

    p = sub.add_parser("chcheck", help="failure digraph short-cycle instance check")
    p.add_argument("--input", required=True)
    p.add_argument("--coloring", help="coloring file when --input is a plain tournament")
    p.add_argument("--colors", type=int, help="palette size of --coloring")
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=_cmd_chcheck)

    p = sub.add_parser("make", help="materialize a named construction")
    p.add_argument("name")
    p.add_argument("--out-matrix")
    p.add_argument("--out-coloring")
    p.set_defaults(func=_cmd_make)

    p = sub.add_parser("verify", help="named invariant bundles")
    p.add_argument("name")
    p.add_argument("--kmax", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--depth", type=int)
    p.set_defaults(func=_cmd_verify)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Pull --config out of argv and turn its keys into subcommand defaults."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    try:
        path = argv[idx + 1]
    except IndexError as exc:
        raise InvalidInputError("--config needs a file path") from exc
    rest = argv[:idx] + argv[idx + 2 :]
    defaults = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidInputError(f"bad config line {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        value = value.strip()
        if value.lower() in ("true", "false"):
            defaults[key] = value.lower() == "true"
        else:
            try:
                defaults[key] = int(value)
            except ValueError:
                defaults[key] = value
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**{k: v for k, v in defaults.items() if _has_dest(sp, k)})
            for act in sp._actions:
                if act.dest in defaults and act.required:
                    act.required = False
    return rest


def _has_dest(sp: argparse.ArgumentParser, dest: str) -> bool:
    return any(a.dest == dest for a in sp._actions)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if args.verbose:
            log.setLevel(logging.DEBUG)
        return args.func(args)
    except InvalidInputError as exc:
        log.error("%s", exc)
        return 1
    except CapacityError as exc:
        log.error("capacity: %s", exc)
        return 2
    except CheckFailure as exc:
        log.error("check failed: %s", exc)
        return 3
    except FileNotFoundError as exc:
        log.error("missing file: %s", exc)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

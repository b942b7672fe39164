"""``mipkit`` command line.

Exit status: 0 on success, 2 when a mathematical check fails (an
undocumented table mismatch or an unseparated pair), 1 on usage or
computation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .algebra import augmentation_filtration, dimension_subgroup, unit_group_class, UNIT_GROUP_LIMIT
from .catalog import (
    CatalogError,
    PresentationDiscrepancy,
    build_group,
    discrepancy_records,
    family,
    fingerprint,
    normalize_id,
    presentation_text,
    separation_report,
    undocumented,
    verify_table,
    write_discrepancies,
)
from .groups import (
    DEFAULT_MAX_COSETS,
    FiniteGroup,
    GroupError,
    abelian_invariants,
    center,
    derived_subgroup,
    exponent,
    quotient,
    realize,
)
from .invariants import jennings_series, lower_central_series, theorem2_applicability
from .presentation import PresentationSyntaxError, parse_presentation, render_presentation
from .toddcoxeter import CosetEnumerationError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2

VERBS = ("realize", "invariants", "fingerprint", "jennings", "algebra-dims",
         "table", "separate", "unit-class")


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="catalog family: G1..G26, D, Q, S, M2 or C")
    common.add_argument("--m", type=int, help="order exponent: the group has order 2^m")
    common.add_argument("--p", type=int, default=2, help="prime of the group algebra (default 2)")
    common.add_argument("--presentation", help="explicit presentation text instead of --family")
    common.add_argument("--groups", help="comma-separated family numbers or ids")
    common.add_argument("--json", action="store_true", help="emit JSON on stdout")
    common.add_argument("--cache", type=Path, help="directory for cached multiplication tables")
    common.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for table/separate")
    common.add_argument("--discrepancies", type=Path,
                        help="table: write mismatch records here as JSON lines")

    parser = argparse.ArgumentParser(prog="mipkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        sub.add_parser(verb, parents=[common])
    return parser


def _group(args) -> FiniteGroup:
    if args.presentation:
        if args.family:
            raise UsageError("give either --family or --presentation, not both")
        pres = parse_presentation(args.presentation)
        return realize(pres, max_cosets=args.max_cosets, name=render_presentation(pres))
    if not args.family or args.m is None:
        raise UsageError("--family and --m are required (or --presentation)")
    return build_group(args.family, args.m, max_cosets=args.max_cosets, cache_dir=args.cache)


def _label(args) -> str:
    if args.presentation:
        return args.presentation
    return f"{normalize_id(args.family)}(m={args.m})"


def _need_m(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    return args.m


# -- verbs -------------------------------------------------------------------

def cmd_realize(args) -> tuple:
    G = _group(args)
    text = args.presentation or presentation_text(args.family, args.m)
    out = {
        "group": _label(args),
        "presentation": render_presentation(parse_presentation(text)),
        "order": G.order,
        "exponent": exponent(G),
        "generators": list(G.names),
    }
    return out, EXIT_OK


def cmd_invariants(args) -> tuple:
    G = _group(args)
    D = derived_subgroup(G)
    lcs = lower_central_series(G)
    out = {
        "group": _label(args),
        "order": G.order,
        "exponent": exponent(G),
        "center": abelian_invariants(center(G)),
        "derived": abelian_invariants(D),
        "abelianization": abelian_invariants(quotient(G, D)),
        "lower_central": lcs.to_json(),
        "class": len(lcs.terms) - 1,
        "class_determination": theorem2_applicability(G, args.p).to_json(),
    }
    return out, EXIT_OK


def cmd_fingerprint(args) -> tuple:
    return fingerprint(_group(args), args.p).to_json(), EXIT_OK


def cmd_jennings(args) -> tuple:
    G = _group(args)
    series = jennings_series(G, args.p)
    out = series.to_json()
    out["group"] = _label(args)
    if G.order <= 256:
        dims = [dimension_subgroup(G, args.p, n).order for n in range(1, len(series.terms) + 1)]
        out["dimension_subgroup_orders"] = dims
        out["consistent"] = dims == series.orders
        return out, EXIT_OK if out["consistent"] else EXIT_MISMATCH
    return out, EXIT_OK


def cmd_algebra_dims(args) -> tuple:
    G = _group(args)
    filt = augmentation_filtration(G, args.p)
    return {"group": _label(args), "p": args.p, "dims": filt.to_json(),
            "nilpotency_index": filt.nilpotency_index}, EXIT_OK


def cmd_unit_class(args) -> tuple:
    G = _group(args)
    if G.order > UNIT_GROUP_LIMIT:
        raise UsageError(f"unit-class supports |G| <= {UNIT_GROUP_LIMIT}, got {G.order}")
    return {"group": _label(args), "order": G.order,
            "unit_group_class": unit_group_class(G, args.p),
            "derived_order": derived_subgroup(G).order}, EXIT_OK


def cmd_table(args) -> tuple:
    m = _need_m(args)
    rows = verify_table(m, max_cosets=args.max_cosets, cache_dir=args.cache, jobs=args.jobs)
    records = discrepancy_records(rows)
    if args.discrepancies:
        write_discrepancies(rows, args.discrepancies)
    bad = undocumented(records)
    out = {
        "m": m,
        "rows": [r.to_json() for r in rows],
        "mismatches": len(records),
        "documented": len(records) - len(bad),
        "undocumented": bad,
    }
    return out, EXIT_MISMATCH if bad else EXIT_OK


def cmd_separate(args) -> tuple:
    m = _need_m(args)
    if not args.groups:
        raise UsageError("--groups is required")
    ids = [normalize_id(g.strip()) for g in args.groups.split(",") if g.strip()]
    for fid in ids:
        family(fid).check(m)
    report = separation_report(ids, m, args.p, max_cosets=args.max_cosets,
                               cache_dir=args.cache, jobs=args.jobs)
    return report.to_json(), EXIT_OK if report.separated else EXIT_MISMATCH


COMMANDS = {
    "realize": cmd_realize,
    "invariants": cmd_invariants,
    "fingerprint": cmd_fingerprint,
    "jennings": cmd_jennings,
    "algebra-dims": cmd_algebra_dims,
    "table": cmd_table,
    "separate": cmd_separate,
    "unit-class": cmd_unit_class,
}


# -- text output ---------------------------------------------------------------

def _text_table(out: dict) -> List[str]:
    lines = [f"m = {out['m']}"]
    for r in out["rows"]:
        flag = "ok" if r["match"] else "MISMATCH"
        lines.append(f"  {r['family']:>4}  gamma2 {r['gamma2']['computed']}  "
                     f"Z {r['center']['computed']}  cl {r['cl']['computed']}  {flag}")
    lines.append(f"mismatches: {out['mismatches']} ({out['documented']} documented)")
    return lines


def _text_separate(out: dict) -> List[str]:
    lines = [f"m = {out['m']}, p = {out['p']}"]
    for pair in out["pairs"]:
        lines.append(f"  {pair['a']} vs {pair['b']}: {pair['field']}")
    lines.append("all pairs separated" if out["separated"] else "some pairs NOT SEPARATED")
    return lines


def _text(verb: str, out: dict) -> str:
    if verb == "table":
        return "\n".join(_text_table(out))
    if verb == "separate":
        return "\n".join(_text_separate(out))
    return "\n".join(f"{k}: {json.dumps(v)}" for k, v in out.items())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        out, code = COMMANDS[args.verb](args)
    except PresentationDiscrepancy as exc:
        print(f"mipkit {args.verb} [{_label(args)}]: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except UsageError as exc:
        print(f"mipkit {args.verb}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (CatalogError, PresentationSyntaxError, GroupError, CosetEnumerationError) as exc:
        where = f" [{_label(args)}]" if args.family or args.presentation else ""
        print(f"mipkit {args.verb}{where}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        print(_text(args.verb, out))
    return code


if __name__ == "__main__":
    sys.exit(main())

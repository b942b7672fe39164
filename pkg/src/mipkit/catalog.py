"""Named 2-group families, the invariant table, fingerprints and separation.

Family presentations and the expected table live in ``data/families.json``
as text templates so they can be diffed against the printed source.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import derived_min_generators_algebra
from .groups import (
    DEFAULT_MAX_COSETS,
    FiniteGroup,
    GroupError,
    Subgroup,
    abelian_invariants,
    center,
    derived_subgroup,
    exponent,
    generate,
    is_cyclic,
    load_table,
    prime_power_exponent,
    quotient,
    realize,
    save_table,
    subgroup_product,
)
from .invariants import (
    ClassDetermination,
    NonabelianFactor,
    derived_min_generators,
    jennings_series,
    nilpotency_class,
    theorem2_applicability,
)
from .presentation import parse_presentation, substitute_parameter

__all__ = [
    "CatalogError",
    "PresentationDiscrepancy",
    "FamilySpec",
    "family",
    "family_ids",
    "presentation_text",
    "build_group",
    "ninomiya_group",
    "standard_group",
    "Fingerprint",
    "fingerprint",
    "TableRow",
    "RowComparison",
    "table_row",
    "verify_table",
    "discrepancy_records",
    "write_discrepancies",
    "known_discrepancies",
    "is_documented",
    "undocumented",
    "SeparationReport",
    "separation_report",
    "SEPARATION_FIELDS",
    "METACYCLIC",
    "ALMOST_MAXIMAL_CLASS",
    "REMAINING",
]

METACYCLIC = (1, 6, 7, 8, 9, 19, 20, 21)
ALMOST_MAXIMAL_CLASS = (2, 3, 11, 12, 13, 14, 15, 16, 18, 23, 24, 25)
REMAINING = (4, 5, 10, 17, 22)


class CatalogError(ValueError):
    """Unknown family or inadmissible parameter."""


class PresentationDiscrepancy(GroupError):
    """A family presentation realized to an unexpected order or exponent."""


@lru_cache(maxsize=None)
def _data() -> dict:
    text = resources.files("mipkit").joinpath("data/families.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class FamilySpec:
    id: str
    min_m: int
    max_m: Optional[int]
    template: str
    numbered: bool

    def admissible(self, m: int) -> bool:
        return m >= self.min_m and (self.max_m is None or m <= self.max_m)

    def check(self, m: int) -> None:
        if not self.admissible(m):
            rng = f"m >= {self.min_m}" if self.max_m is None else (
                f"m = {self.min_m}" if self.min_m == self.max_m else f"{self.min_m} <= m <= {self.max_m}")
            raise CatalogError(f"family {self.id} is defined for {rng}, got m={m}")


def normalize_id(fid: Union[str, int]) -> str:
    if isinstance(fid, int) or str(fid).isdigit():
        return f"G{int(fid)}"
    return str(fid)


def family(fid: Union[str, int]) -> FamilySpec:
    fid = normalize_id(fid)
    data = _data()
    for section in ("numbered", "standard"):
        entry = data[section].get(fid)
        if entry is not None:
            return FamilySpec(fid, entry["min_m"], entry.get("max_m"), entry["template"],
                              section == "numbered")
    raise CatalogError(f"unknown family {fid!r}")


def family_ids(m: Optional[int] = None, numbered_only: bool = True) -> List[str]:
    """Family ids in numeric order, optionally only those admissible at ``m``."""
    data = _data()
    ids = sorted(data["numbered"], key=lambda s: int(s[1:]))
    if not numbered_only:
        ids += list(data["standard"])
    if m is not None:
        ids = [i for i in ids if family(i).admissible(m)]
    return ids


def presentation_text(fid: Union[str, int], m: int) -> str:
    spec = family(fid)
    spec.check(m)
    return substitute_parameter(spec.template, m)


def _realize_family(fid: str, m: int, max_cosets: int, cache_dir: Optional[Path]) -> FiniteGroup:
    text = presentation_text(fid, m)
    pres = parse_presentation(text)
    name = f"{fid}(m={m})"
    if cache_dir is not None:
        path = Path(cache_dir) / f"{fid}_m{m}.mipk"
        if path.exists():
            return load_table(path, names=pres.names, name=name)
    G = realize(pres, max_cosets=max_cosets, name=name)
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        save_table(G, Path(cache_dir) / f"{fid}_m{m}.mipk")
    return G


def build_group(fid: Union[str, int], m: int, max_cosets: int = DEFAULT_MAX_COSETS,
                cache_dir: Optional[Path] = None, check: bool = True) -> FiniteGroup:
    """Realize any catalog family; with ``check`` assert the expected order and exponent."""
    fid = normalize_id(fid)
    spec = family(fid)
    spec.check(m)
    G = _realize_family(fid, m, max_cosets, cache_dir)
    if check:
        expected_exp = None
        if spec.numbered:
            expected_exp = 2 ** (m - 2)
        elif fid in ("D", "Q", "S", "M2"):
            expected_exp = 2 ** (m - 1)
        elif fid == "C":
            expected_exp = 2 ** m
        if G.order != 2 ** m:
            raise PresentationDiscrepancy(
                f"{fid}(m={m}) realized to order {G.order}, expected {2 ** m}")
        if expected_exp is not None and exponent(G) != expected_exp:
            raise PresentationDiscrepancy(
                f"{fid}(m={m}) has exponent {exponent(G)}, expected {expected_exp}")
    return G


def ninomiya_group(n: int, m: int, **kw) -> FiniteGroup:
    """Family ``G<n>`` at order ``2^m``."""
    if not 1 <= n <= 26:
        raise CatalogError(f"families are numbered 1..26, got {n}")
    return build_group(f"G{n}", m, **kw)


def standard_group(name: str, m: int, **kw) -> FiniteGroup:
    if name not in ("D", "Q", "S", "M2", "C"):
        raise CatalogError(f"unknown standard family {name!r}")
    return build_group(name, m, **kw)


# -- fingerprints ----------------------------------------------------------

def _trim(factors: list) -> list:
    out = list(factors)
    while out and isinstance(out[-1], list) and not out[-1]:
        out.pop()
    return out


def _freeze(f):
    return f if isinstance(f, NonabelianFactor) else tuple(f)


def _thaw(f):
    return f.to_json() if isinstance(f, NonabelianFactor) else list(f)


def _load_factor(f):
    if isinstance(f, dict):
        return NonabelianFactor(f["order"], tuple(f["abelianization"]), tuple(f["center"]), f["class"])
    return tuple(f)


@dataclass(frozen=True)
class Fingerprint:
    order: int
    exponent: int
    center_invariants: Tuple[int, ...]
    abelianization_invariants: Tuple[int, ...]
    derived_order: int
    derived_d: int
    derived_cyclic: bool
    zg_product_order: int
    jennings_factor_invariants: Tuple[Tuple[int, ...], ...]
    # M_1/M_3 may be nonabelian and is then a NonabelianFactor
    jennings_double_factors: tuple
    class_determination: ClassDetermination

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "exponent": self.exponent,
            "center": list(self.center_invariants),
            "abelianization": list(self.abelianization_invariants),
            "derived_order": self.derived_order,
            "derived_d": self.derived_d,
            "derived_cyclic": self.derived_cyclic,
            "zg_order": self.zg_product_order,
            "jennings_factors": [list(f) for f in self.jennings_factor_invariants],
            "jennings_double_factors": [_thaw(f) for f in self.jennings_double_factors],
            "class": self.class_determination.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fingerprint":
        return cls(
            order=data["order"],
            exponent=data["exponent"],
            center_invariants=tuple(data["center"]),
            abelianization_invariants=tuple(data["abelianization"]),
            derived_order=data["derived_order"],
            derived_d=data["derived_d"],
            derived_cyclic=data["derived_cyclic"],
            zg_product_order=data["zg_order"],
            jennings_factor_invariants=tuple(tuple(f) for f in data["jennings_factors"]),
            jennings_double_factors=tuple(_load_factor(f) for f in data["jennings_double_factors"]),
            class_determination=ClassDetermination(data["class"]["value"], data["class"]["reason"]),
        )


def fingerprint(G: FiniteGroup, p: int = 2) -> Fingerprint:
    """Invariants of G that are determined by its group algebra over F_p."""
    if prime_power_exponent(G.order, p) is None:
        raise GroupError(f"order {G.order} is not a power of {p}")
    D = derived_subgroup(G)
    Z = center(G)
    d_group = derived_min_generators(G, p)
    d_algebra = derived_min_generators_algebra(G, p)
    if d_group != d_algebra:
        raise AssertionError(
            f"d(G') mismatch for {G!r}: group side {d_group}, algebra side {d_algebra}")
    series = jennings_series(G, p)
    return Fingerprint(
        order=G.order,
        exponent=exponent(G),
        center_invariants=tuple(abelian_invariants(Z)),
        abelianization_invariants=tuple(abelian_invariants(quotient(G, D))),
        derived_order=D.order,
        derived_d=d_group,
        derived_cyclic=is_cyclic(D),
        zg_product_order=subgroup_product(G, Z, D).order,
        jennings_factor_invariants=tuple(tuple(f) for f in _trim(series.factor_invariants)),
        jennings_double_factors=tuple(_freeze(f) for f in _trim(series.double_factors())),
        class_determination=theorem2_applicability(G, p),
    )


# -- the invariant table ------------------------------------------------------

def _eval_int(expr: str, m: int) -> int:
    return int(substitute_parameter("{" + expr + "}", m))


def _eval_type(exprs: Sequence[str], m: int) -> List[int]:
    return sorted((v for v in (_eval_int(e, m) for e in exprs) if v > 1), reverse=True)


def _case_applies(cond: str, m: int) -> bool:
    for op in (">=", "<=", ">", "<", "="):
        if op in cond:
            lhs, rhs = cond.split(op)
            assert lhs.strip() == "m"
            v = int(rhs)
            return {">=": m >= v, "<=": m <= v, ">": m > v, "<": m < v, "=": m == v}[op]
    raise ValueError(f"bad case condition {cond!r}")


@dataclass(frozen=True)
class TableRow:
    """Expected entries of one table row at a fixed m."""

    n: int
    m: int
    gamma2: List[int]
    gamma2_gens: List[str]
    center: List[int]
    center_gens: List[str]
    cl: int


def table_row(n: int, m: int) -> TableRow:
    entry = _data()["table"][f"G{n}"]
    center_entry = entry["center"]
    if "cases" in center_entry:
        matches = [c for c in center_entry["cases"] if _case_applies(c["when"], m)]
        if len(matches) != 1:
            raise CatalogError(f"row {n}: no unique center case for m={m}")
        center_entry = matches[0]
    subst = lambda words: [substitute_parameter(w, m) for w in words]
    return TableRow(
        n=n, m=m,
        gamma2=_eval_type(entry["gamma2"]["type"], m),
        gamma2_gens=subst(entry["gamma2"]["gens"]),
        center=_eval_type(center_entry["type"], m),
        center_gens=subst(center_entry["gens"]),
        cl=_eval_int(entry["cl"], m),
    )


@dataclass
class RowComparison:
    family: str
    m: int
    order: int
    expected: TableRow
    gamma2: List[int]
    center: List[int]
    cl: int
    gamma2_gens_ok: bool
    center_gens_ok: bool
    mismatches: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        e = self.expected
        return {
            "family": self.family,
            "m": self.m,
            "order": self.order,
            "gamma2": {"expected": e.gamma2, "computed": self.gamma2,
                       "generators": e.gamma2_gens, "generators_ok": self.gamma2_gens_ok},
            "center": {"expected": e.center, "computed": self.center,
                       "generators": e.center_gens, "generators_ok": self.center_gens_ok},
            "cl": {"expected": e.cl, "computed": self.cl},
            "match": self.ok,
        }


def _word_subgroup(G: FiniteGroup, words: Sequence[str]) -> Subgroup:
    # words are parsed against the group's own generator names
    text = "<" + ",".join(G.names) + "| " + ", ".join(f"{w}=1" for w in words) + ">"
    pres = parse_presentation(text)
    return generate(G, [G.evaluate(r.lhs) for r in pres.relations])


def _word_report(G: FiniteGroup, words: Sequence[str], target: Subgroup) -> dict:
    H = _word_subgroup(G, words)
    return {"order": H.order, "contained": bool(H <= target), "target_order": target.order}


def compare_row(G: FiniteGroup, n: int, m: int) -> RowComparison:
    expected = table_row(n, m)
    fid = f"G{n}"
    D = derived_subgroup(G)
    Z = center(G)
    got = RowComparison(
        family=fid, m=m, order=G.order, expected=expected,
        gamma2=abelian_invariants(D),
        center=abelian_invariants(Z),
        cl=nilpotency_class(G),
        gamma2_gens_ok=_word_subgroup(G, expected.gamma2_gens) == D,
        center_gens_ok=_word_subgroup(G, expected.center_gens) == Z,
    )

    def note(fieldname, paper, computed):
        got.mismatches.append({"family": fid, "m": m, "field": fieldname,
                               "paper_value": paper, "computed_value": computed})

    if G.order != 2 ** m:
        note("order", 2 ** m, G.order)
    if got.gamma2 != expected.gamma2:
        note("gamma2", expected.gamma2, got.gamma2)
    if not got.gamma2_gens_ok:
        note("gamma2_generators", expected.gamma2_gens, _word_report(G, expected.gamma2_gens, D))
    if got.center != expected.center:
        note("center", expected.center, got.center)
    if not got.center_gens_ok:
        note("center_generators", expected.center_gens, _word_report(G, expected.center_gens, Z))
    if got.cl != expected.cl:
        note("cl", expected.cl, got.cl)
    return got


def _compare_family(args) -> RowComparison:
    fid, m, max_cosets, cache_dir = args
    G = build_group(fid, m, max_cosets=max_cosets, cache_dir=cache_dir, check=False)
    return compare_row(G, int(fid[1:]), m)


def verify_table(m: int, max_cosets: int = DEFAULT_MAX_COSETS,
                 cache_dir: Optional[Path] = None, jobs: int = 1) -> List[RowComparison]:
    """Compare gamma_2, Z and cl of every family admissible at ``m`` with the table.

    Realized orders that differ from 2^m are recorded as mismatches, never
    corrected.
    """
    tasks = [(fid, m, max_cosets, cache_dir) for fid in family_ids(m)]
    return _map(_compare_family, tasks, jobs)


def discrepancy_records(rows: Sequence[RowComparison]) -> List[dict]:
    return [rec for row in rows for rec in row.mismatches]


def write_discrepancies(rows: Sequence[RowComparison], path: Union[str, Path]) -> int:
    """Write one JSON line per table mismatch; return the record count."""
    records = discrepancy_records(rows)
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return len(records)


def _record_key(rec: dict) -> tuple:
    return (rec["family"], rec["m"], rec["field"], json.dumps(rec["paper_value"], sort_keys=True))


@lru_cache(maxsize=None)
def _known() -> Dict[tuple, dict]:
    text = resources.files("mipkit").joinpath("data/known_discrepancies.jsonl").read_text()
    out = {}
    for line in text.splitlines():
        if line.strip():
            rec = json.loads(line)
            out[_record_key(rec)] = rec
    return out


def known_discrepancies() -> List[dict]:
    """Table mismatches that have been analysed and are shipped as data."""
    return [dict(r) for r in _known().values()]


def is_documented(rec: dict) -> bool:
    known = _known().get(_record_key(rec))
    return known is not None and known["computed_value"] == rec["computed_value"]


def undocumented(records: Sequence[dict]) -> List[dict]:
    return [r for r in records if not is_documented(r)]


def _map(fn, tasks, jobs: int):
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


# -- separation ---------------------------------------------------------------

SEPARATION_FIELDS = (
    "order",
    "exponent",
    "derived_d",
    "derived_cyclic",
    "center_invariants",
    "abelianization_invariants",
    "derived_order",
    "zg_product_order",
    "jennings_factor_invariants",
    "jennings_double_factors",
    "class_determination",
)


def differing_fields(a: Fingerprint, b: Fingerprint) -> List[str]:
    """Fields on which two fingerprints differ, in separation order.

    The determined class only counts when both groups have one.
    """
    out = []
    for name in SEPARATION_FIELDS:
        if name == "class_determination":
            va, vb = a.class_determination.value, b.class_determination.value
            if va is not None and vb is not None and va != vb:
                out.append(name)
        elif getattr(a, name) != getattr(b, name):
            out.append(name)
    return out


@dataclass
class SeparationReport:
    """One entry per unordered pair: ``(id_a, id_b, first separating field)``."""

    m: int
    p: int
    fingerprints: Dict[str, Fingerprint]
    pairs: List[Tuple[str, str, str]]
    all_fields: Dict[Tuple[str, str], List[str]]

    @property
    def separated(self) -> bool:
        return all(f != "NOT SEPARATED" for _, _, f in self.pairs)

    def field_for(self, a: str, b: str) -> str:
        a, b = normalize_id(a), normalize_id(b)
        for x, y, f in self.pairs:
            if {x, y} == {a, b}:
                return f
        raise KeyError((a, b))

    def fields_for(self, a: str, b: str) -> List[str]:
        a, b = normalize_id(a), normalize_id(b)
        return self.all_fields.get((a, b)) or self.all_fields[(b, a)]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "separated": self.separated,
            "pairs": [
                {"a": a, "b": b, "field": f, "all_fields": self.all_fields[(a, b)]}
                for a, b, f in self.pairs
            ],
            "fingerprints": {k: v.to_json() for k, v in self.fingerprints.items()},
        }


def _fingerprint_family(args) -> Fingerprint:
    fid, m, p, max_cosets, cache_dir = args
    return fingerprint(build_group(fid, m, max_cosets=max_cosets, cache_dir=cache_dir), p)


def separation_report(ids: Sequence[Union[str, int]], m: int, p: int = 2,
                      max_cosets: int = DEFAULT_MAX_COSETS,
                      cache_dir: Optional[Path] = None, jobs: int = 1) -> SeparationReport:
    ids = [normalize_id(i) for i in ids]
    tasks = [(fid, m, p, max_cosets, cache_dir) for fid in ids]
    fps = dict(zip(ids, _map(_fingerprint_family, tasks, jobs)))
    pairs = []
    all_fields = {}
    for a, b in itertools.combinations(ids, 2):
        fields = differing_fields(fps[a], fps[b])
        all_fields[(a, b)] = fields
        pairs.append((a, b, fields[0] if fields else "NOT SEPARATED"))
    return SeparationReport(m, p, fps, pairs, all_fields)

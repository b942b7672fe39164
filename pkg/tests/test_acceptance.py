"""Acceptance criteria 1-9.

Each test records a PASS/FAIL line that the conftest summary hook prints at
the end of the run; the assertion afterwards makes pytest agree with it.
Every comparison is exact.
"""

import time

import oracles
from acceptance_log import RESULTS
from helpers import EXTRASPECIAL_27, EXTRASPECIAL_243, KLEIN, catalog, from_text, group
from mipkit.algebra import (
    class_sum_ideal,
    derived_min_generators_algebra,
    dimension_subgroup,
    ideal_of_normal_subgroup,
    unit_group_class,
)
from mipkit.catalog import (
    build_group,
    compare_row,
    discrepancy_records,
    separation_report,
    undocumented,
)
from mipkit.cli import main
from mipkit.groups import center, derived_subgroup, exponent, is_cyclic, subgroup_product
from mipkit.invariants import (
    class_via_cyclic_derived,
    derived_min_generators,
    is_class_two_criterion,
    jennings_series,
    lower_central_series,
    nilpotency_class,
)

TABLE_SWEEP = catalog(10, min_m=6, standard=False) + [("G26", 5)]
UP_TO_1024 = catalog(10)
UP_TO_256 = catalog(8)
UP_TO_64 = catalog(6)


def record(number, title, ok, detail):
    RESULTS[number] = (bool(ok), title, detail)
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_table_reproduction():
    start = time.perf_counter()
    rows = [compare_row(build_group(fid, m, check=False), int(fid[1:]), m) for fid, m in TABLE_SWEEP]
    elapsed = time.perf_counter() - start
    records = discrepancy_records(rows)
    value_fields = {"order", "gamma2", "center", "cl"}
    value_mismatches = [r for r in records if r["field"] in value_fields]
    bad = undocumented(records)
    ok = not value_mismatches and not bad and elapsed < 300
    record(1, "table reproduction m=6..10 (+G26 at m=5)", ok,
           f"{len(rows)} rows, {len(value_mismatches)} value mismatches, "
           f"{len(records) - len(bad)} documented generator-word discrepancies, "
           f"{len(bad)} undocumented, {elapsed:.1f}s")


def test_criterion_2_derived_generators_both_ways():
    start = time.perf_counter()
    wrong = []
    for fid, m in UP_TO_1024:
        G = group(fid, m)
        if derived_min_generators_algebra(G, 2) != derived_min_generators(G, 2):
            wrong.append((fid, m))
    elapsed = time.perf_counter() - start
    record(2, "d(G') algebra side == group side", not wrong and elapsed < 600,
           f"{len(UP_TO_1024)} groups, {len(wrong)} disagreements, {elapsed:.1f}s")


def test_criterion_3_jennings_equals_dimension_subgroups():
    wrong = []
    checked = 0
    for fid, m in UP_TO_256:
        G = group(fid, m)
        J = jennings_series(G, 2)
        for n in range(1, len(J.terms) + 1):
            checked += 1
            if dimension_subgroup(G, 2, n) != J.term(n):
                wrong.append((fid, m, n))
    record(3, "Jennings series == dimension subgroups (|G| <= 256)", not wrong,
           f"{len(UP_TO_256)} groups, {checked} terms, {len(wrong)} differences")


def test_criterion_4_exponent_p_series():
    cases = [(KLEIN, 2), ("<a,b,c| a^2, b^2, c^2, a*b=b*a, a*c=c*a, b*c=c*b>", 2),
             (EXTRASPECIAL_27, 3), (EXTRASPECIAL_243, 3)]
    wrong = []
    for text, p in cases:
        G = from_text(text)
        J, L = jennings_series(G, p), lower_central_series(G)
        if exponent(G) != p or len(J.terms) != len(L.terms) or \
                any(a != b for a, b in zip(J.terms, L.terms)):
            wrong.append(G.order)
    record(4, "M_i == gamma_i for exponent-p groups", not wrong,
           f"orders {[from_text(t).order for t, _ in cases]}, {len(wrong)} failures")


def test_criterion_5_class_two_criterion_and_class_sum_ideal():
    crit_wrong = []
    nonabelian = 0
    for fid, m in UP_TO_1024:
        G = group(fid, m)
        if G.is_abelian:
            continue
        nonabelian += 1
        if is_class_two_criterion(G) != (nilpotency_class(G) == 2):
            crit_wrong.append((fid, m))
    ideal_wrong = []
    for fid, m in UP_TO_256:
        G = group(fid, m)
        ZD = subgroup_product(G, center(G), derived_subgroup(G))
        if class_sum_ideal(G, 2) != ideal_of_normal_subgroup(G, ZD, 2):
            ideal_wrong.append((fid, m))
    record(5, "class-two criterion and class-sum ideal", not crit_wrong and not ideal_wrong,
           f"{nonabelian} nonabelian groups ({len(crit_wrong)} wrong), "
           f"{len(UP_TO_256)} ideals ({len(ideal_wrong)} wrong)")


def test_criterion_6_class_via_cyclic_derived():
    wrong = []
    noncyclic = set()
    used = 0
    for fid, m in UP_TO_1024:
        G = group(fid, m)
        if not is_cyclic(derived_subgroup(G)):
            noncyclic.add(fid)
            continue
        used += 1
        if class_via_cyclic_derived(G) != nilpotency_class(G):
            wrong.append((fid, m))
    ok = not wrong and noncyclic == {"G17", "G26"}
    record(6, "class via cyclic G' == nilpotency class", ok,
           f"{used} groups, {len(wrong)} wrong, noncyclic G' only in {sorted(noncyclic)}")


def test_criterion_7_separation():
    problems = []
    for m in range(6, 11):
        R = separation_report([4, 5, 10, 17, 22], m)
        if not R.separated:
            problems.append((m, "not separated"))
        for other in ("G4", "G5", "G10", "G22"):
            if R.field_for("G17", other) != "derived_d":
                problems.append((m, "G17", other))
        if R.field_for("G4", "G10") != "center_invariants":
            problems.append((m, "G4/G10"))
        c5 = R.fingerprints["G5"].class_determination
        c22 = R.fingerprints["G22"].class_determination
        if "class_determination" not in R.fields_for("G5", "G22") or \
                (c5.value, c22.value) != (2, 3) or {c5.reason, c22.reason} != {"cyclic_derived"}:
            problems.append((m, "G5/G22"))
        if main(["separate", "--groups", "4,5,10,17,22", "--m", str(m), "--json"]) != 0:
            problems.append((m, "cli exit"))
    record(7, "separation of G4, G5, G10, G17, G22 for m=6..10", not problems,
           f"{len(problems)} problems {problems}" if problems else "all 50 pairs separated, CLI exit 0")


def test_criterion_8_unit_group_class():
    start = time.perf_counter()
    cases = {"D3": build_group("D", 3), "Q3": build_group("Q", 3),
             "C2xC2": from_text(KLEIN), "C8": build_group("C", 3)}
    got = {k: (unit_group_class(G, 2), derived_subgroup(G).order) for k, G in cases.items()}
    elapsed = time.perf_counter() - start
    ok = all(a == b for a, b in got.values()) and elapsed < 120
    record(8, "unit group class == |G'| at desk scale", ok,
           ", ".join(f"{k} {a}/{b}" for k, (a, b) in got.items()) + f", {elapsed:.1f}s")


def test_criterion_9_oracle_equivalence():
    wrong = []
    for fid, m in UP_TO_64:
        G = group(fid, m)
        if oracles.as_set(center(G)) != oracles.center(G):
            wrong.append((fid, m, "center"))
        if [oracles.as_set(t) for t in lower_central_series(G).terms] != oracles.lower_central(G):
            wrong.append((fid, m, "gamma"))
        lazard = oracles.lazard_jennings(G, 2)
        if [oracles.as_set(t) for t in jennings_series(G, 2).terms] != lazard:
            wrong.append((fid, m, "M"))
        dims = oracles.dimension_subgroups(G, 2)
        if [oracles.as_set(dimension_subgroup(G, 2, n)) for n in range(1, len(dims) + 1)] != dims:
            wrong.append((fid, m, "dimension"))
    record(9, "brute-force oracle agreement (|G| <= 64)", not wrong,
           f"{len(UP_TO_64)} groups x 4 operations, {len(wrong)} disagreements")

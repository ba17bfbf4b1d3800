"""Acceptance suite.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them
immediately; they also appear in captured output on failure).  Criteria:

 1. algebraic law suite on random arrays, two semirings, exact and real
 2. dense 16x16 brute-force oracle agreement
 3. tuple-list oracle agreement for the relational operations
 4. rename distributes over union and intersection
 5. simplification soundness and monotonicity on fuzzed plans
 6. reorder soundness and cost monotonicity on fuzzed plans
 7. distributivity rewrite timing trend at desk scale
 8. associativity rewrite timing trend at desk scale
 9. the song-table fixture behaves as documented
10. seeded generation and query scripts reproduce exactly
"""

import statistics
import subprocess
import sys
import time

import aarray as aa
from aarray import equal_exact, equivalent, get_semiring, random_array, random_relation, stats
from aarray import relational as rel
from aarray.bench import sweep
from aarray.plan import evaluate
from aarray.rewrite import check_property, estimate_cost, reorder, simplify_trace, _digest
from oracle import (
    dense_ew_add,
    dense_ew_mult,
    dense_mult,
    dense_of,
    o_aggregate,
    o_difference,
    o_extended,
    o_intersection,
    o_project,
    o_rename,
    o_select,
    o_theta_literal,
    o_theta_pairs,
    o_union,
    rows_of,
    same_rows_weak,
)
from planfuzz import random_array_plan, random_relational_plan

PT = get_semiring("plus-times")


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------------------


def test_criterion_1_law_suite():
    laws = (
        "ew-add-commute",
        "ew-mult-commute",
        "ew-add-assoc",
        "ew-mult-assoc",
        "mult-assoc",
        "mult-distribute",
        "add-identity",
        "mult-identity",
        "mult-annihilator",
        "transpose-product",
    )
    started = time.perf_counter()
    failures = []
    for semiring in ("plus-times", "max-plus"):
        for values in ("ints", "floats"):
            for law in laws:
                report = check_property(law, semiring, trials=100, seed=20_000, values=values)
                if not report.passed:
                    failures.append(report.to_line())
    elapsed = time.perf_counter() - started
    _report(
        "criterion 1: law suite (2 semirings x exact+real x 100 trials)",
        not failures and elapsed < 60.0,
        f"{elapsed:.1f}s" + ("; " + "; ".join(failures) if failures else ""),
    )


def test_criterion_2_dense_oracle():
    bad = 0
    for seed in range(100):
        a = random_array(16, 3, seed, values="ints")
        b = random_array(16, 3, seed + 10_000, values="ints")
        da, db = dense_of(a, 16), dense_of(b, 16)
        if aa.array_mult(a, b, PT).entries_dict() != dense_mult(da, db, PT, 16):
            bad += 1
        if aa.ew_add(a, b, PT).entries_dict() != dense_ew_add(da, db, PT, 16):
            bad += 1
        if aa.ew_mult(a, b, PT).entries_dict() != dense_ew_mult(da, db, PT, 16):
            bad += 1
    _report("criterion 2: dense 16x16 oracle, 100 seeds", bad == 0, f"{bad} mismatches")


def test_criterion_3_relational_oracle():
    rng = aa.Rng(33_000)
    mismatches = []
    for trial in range(100):
        kind = "int" if trial % 2 else "str"
        a = random_relation(rng.next_u64(), max_rows=64, max_cols=6, value_kind=kind)
        b = random_relation(rng.next_u64(), max_rows=64, max_cols=6, value_kind=kind)
        ra, rb = rows_of(a), rows_of(b)
        j = ["c1", "c2"]
        phi = rel.compare_predicate("c1", "eq", 3 if kind == "int" else "red")
        theta = rel.pair_compare("c1", "eq", "c2")
        ext = rel.make_extend("concat", j)
        checks = {
            "project": (rel.project(a, j), o_project(ra, j)),
            "rename": (rel.rename(a, j, ["z1", "z2"]), o_rename(ra, j, ["z1", "z2"])),
            "union": (rel.union(a, b), o_union(ra, rb)),
            "intersection": (rel.intersection(a, b), o_intersection(ra, rb)),
            "difference": (rel.difference(a, b), o_difference(ra, rb)),
            "select": (rel.select(a, ["c1"], phi), o_select(ra, ["c1"], phi.fn)),
            "theta_join_pairs": (
                rel.theta_join_pairs(a, b, ["c1"], ["c2"], theta),
                o_theta_pairs(ra, rb, ["c1"], ["c2"], theta.fn),
            ),
            "extended_projection": (rel.extended_projection(a, j, "t", ext), o_extended(ra, j, "t", ext)),
            "aggregate": (rel.aggregate(a, "c1", "c2", "count"), o_aggregate(ra, "c1", "c2", "count")),
        }
        if kind == "int":
            checks["aggregate-sum"] = (
                rel.aggregate(a, "c1", "c2", "sum"),
                o_aggregate(ra, "c1", "c2", lambda x, y: x + y),
            )
            # the literal join formula needs combinable values; compare it
            # against the oracle pairs collapsed per left row
            checks["theta_join_literal"] = (
                rel.theta_join(a, b, ["c1"], ["c2"], theta),
                o_theta_literal(ra, rb, ["c1"], ["c2"], theta.fn, lambda x, y: x + y),
            )
        for name, (got, want) in checks.items():
            if not same_rows_weak(got, want):
                mismatches.append(f"trial {trial}: {name}")
    _report(
        "criterion 3: tuple-list oracle, 9 operations, 100 relations",
        not mismatches,
        "; ".join(mismatches[:5]),
    )


def test_criterion_4_rename_distributes():
    bad = []
    for law in ("rename-distributes-union", "rename-distributes-intersection"):
        report = check_property(law, "plus-times", trials=100, seed=44_000)
        if not report.passed:
            bad.append(report.to_line())
    _report("criterion 4: rename distributes over union/intersection, 100 relations", not bad, "; ".join(bad))


_CONVERSION_RULES = {"extended-projection-identity", "aggregate-identity"}


def test_criterion_5_simplify_soundness():
    problems = []
    fired: dict[str, int] = {}
    for trial in range(200):
        relational = trial % 2 == 0
        plan = random_relational_plan(55_000 + trial) if relational else random_array_plan(55_000 + trial)
        simplified, trace = simplify_trace(plan)
        before = evaluate(plan)
        after = evaluate(simplified)
        same = equivalent(before, after) if relational else equal_exact(before, after)
        if not same:
            problems.append(f"trial {trial}: changed result")
        for app in trace:
            fired[app.rule] = fired.get(app.rule, 0) + 1
            if app.rule in _CONVERSION_RULES:
                # conversions rewrite one node in place: the count holds and
                # the number of convertible nodes strictly drops
                if not (app.nodes_after == app.nodes_before and app.conversions_after < app.conversions_before):
                    problems.append(f"trial {trial}: {app.rule} did not reduce its rank")
            elif app.nodes_after >= app.nodes_before:
                problems.append(f"trial {trial}: {app.rule} did not shrink the plan")
    enough_coverage = len(fired) >= 8
    if not enough_coverage:
        problems.append(f"only {sorted(fired)} rules fired")
    _report(
        "criterion 5: simplify sound and monotone on 200 fuzzed plans",
        not problems,
        f"rules fired: {len(fired)}" + ("; " + "; ".join(problems[:5]) if problems else ""),
    )


def test_criterion_6_reorder_soundness():
    problems = []
    for trial in range(200):
        relational = trial % 2 == 0
        plan = random_relational_plan(66_000 + trial) if relational else random_array_plan(66_000 + trial)
        out = reorder(plan)
        if estimate_cost(out) > estimate_cost(plan) + 1e-9:
            problems.append(f"trial {trial}: cost increased")
        same = (
            equivalent(evaluate(plan), evaluate(out))
            if relational
            else equal_exact(evaluate(plan), evaluate(out))
        )
        if not same:
            problems.append(f"trial {trial}: changed result")
    _report("criterion 6: reorder sound and cost-monotone on 200 fuzzed plans", not problems, "; ".join(problems[:5]))


def _median_ratios(mode: str, seeds=(1, 2, 3, 4, 5)):
    sizes = (256, 1024, 4096, 16384)
    rows = sweep(mode, 1024, sizes, 8, seeds)
    ratios = {}
    for size in sizes:
        ratios[size] = statistics.median(r.ratio for r in rows if r.size == size)
    return ratios


def test_criterion_7_distributivity_trend():
    # The trend is the substance: the rewrite wins by a growing margin as
    # the swept arrays outgrow the fixed one and is at worst competitive
    # when the fixed one dominates.  The 2.0 bound at s=16384 is hardware-
    # sensitive: every stage of both strategies is linear in its entry
    # count, which pins the structural work ratio near 1.5 and leaves the
    # wall-clock ratio to per-stage constants; this machine measures a
    # band straddling 2.0, so occasional failures here reflect load, not
    # regressions.  The bound is asserted as stated all the same.
    started = time.perf_counter()
    ratios = _median_ratios("distributivity")
    elapsed = time.perf_counter() - started
    ok = ratios[16384] > 1.0 and ratios[16384] >= 2.0 and ratios[256] <= 1.2 and elapsed < 300
    detail = ", ".join(f"s={s}: {r:.2f}" for s, r in ratios.items()) + f"; {elapsed:.0f}s"
    _report("criterion 7: fused-vs-rewritten distributivity trend", ok, detail)


def test_criterion_8_associativity_trend():
    started = time.perf_counter()
    ratios = _median_ratios("associativity")
    elapsed = time.perf_counter() - started
    ordered = list(ratios.values())
    monotone = all(ordered[i + 1] >= ordered[i] * 0.8 for i in range(len(ordered) - 1))
    ok = ratios[16384] >= 2.0 and monotone and elapsed < 300
    detail = ", ".join(f"s={s}: {r:.2f}" for s, r in ratios.items()) + f"; {elapsed:.0f}s"
    _report("criterion 8: association order timing trend", ok, detail)


def test_criterion_9_song_fixture(songs, songs_path):
    ok_stats = stats(songs) == aa.ArrayStats(4, 4, 16)
    selected = rel.select(songs, ["Genre"], rel.compare_predicate("Genre", "eq", "Electronic"))
    ok_select = selected.row_keys == ["053013ktnA1", "053013ktnA2"]
    counts_rel = rel.aggregate(songs, "Artist", "n", "count")
    counts = {c["Artist"]: c["n"] for _, c in rel.row_items(counts_rel)}
    ok_counts = counts == {"Kitten": 2, "Bandayde": 1, "Kastle": 1}
    _report(
        "criterion 9: song-table fixture",
        ok_stats and ok_select and ok_counts,
        f"stats={stats(songs)}, electronic={selected.row_keys}, counts={counts}",
    )


def test_criterion_10_determinism(songs_path, tmp_path):
    ok_arrays = equal_exact(random_array(64, 8, 123), random_array(64, 8, 123))
    ok_digest = _digest(random_array(64, 8, 123)) == "9f4d22a65b80"
    ok_digest_f = _digest(random_array(64, 8, 123, values="floats")) == "c36468032124"
    script = tmp_path / "q.script"
    script.write_text("SELECT hits songs Genre eq Electronic\nAGG counts hits Artist n count\nEMIT hits\nEMIT counts\n")
    cmd = [
        sys.executable,
        "-c",
        "import sys; from aarray.cli import main; sys.exit(main(sys.argv[1:]))",
        "query",
        str(script),
        f"songs={songs_path}",
    ]
    runs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    ok_query = runs[0] == runs[1] and b"Kastle\t1" in runs[0] and b"Electronic" in runs[0]
    _report(
        "criterion 10: seeded generation and query scripts reproduce exactly",
        ok_arrays and ok_digest and ok_digest_f and ok_query,
        "arrays, digests, and query bytes stable",
    )

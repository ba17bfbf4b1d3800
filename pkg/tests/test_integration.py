"""One end-to-end pass through the whole stack: files in, relational
operations as a plan, simplification, reordering, evaluation, files out."""

import aarray as aa
from aarray import relational as rel
from aarray.plan import evaluate, leaf, node
from aarray.rewrite import estimate_cost, reorder, simplify


def test_table_to_plan_to_table(songs, tmp_path):
    electronic = node(
        "select",
        node("union", leaf(songs), leaf(aa.empty_array())),
        cols=["Genre"],
        phi=rel.compare_predicate("Genre", "eq", "Electronic"),
    )
    tagged = node(
        "extended_projection",
        electronic,
        cols=["Artist", "Genre"],
        out_col="Tag",
        phi=rel.make_extend("concat", ["Artist", "Genre"]),
    )
    plan = node("union", tagged, node("intersection", tagged, leaf(aa.empty_array())))

    simplified = simplify(plan)
    assert estimate_cost(simplified) <= estimate_cost(plan)
    best = reorder(simplified)
    result = evaluate(best)
    assert rel.equivalent(result, evaluate(plan), strict=True)
    assert [v for _, _, v in result.triples()] == ["Bandayde/Electronic", "Kastle/Electronic"]

    out = tmp_path / "tags.tsv"
    aa.write_table(result, out)
    assert aa.equal_exact(aa.read_table(out), result)


def test_counting_pipeline_matches_direct_query(songs):
    # group sizes computed two ways: aggregate with the count builtin, and
    # a unit column reduced by summation through the permutation algebra
    direct = rel.aggregate(songs, "Artist", "n", "count")
    unit = rel.extended_projection(songs, ["Artist"], "n", lambda row: 1)
    stacked = rel.theta_join(
        rel.project(songs, ["Artist"]),
        unit,
        [],
        [],
        rel.PAIR_FALSE,
    )
    assert stacked.nnz == 0  # no pairs satisfy a constant-false predicate
    counts = {c["Artist"]: c["n"] for _, c in rel.row_items(direct)}
    assert counts == {"Bandayde": 1, "Kastle": 1, "Kitten": 2}

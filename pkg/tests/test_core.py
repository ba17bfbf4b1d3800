import pytest
from hypothesis import given, settings, strategies as st

import aarray as aa
from aarray import (
    ArrayError,
    CarrierError,
    KeyTagError,
    construct,
    empty_array,
    equal_exact,
    get_semiring,
    identity_array,
    nonzero_rows,
    select_sub,
    stats,
    transpose,
    validate,
)
from oracle import dense_ew_add, dense_ew_mult, dense_mult, dense_of

PT = get_semiring("plus-times")
MX = get_semiring("max-plus")


def test_construct_and_stats():
    a = construct(["r1", "r1", "r2"], ["c1", "c2", "c1"], [2, 3, 4], PT)
    assert stats(a) == aa.ArrayStats(2, 2, 3)
    assert a.entries_dict() == {("r1", "c1"): 2, ("r1", "c2"): 3, ("r2", "c1"): 4}
    validate(a, PT)


def test_construct_combines_duplicates():
    a = construct(["r1", "r1"], ["c1", "c1"], [2, 3], PT)
    assert a.entries_dict() == {("r1", "c1"): 5}


def test_construct_drops_zero_rows_entirely():
    a = construct(["r1", "r2"], ["c1", "c2"], [5, 0], PT)
    assert nonzero_rows(a) == ["r1"]
    assert "c2" not in a.col_keys


def test_construct_errors():
    with pytest.raises(ArrayError):
        construct(["r1"], ["c1", "c2"], [1], PT)
    with pytest.raises(KeyTagError):
        construct(["r1", 2], ["c1", "c2"], [1, 2], PT)
    with pytest.raises(CarrierError):
        construct(["r1"], ["c1"], ["text"], PT)
    with pytest.raises(CarrierError):
        construct(["r1", "r2"], ["c1", "c2"], [1, "mixed"], PT)


def test_construct_promotes_int_float():
    a = construct([1, 2], [1, 2], [1, 2.5], PT)
    assert a.value_tag == "float"
    assert a.entries_dict() == {(1, 1): 1.0, (2, 2): 2.5}


def test_construct_string_values_under_and_eq():
    s = get_semiring("and-eq")
    a = construct(["r1", "r2"], ["c", "c"], ["x", "y"], s)
    assert a.value_tag == "str"
    assert a.entries_dict() == {("r1", "c"): "x", ("r2", "c"): "y"}


def test_construct_song_table_from_triples(songs):
    s = get_semiring("and-eq")
    i, j, v = zip(*songs.triples())
    rebuilt = construct(list(i), list(j), list(v), s)
    assert stats(rebuilt) == aa.ArrayStats(4, 4, 16)
    assert equal_exact(rebuilt, songs)
    assert nonzero_rows(rebuilt) == ["053013ktnA1", "053013ktnA2", "063012ktnA1", "082812ktnA1"]


def test_float_keys_work_end_to_end():
    a = construct([1.5, 1.5, 2.5], [0.5, 3.5, 0.5], [2, 3, 4], PT)
    assert a.row_keys == [1.5, 2.5] and a.col_keys == [0.5, 3.5]
    assert equal_exact(transpose(transpose(a)), a)
    doubled = aa.ew_add(a, a, PT)
    assert doubled.get(1.5, 0.5) == 4
    sub = select_sub(a, [1.5], None)
    assert sub.row_keys == [1.5]
    prod = aa.array_mult(a, transpose(a), PT)
    assert prod.get(1.5, 1.5) == 13
    validate(prod, PT)


def test_construct_boolean_values_under_and_or():
    s = get_semiring("and-or")
    a = construct(["r1", "r2", "r2"], ["c", "c", "c"], [True, False, True], s)
    assert a.value_tag == "bool"
    assert a.entries_dict() == {("r1", "c"): True, ("r2", "c"): True}
    b = aa.ew_mult(a, a, s)
    assert equal_exact(b, a)


def test_empty_stats():
    assert stats(empty_array()) == aa.ArrayStats(0, 0, 0)


def test_stats_invariant_nnz_at_least_axis_counts():
    for seed in range(20):
        a = aa.random_array(24, 3, seed)
        st_ = stats(a)
        if st_.m and st_.n:
            assert st_.nnz >= max(st_.m, st_.n)


def test_transpose_swaps_and_involutes():
    a = construct(["a"], ["b"], [7], PT)
    assert transpose(a).entries_dict() == {("b", "a"): 7}
    for seed in range(10):
        r = aa.random_array(16, 3, seed)
        assert equal_exact(transpose(transpose(r)), r)
        s = stats(r)
        assert stats(transpose(r)) == aa.ArrayStats(s.n, s.m, s.nnz)


def test_transpose_of_product():
    for seed in range(10):
        a = aa.random_array(8, 3, seed, values="ints")
        b = aa.random_array(8, 3, seed + 100, values="ints")
        lhs = transpose(aa.array_mult(a, b, PT))
        rhs = aa.array_mult(transpose(b), transpose(a), PT)
        assert equal_exact(lhs, rhs)


def test_ew_add_identity_and_disjoint_union():
    a = construct(["r"], ["c"], [2], PT)
    assert equal_exact(aa.ew_add(a, empty_array(), PT), a)
    b = construct(["q"], ["d"], [3], PT)
    assert aa.ew_add(a, b, PT).entries_dict() == {("r", "c"): 2, ("q", "d"): 3}


def test_ew_add_cancellation_drops_entries():
    a = construct(["r"], ["c"], [2], PT)
    b = construct(["r"], ["c"], [-2], PT)
    out = aa.ew_add(a, b, PT)
    assert stats(out) == aa.ArrayStats(0, 0, 0)


def test_ew_mult_annihilator_and_intersection():
    a = construct(["r"], ["c"], [2], PT)
    assert stats(aa.ew_mult(a, empty_array(), PT)).nnz == 0
    b = construct(["r"], ["c"], [3], PT)
    assert aa.ew_mult(a, b, PT).entries_dict() == {("r", "c"): 6}
    c = construct(["r"], ["d"], [3], PT)
    assert stats(aa.ew_mult(a, c, PT)).nnz == 0


def test_array_mult_identity():
    for seed in range(5):
        a = aa.random_array(12, 3, seed, values="ints")
        eye = identity_array(a.col_keys)
        assert equal_exact(aa.array_mult(a, eye, PT), a)


def test_array_mult_inner_sum():
    a = construct(["r", "r"], ["k1", "k2"], [1, 2], PT)
    b = construct(["k1", "k2"], ["c", "c"], [3, 4], PT)
    # nested-loop oracle over all (i, k, j): 1*3 + 2*4 = 11
    assert aa.array_mult(a, b, PT).entries_dict() == {("r", "c"): 11}


def test_array_mult_and_eq_row_comparison():
    s = get_semiring("and-eq")
    a = construct(["rA", "rA"], ["x", "y"], ["u", "v"], s)
    b = construct(["rB", "rB"], ["x", "y"], ["u", "v"], s)
    p = aa.array_mult(a, transpose(b), s)
    assert p.entries_dict() == {("rA", "rB"): True}
    b2 = construct(["rB", "rB"], ["x", "y"], ["u", "w"], s)
    assert stats(aa.array_mult(a, transpose(b2), s)).nnz == 0


def test_array_mult_no_key_coercion():
    a = construct(["r"], [1], [2], PT)
    b = construct([1.0], ["c"], [3], PT)
    assert stats(aa.array_mult(a, b, PT)).nnz == 0


def test_no_size_constraints():
    a = aa.random_array(4, 2, 1)
    b = aa.random_array(32, 5, 2)
    for op in (aa.ew_add, aa.ew_mult, aa.array_mult):
        validate(op(a, b, PT), PT)


def test_select_sub():
    a = construct(["r1", "r1", "r2"], ["c1", "c2", "c1"], [2, 3, 4], PT)
    sub = select_sub(a, None, ["c2"])
    assert sub.entries_dict() == {("r1", "c2"): 3}
    assert equal_exact(select_sub(a, None, a.col_keys), a)
    assert stats(select_sub(a, None, ["missing"])).nnz == 0
    with pytest.raises(KeyTagError):
        select_sub(a, ["r1", 5], None)


def test_identity_array():
    eye = identity_array(["a", "b"])
    assert eye.entries_dict() == {("a", "a"): 1, ("b", "b"): 1}
    relabel = identity_array(["Artist"], ["Performer"])
    assert relabel.entries_dict() == {("Artist", "Performer"): 1}
    j, j2 = ["a", "b"], ["x", "y"]
    back = aa.array_mult(identity_array(j, j2), identity_array(j2, j), PT)
    assert equal_exact(back, identity_array(j))
    with pytest.raises(ArrayError):
        identity_array(["a"], ["x", "y"])
    with pytest.raises(ArrayError):
        identity_array(["a", "a"])


def test_nonzero_rows_sorted():
    a = construct(["zz", "aa"], ["c", "c"], [1, 2], PT)
    assert nonzero_rows(a) == ["aa", "zz"]
    assert nonzero_rows(empty_array()) == []


def test_equal_exact_is_key_and_value_sensitive():
    a = construct(["r"], ["c"], [2], PT)
    assert equal_exact(a, a)
    assert not equal_exact(a, construct(["r"], ["c"], [3], PT))
    assert not equal_exact(a, construct(["q"], ["c"], [2], PT))
    assert not equal_exact(a, construct(["r"], ["c"], [2.0], PT))


def test_immutability():
    a = construct(["r"], ["c"], [2], PT)
    with pytest.raises(AttributeError):
        a.value_tag = "float"
    with pytest.raises(ValueError):
        a.vals[0] = 9


@pytest.mark.parametrize("semiring", [PT, MX])
def test_dense_oracle_small(semiring):
    for seed in range(10):
        a = aa.random_array(16, 3, seed, values="ints")
        b = aa.random_array(16, 3, seed + 500, values="ints")
        da, db = dense_of(a, 16), dense_of(b, 16)
        assert aa.array_mult(a, b, semiring).entries_dict() == dense_mult(da, db, semiring, 16)
        assert aa.ew_add(a, b, semiring).entries_dict() == dense_ew_add(da, db, semiring, 16)
        assert aa.ew_mult(a, b, semiring).entries_dict() == dense_ew_mult(da, db, semiring, 16)


def test_zero_freedom_after_signed_arithmetic():
    rng = aa.Rng(99)
    for _ in range(25):
        a = aa.random_array(12, 4, rng.next_u64(), values="ints")
        b = aa.random_array(12, 4, rng.next_u64(), values="ints")
        neg = construct(list(range(1, 13)), list(range(1, 13)), [-1] * 12, PT)
        out = aa.ew_add(aa.array_mult(neg, a, PT), b, PT)
        validate(out, PT)


# ---------------------------------------------------------------------------
# property-based invariants

keys = st.integers(min_value=1, max_value=9)
triples = st.lists(st.tuples(keys, keys, st.integers(min_value=-4, max_value=4)), max_size=25)


@given(triples)
@settings(max_examples=60, deadline=None)
def test_construct_is_canonical(ts):
    a = construct([t[0] for t in ts], [t[1] for t in ts], [t[2] for t in ts], PT)
    validate(a, PT)
    rebuilt = construct([r for r, _, _ in a.triples()], [c for _, c, _ in a.triples()], [v for _, _, v in a.triples()], PT)
    assert equal_exact(a, rebuilt)


@given(triples, triples)
@settings(max_examples=60, deadline=None)
def test_ew_add_commutes(ts1, ts2):
    a = construct([t[0] for t in ts1], [t[1] for t in ts1], [t[2] for t in ts1], PT)
    b = construct([t[0] for t in ts2], [t[1] for t in ts2], [t[2] for t in ts2], PT)
    assert equal_exact(aa.ew_add(a, b, PT), aa.ew_add(b, a, PT))


@given(triples)
@settings(max_examples=60, deadline=None)
def test_transpose_involution_property(ts):
    a = construct([t[0] for t in ts], [t[1] for t in ts], [t[2] for t in ts], PT)
    assert equal_exact(transpose(transpose(a)), a)

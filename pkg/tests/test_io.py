import warnings

import numpy as np
import pytest

import aarray as aa
from aarray import FormatError, Rng, equal_exact, random_array, random_relation, stats
from aarray.io import (
    dumps_table,
    dumps_triples,
    format_scalar,
    parse_scalar,
    read_table,
    read_triples,
    write_table,
    write_triples,
)


# ---------------------------------------------------------------------------
# SplitMix64


def test_stream_matches_sequential_stepping():
    a = Rng(42)
    seq = [a.next_u64() for _ in range(50)]
    b = Rng(42)
    assert [int(x) for x in b.stream(50)] == seq
    c = Rng(42)
    c.stream(20)
    assert c.next_u64() == seq[20]


def test_known_stream_is_stable_across_runs():
    # seeds 0 and 1 are the published SplitMix64 reference outputs; the
    # third value is frozen from this implementation to catch drift
    assert [Rng(0).next_u64(), Rng(1).next_u64(), Rng(2).next_u64()] == [
        16294208416658607535,
        10451216379200822465,
        10905525725756348110,
    ]


def test_rng_helpers_in_range():
    rng = Rng(7)
    assert all(0 <= rng.next_below(10) < 10 for _ in range(100))
    assert all(0.0 <= rng.next_unit() < 1.0 for _ in range(100))


# ---------------------------------------------------------------------------
# scalar text forms


@pytest.mark.parametrize(
    "text,value",
    [
        ("5", 5),
        ("007", 7),
        ("-3", -3),
        ("1.5", 1.5),
        ("-2.5e3", -2500.0),
        (".5", 0.5),
        ("true", True),
        ("false", False),
        ("5:14", "5:14"),
        ("2013-05-30", "2013-05-30"),
        ("1_0", "1_0"),
        ("inf", "inf"),
        ("nan", "nan"),
        ("Bandayde", "Bandayde"),
        ("", ""),
    ],
)
def test_parse_scalar(text, value):
    got = parse_scalar(text)
    assert got == value and type(got) is type(value)


def test_format_parse_round_trip():
    for v in (5, -3, 1.5, 0.25, True, False, "abc", "5:14"):
        assert parse_scalar(format_scalar(v)) == v
    with pytest.raises(FormatError):
        format_scalar("has\ttab")


# ---------------------------------------------------------------------------
# random generation


def test_random_array_is_deterministic():
    a = random_array(64, 8, seed=5)
    b = random_array(64, 8, seed=5)
    assert equal_exact(a, b)
    assert not equal_exact(a, random_array(64, 8, seed=6))


def test_random_array_degenerate_and_bounds():
    assert stats(random_array(16, 0, seed=1)).nnz == 0
    with pytest.raises(ValueError):
        random_array(0, 8, seed=1)
    a = random_array(32, 4, seed=9)
    keys = a.row_keys + a.col_keys
    assert min(keys) >= 1 and max(keys) <= 32


def test_random_array_value_distributions():
    # stored values may exceed the draw range where positions collided
    ones = random_array(16, 4, 1, values="ones")
    assert ones.value_tag == "int" and all(v >= 1 for _, _, v in ones.triples())
    ints = random_array(16, 4, 1, values="ints")
    assert ints.value_tag == "int" and all(v >= 1 for _, _, v in ints.triples())
    floats = random_array(16, 4, 1, values="floats")
    assert floats.value_tag == "float" and all(v >= 0.5 for _, _, v in floats.triples())
    with pytest.raises(aa.RegistryError):
        random_array(16, 4, 1, values="gaussian")


def test_random_array_mean_nnz_tracks_collision_model():
    n, d, seeds = 256, 8, 50
    draws = n * d
    cells = n * n
    expected = cells * (1.0 - (1.0 - 1.0 / cells) ** draws)
    mean = np.mean([random_array(n, d, seed).nnz for seed in range(seeds)])
    assert abs(mean - expected) / expected < 0.05


def test_random_relation_is_deterministic():
    a = random_relation(11)
    b = random_relation(11)
    assert equal_exact(a, b)
    assert stats(a).m <= 64 and stats(a).n <= 6


# ---------------------------------------------------------------------------
# triple files


def test_triples_round_trip_numeric(tmp_path):
    a = random_array(64, 8, seed=5)
    p = tmp_path / "a.triples"
    write_triples(a, p)
    assert equal_exact(read_triples(p), a)
    assert p.read_text() == dumps_triples(a)
    write_triples(read_triples(p), tmp_path / "b.triples")
    assert (tmp_path / "b.triples").read_text() == p.read_text()


def test_triples_duplicates_combine_numerically(tmp_path):
    p = tmp_path / "d.triples"
    p.write_text("row\tcol\tval\nr\tc\t2\nr\tc\t3\n")
    assert read_triples(p).entries_dict() == {("r", "c"): 5}


def test_triples_duplicates_last_wins_for_strings(tmp_path):
    p = tmp_path / "s.triples"
    p.write_text("row\tcol\tval\nr\tc\tfirst\nr\tc\tsecond\n")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        out = read_triples(p)
    assert out.entries_dict() == {("r", "c"): "second"}
    assert any("last value wins" in str(w.message) for w in caught)


def test_triples_format_errors(tmp_path):
    p = tmp_path / "bad.triples"
    p.write_text("row\tcol\tval\nr\tc\n")
    with pytest.raises(FormatError):
        read_triples(p)
    p.write_text("not-a-header\n")
    with pytest.raises(FormatError):
        read_triples(p)


def test_songs_cross_format_round_trip(songs, tmp_path):
    p = tmp_path / "songs.triples"
    write_triples(songs, p)
    assert equal_exact(read_triples(p), songs)


def test_mixed_key_axis_is_repaired(tmp_path):
    p = tmp_path / "mix.triples"
    p.write_text("row\tcol\tval\n42\tc\t1\nfoo\tc\t2\n")
    out = read_triples(p)
    assert out.row_keys == ["42", "foo"]  # any string key makes the axis strings
    p.write_text("row\tcol\tval\n1\tc\t1\n1.5\tc\t2\n")
    out = read_triples(p)
    assert out.row_keys == [1.0, 1.5]  # int plus real keys all become real


# ---------------------------------------------------------------------------
# table files


def test_songs_table(songs, songs_path):
    assert stats(songs) == aa.ArrayStats(4, 4, 16)
    assert dumps_table(songs) == songs_path.read_text()


def test_table_empty_cell_not_stored(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("\tx\ty\nr1\t1\t\nr2\t3\t4\n")
    out = read_table(p)
    assert stats(out).nnz == 3
    assert out.get("r1", "y") is None


def test_table_write_read_identity(tmp_path):
    a = random_array(12, 3, seed=2, values="ints")
    p = tmp_path / "t.tsv"
    write_table(a, p)
    assert equal_exact(read_table(p), a)


def test_table_mixed_value_kinds_round_trip(tmp_path):
    from aarray import build_table

    t = build_table(["r1", "r1", "r2"], ["name", "n", "name"], ["ada", 3, "bo"], combine=None)
    p = tmp_path / "mixed.tsv"
    write_table(t, p)
    back = read_table(p)
    assert equal_exact(back, t)
    assert back.value_tag == "mixed"


def test_table_numeric_zero_cells_are_dropped(tmp_path):
    p = tmp_path / "z.tsv"
    p.write_text("\tx\ty\nr1\t0\t2\n")
    assert read_table(p).entries_dict() == {("r1", "y"): 2}


def test_table_format_errors(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("\tx\ty\nr1\t1\n")
    with pytest.raises(FormatError):
        read_table(p)  # ragged
    p.write_text("\tx\tx\nr1\t1\t2\n")
    with pytest.raises(FormatError):
        read_table(p)  # duplicate columns
    p.write_text("\tx\nr1\t1\nr1\t2\n")
    with pytest.raises(FormatError):
        read_table(p)  # duplicate rows
    p.write_text("oops\tx\nr1\t1\n")
    with pytest.raises(FormatError):
        read_table(p)  # header must start empty
    p.write_text("\tx\n1\t1\n01\t2\n")
    with pytest.raises(FormatError):
        read_table(p)  # "1" and "01" parse to the same integer key


def test_empty_table_round_trip(tmp_path):
    from aarray import empty_array

    p = tmp_path / "empty.tsv"
    write_table(empty_array(), p)
    assert stats(read_table(p)).nnz == 0


def test_random_relations_round_trip_both_formats(tmp_path):
    rng = Rng(88)
    for trial in range(20):
        kind = "int" if trial % 2 else "str"
        r = random_relation(rng.next_u64(), max_rows=20, max_cols=5, value_kind=kind)
        p1 = tmp_path / f"t{trial}.tsv"
        write_table(r, p1)
        assert equal_exact(read_table(p1), r)
        p2 = tmp_path / f"t{trial}.triples"
        write_triples(r, p2)
        assert equal_exact(read_triples(p2), r)

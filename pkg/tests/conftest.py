from pathlib import Path

import pytest

import aarray as aa

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so individual tests time only work."""
    s = aa.get_semiring("plus-times")
    for values in ("ones", "floats"):
        a = aa.random_array(8, 2, 1, values=values)
        b = aa.random_array(8, 2, 2, values=values)
        aa.array_mult(a, b, s)
        aa.ew_add(a, b, s)
        aa.ew_mult(a, b, s)
        aa.construct([1, 1], [1, 1], [1.5, 2.5] if values == "floats" else [1, 2], s)


@pytest.fixture(scope="session")
def songs_path() -> Path:
    return DATA / "songs.tsv"


@pytest.fixture(scope="session")
def songs(songs_path):
    return aa.read_table(songs_path)

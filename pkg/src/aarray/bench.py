"""Wall-clock benchmarks for the distributivity and associativity rewrites,
plus the numba-versus-numpy kernel comparison.

Each case multiplies a fixed-size array with two square arrays of a swept
size, evaluating both orders of the identity under test.  Results are
cross-checked entry-exactly before anything is timed (integer values make
both orders bit-equal), generation is excluded from the timed region, and
the reported time is the median of three repetitions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import backend
from .core import AssociativeArray, array_mult, equal_exact, ew_add
from .errors import MismatchError
from .io import Rng, random_array
from .semiring import PLUS_TIMES

MODES = ("distributivity", "associativity")

CSV_HEADER = "mode,nA,s,d,seed,time_fused_s,time_rewritten_s,ratio"


@dataclass(frozen=True)
class BenchRow:
    """One benchmark measurement; ratio > 1 means the rewrite won."""

    mode: str
    n_a: int
    size: int
    d: float
    seed: int
    time_fused_s: float
    time_rewritten_s: float

    @property
    def ratio(self) -> float:
        return self.time_fused_s / self.time_rewritten_s

    def to_csv(self) -> str:
        return (
            f"{self.mode},{self.n_a},{self.size},{self.d:g},{self.seed},"
            f"{self.time_fused_s:.6f},{self.time_rewritten_s:.6f},{self.ratio:.4f}"
        )


def _median3(fn) -> float:
    times = []
    for _ in range(3):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[1]


def _case_arrays(n_a: int, size: int, d: float, seed: int):
    rng = Rng(seed)
    a = random_array(n_a, d, rng.next_u64())
    b = random_array(size, d, rng.next_u64())
    c = random_array(size, d, rng.next_u64())
    return a, b, c


def run_case(mode: str, n_a: int, size: int, d: float, seed: int) -> BenchRow:
    """Time one (mode, size, seed) cell; validates before timing."""
    s = PLUS_TIMES
    a, b, c = _case_arrays(n_a, size, d, seed)
    if mode == "distributivity":
        fused = lambda: array_mult(a, ew_add(b, c, s), s)  # noqa: E731
        rewritten = lambda: ew_add(array_mult(a, b, s), array_mult(a, c, s), s)  # noqa: E731
    elif mode == "associativity":
        fused = lambda: array_mult(a, array_mult(b, c, s), s)  # noqa: E731
        rewritten = lambda: array_mult(array_mult(a, b, s), c, s)  # noqa: E731
    else:
        raise MismatchError(f"unknown benchmark mode {mode!r}")
    # warm the kernels and prove both orders agree entry-exactly
    r_fused = fused()
    r_rewritten = rewritten()
    if not equal_exact(r_fused, r_rewritten):
        raise MismatchError(f"{mode} orders disagree at nA={n_a} s={size} seed={seed}; timing aborted")
    return BenchRow(mode, n_a, size, d, seed, _median3(fused), _median3(rewritten))


def sweep(mode: str, n_a: int, sizes, d: float, seeds) -> list[BenchRow]:
    return [run_case(mode, n_a, int(s), d, int(seed)) for s in sizes for seed in seeds]


def rows_to_csv(rows) -> str:
    return "\n".join([CSV_HEADER] + [r.to_csv() for r in rows]) + "\n"


# ---------------------------------------------------------------------------
# kernel backend comparison

BACKEND_CSV_HEADER = "op,n,d,seed,backend,time_s"


def compare_backends(sizes, d: float = 8, seed: int = 1) -> list[tuple]:
    """Time ew_add and array_mult under both kernel lanes.

    Also cross-checks that the lanes produce bit-identical arrays.
    Returns ``(op, n, d, seed, backend, seconds)`` tuples and restores the
    previously active backend selection.
    """
    s = PLUS_TIMES
    rows: list[tuple] = []
    previous = backend.active_backend()
    try:
        for n in sizes:
            rng = Rng(seed)
            a = random_array(int(n), d, rng.next_u64())
            b = random_array(int(n), d, rng.next_u64())
            results: dict[str, dict[str, AssociativeArray]] = {}
            for lane in ("numba", "numpy"):
                backend.set_backend(lane)
                ops = {
                    "ew_add": lambda: ew_add(a, b, s),
                    "array_mult": lambda: array_mult(a, b, s),
                }
                results[lane] = {}
                for op_name, fn in ops.items():
                    results[lane][op_name] = fn()  # warm + record
                    rows.append((op_name, int(n), d, seed, lane, _median3(fn)))
            for op_name in ("ew_add", "array_mult"):
                if not equal_exact(results["numba"][op_name], results["numpy"][op_name]):
                    raise MismatchError(f"kernel lanes disagree on {op_name} at n={n}")
    finally:
        backend.set_backend(previous)
    return rows


def backend_rows_to_csv(rows) -> str:
    lines = [BACKEND_CSV_HEADER]
    for op_name, n, d, seed, lane, seconds in rows:
        lines.append(f"{op_name},{n},{d:g},{seed},{lane},{seconds:.6f}")
    return "\n".join(lines) + "\n"

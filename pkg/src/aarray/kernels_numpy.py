"""Pure-numpy kernel lane.

Entry positions are encoded as a single int64 code (see
:data:`aarray.backend.CODE_SHIFT`) so every kernel works on one sorted key
column.  All reductions fold left-to-right in code order with stable
tie-breaking, which keeps float results bit-identical to the numba lane
(same accumulation sequences).
"""

from __future__ import annotations

import numpy as np

from .backend import CODE_SHIFT, OP_ADD, OP_EQ, OP_MAX, OP_MIN, OP_MUL

_UFUNC = {
    OP_ADD: np.add,
    OP_MUL: np.multiply,
    OP_MAX: np.maximum,
    OP_MIN: np.minimum,
}


def apply_binop(op: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if op == OP_EQ:
        return np.equal(x, y).astype(x.dtype)
    return _UFUNC[op](x, y)


def _segment_reduce(codes: np.ndarray, vals: np.ndarray, op: int):
    """Combine duplicate codes in an already-sorted run.

    Folds each segment strictly left to right (round r combines every
    segment's r-th element at once), so float results are bit-identical
    to a sequential accumulation; ``reduceat`` is not, its blocking
    changes the rounding.
    """
    if codes.size == 0:
        return codes, vals
    if op == OP_EQ:
        raise ValueError("OP_EQ is not a valid reduction operation")
    new_run = np.empty(codes.size, dtype=bool)
    new_run[0] = True
    np.not_equal(codes[1:], codes[:-1], out=new_run[1:])
    starts = np.nonzero(new_run)[0]
    if starts.size == codes.size:
        return codes, vals
    seg = np.cumsum(new_run) - 1
    pos = np.arange(codes.size, dtype=np.int64) - starts[seg]
    out = vals[starts].copy()
    fn = _UFUNC[op]
    for r in range(1, int(pos.max()) + 1):
        m = pos == r
        if not m.any():
            break
        idx = seg[m]
        out[idx] = fn(out[idx], vals[m])
    return codes[starts], out


def coalesce(codes: np.ndarray, vals: np.ndarray, op: int):
    """Sort unsorted (code, value) pairs and combine duplicates with ``op``."""
    order = np.argsort(codes, kind="stable")
    return _segment_reduce(codes[order], vals[order], op)


def merge_union(codes_a, vals_a, codes_b, vals_b, op: int):
    """Union-merge two sorted unique runs; shared codes combine with ``op``.

    Ties fold a-before-b, matching the numba two-pointer merge.
    """
    codes = np.concatenate([codes_a, codes_b])
    vals = np.concatenate([vals_a, vals_b])
    order = np.argsort(codes, kind="stable")
    return _segment_reduce(codes[order], vals[order], op)


def intersect_apply(codes_a, vals_a, codes_b, vals_b, op: int):
    """Intersection of two sorted unique runs; values pair through ``op``."""
    shared, ia, ib = np.intersect1d(codes_a, codes_b, assume_unique=True, return_indices=True)
    return shared, apply_binop(op, vals_a[ia], vals_b[ib])


def spgemm(a_rows, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols: int, plus_op: int, times_op: int):
    """Sparse product over integer ranks.

    ``a_*`` hold the left entries sorted row-major by (row, inner rank);
    ``b_*`` is a CSR view of the right entries over the same inner ranks.
    All index pairs are materialized, multiplied with ``times_op``, then
    duplicates combine with ``plus_op``.  Returns sorted unique
    ``(codes, vals)`` with ``code = row * ncols + col``.
    """
    counts = np.diff(b_indptr)
    reps = counts[a_inner]
    total = int(reps.sum())
    if total == 0:
        return np.empty(0, np.int64), a_vals[:0]
    a_idx = np.repeat(np.arange(a_inner.size, dtype=np.int64), reps)
    run_starts = np.cumsum(reps) - reps
    within = np.arange(total, dtype=np.int64) - np.repeat(run_starts, reps)
    b_idx = np.repeat(b_indptr[a_inner], reps) + within
    codes = (a_rows[a_idx] << np.int64(CODE_SHIFT)) | b_cols[b_idx]
    vals = apply_binop(times_op, a_vals[a_idx], b_vals[b_idx])
    # Pairs are generated in (row, inner, b-position) order, so a stable
    # sort reproduces the Gustavson accumulation sequence per output cell.
    return coalesce(codes, vals, plus_op)

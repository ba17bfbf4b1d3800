"""Numba kernel lane.

Same contracts as :mod:`aarray.kernels_numpy`; see there for the code
encoding.  Kernels are compiled per value dtype (int64 and float64) on
first use and cached on disk.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .backend import CODE_SHIFT, OP_EQ

_SHIFT = np.int64(CODE_SHIFT)


@njit(cache=True, inline="always")
def _binop(op, x, y):
    if op == 0:  # add
        return x + y
    elif op == 1:  # multiply
        return x * y
    elif op == 2:  # max
        return x if x >= y else y
    elif op == 3:  # min
        return x if x <= y else y
    else:  # equality test, dtype-preserving 0/1
        return x - x + 1 if x == y else x - x


@njit(cache=True)
def _combine_sorted(codes, vals, op):
    n = codes.size
    out_c = np.empty(n, codes.dtype)
    out_v = np.empty(n, vals.dtype)
    if n == 0:
        return out_c[:0], out_v[:0]
    m = 0
    cur = codes[0]
    acc = vals[0]
    for t in range(1, n):
        if codes[t] == cur:
            acc = _binop(op, acc, vals[t])
        else:
            out_c[m] = cur
            out_v[m] = acc
            m += 1
            cur = codes[t]
            acc = vals[t]
    out_c[m] = cur
    out_v[m] = acc
    m += 1
    return out_c[:m], out_v[:m]


@njit(cache=True)
def _merge_union(codes_a, vals_a, codes_b, vals_b, op):
    na, nb = codes_a.size, codes_b.size
    out_c = np.empty(na + nb, codes_a.dtype)
    out_v = np.empty(na + nb, vals_a.dtype)
    i = j = m = 0
    while i < na and j < nb:
        ca, cb = codes_a[i], codes_b[j]
        if ca < cb:
            out_c[m] = ca
            out_v[m] = vals_a[i]
            i += 1
        elif cb < ca:
            out_c[m] = cb
            out_v[m] = vals_b[j]
            j += 1
        else:
            out_c[m] = ca
            out_v[m] = _binop(op, vals_a[i], vals_b[j])
            i += 1
            j += 1
        m += 1
    while i < na:
        out_c[m] = codes_a[i]
        out_v[m] = vals_a[i]
        i += 1
        m += 1
    while j < nb:
        out_c[m] = codes_b[j]
        out_v[m] = vals_b[j]
        j += 1
        m += 1
    return out_c[:m], out_v[:m]


@njit(cache=True)
def _intersect_apply(codes_a, vals_a, codes_b, vals_b, op):
    na, nb = codes_a.size, codes_b.size
    cap = min(na, nb)
    out_c = np.empty(cap, codes_a.dtype)
    out_v = np.empty(cap, vals_a.dtype)
    i = j = m = 0
    while i < na and j < nb:
        ca, cb = codes_a[i], codes_b[j]
        if ca < cb:
            i += 1
        elif cb < ca:
            j += 1
        else:
            out_c[m] = ca
            out_v[m] = _binop(op, vals_a[i], vals_b[j])
            i += 1
            j += 1
            m += 1
    return out_c[:m], out_v[:m]


@njit(cache=True)
def _spgemm(a_indptr, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols, cap, plus_op, times_op):
    # Gustavson row-wise product with a dense accumulator over output
    # columns; touched columns are emitted in sorted order per row.
    acc = np.zeros(ncols, a_vals.dtype)
    mark = np.full(ncols, -1, np.int64)
    touched = np.empty(ncols, np.int64)
    out_c = np.empty(cap, np.int64)
    out_v = np.empty(cap, a_vals.dtype)
    pos = 0
    nrows = a_indptr.size - 1
    for i in range(nrows):
        nt = 0
        for p in range(a_indptr[i], a_indptr[i + 1]):
            k = a_inner[p]
            va = a_vals[p]
            for q in range(b_indptr[k], b_indptr[k + 1]):
                j = b_cols[q]
                v = _binop(times_op, va, b_vals[q])
                if mark[j] != i:
                    mark[j] = i
                    acc[j] = v
                    touched[nt] = j
                    nt += 1
                else:
                    acc[j] = _binop(plus_op, acc[j], v)
        # short runs: insertion sort beats the sort-call overhead; wide
        # runs: its quadratic cost loses (measured crossover ~200)
        if nt <= 192:
            for t in range(1, nt):
                x = touched[t]
                u = t - 1
                while u >= 0 and touched[u] > x:
                    touched[u + 1] = touched[u]
                    u -= 1
                touched[u + 1] = x
        else:
            touched[:nt].sort()
        base = np.int64(i) << _SHIFT
        for t in range(nt):
            j = touched[t]
            out_c[pos] = base | j
            out_v[pos] = acc[j]
            pos += 1
    return out_c[:pos], out_v[:pos]


def coalesce(codes, vals, op: int):
    if op == OP_EQ:
        raise ValueError("OP_EQ is not a valid reduction operation")
    order = np.argsort(codes, kind="stable")
    return _combine_sorted(codes[order], vals[order], op)


def merge_union(codes_a, vals_a, codes_b, vals_b, op: int):
    if op == OP_EQ:
        raise ValueError("OP_EQ is not a valid reduction operation")
    return _merge_union(codes_a, vals_a, codes_b, vals_b, op)


def intersect_apply(codes_a, vals_a, codes_b, vals_b, op: int):
    return _intersect_apply(codes_a, vals_a, codes_b, vals_b, op)


def spgemm(a_rows, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols: int, plus_op: int, times_op: int):
    counts = np.diff(b_indptr)
    cap = int(counts[a_inner].sum())
    if cap == 0:
        return np.empty(0, np.int64), a_vals[:0]
    nrows = int(a_rows[-1]) + 1
    a_indptr = np.zeros(nrows + 1, np.int64)
    np.cumsum(np.bincount(a_rows, minlength=nrows), out=a_indptr[1:])
    return _spgemm(a_indptr, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols, cap, plus_op, times_op)

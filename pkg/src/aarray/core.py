"""Sparse associative arrays and their core operations.

An :class:`AssociativeArray` is a sorted sparse mapping from (row key,
column key) pairs to semiring values.  Keys on each axis come from one
totally ordered domain (strings, integers, or reals); the semiring zero is
the non-stored element and never appears in an array; rows and columns
with no stored entry do not exist.  There are no size constraints: binary
operations align operands by key, treating absent cells as zero.

Arrays do not carry a semiring.  Every operation takes one explicitly,
because the same data is legitimately processed under different value
algebras (counting under plus-times, row comparison under and-eq, ...).

Storage is a row-major sorted triple list over key ranks with per-row
offsets derivable on demand; numeric work runs through the kernel backend
(numba or pure numpy, see :mod:`aarray.backend`) while string-valued
arrays take a scalar path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _keys, _values, backend
from .errors import ArrayError, CarrierError
from .semiring import Semiring

_VAL_DTYPE = {
    _values.TAG_INT: np.int64,
    _values.TAG_FLOAT: np.float64,
    _values.TAG_BOOL: np.bool_,
    _values.TAG_STR: object,
    _values.TAG_MIXED: object,
}

_FAST_TAGS = (_values.TAG_INT, _values.TAG_FLOAT, _values.TAG_BOOL)

_SHIFT = np.int64(backend.CODE_SHIFT)
_LOW_MASK = np.int64((1 << backend.CODE_SHIFT) - 1)
_MAX_ROWS = 1 << 31
_MAX_COLS = 1 << backend.CODE_SHIFT


def _encode(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Row-major position code; sorts like (row, col), decodes with shifts."""
    return (rows << _SHIFT) | cols


def _decode(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return codes >> _SHIFT, codes & _LOW_MASK


def _check_code_space(n_rows: int, n_cols: int) -> None:
    if n_rows >= _MAX_ROWS or n_cols >= _MAX_COLS:
        raise ArrayError(f"key space {n_rows} x {n_cols} exceeds the position encoding")


@dataclass(frozen=True)
class ArrayStats:
    """Size of an array: nonzero rows, nonzero columns, stored entries."""

    m: int
    n: int
    nnz: int


class AssociativeArray:
    """Immutable sorted sparse array over typed keys.

    Instances are only created by the module-level constructors; all
    operations are pure functions returning new arrays, so values are safe
    to share across threads.
    """

    __slots__ = ("row_store", "col_store", "rows", "cols", "vals", "value_tag")

    def __init__(self, row_store, col_store, rows, cols, vals, value_tag):
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        cols = np.ascontiguousarray(cols, dtype=np.int64)
        rows.flags.writeable = False
        cols.flags.writeable = False
        if vals.dtype != object:
            vals = np.ascontiguousarray(vals)
            vals.flags.writeable = False
        object.__setattr__(self, "row_store", row_store)
        object.__setattr__(self, "col_store", col_store)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "vals", vals)
        object.__setattr__(self, "value_tag", value_tag)

    def __setattr__(self, name, value):
        raise AttributeError("AssociativeArray is immutable")

    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_store), len(self.col_store))

    @property
    def row_keys(self) -> list:
        """Sorted nonzero row keys as Python scalars."""
        return _keys.store_keys(self.row_store)

    @property
    def col_keys(self) -> list:
        return _keys.store_keys(self.col_store)

    def triples(self):
        """Iterate ``(row_key, col_key, value)`` in row-major order."""
        rk = self.row_keys
        ck = self.col_keys
        for r, c, v in zip(self.rows, self.cols, self.vals):
            yield rk[r], ck[c], _values.to_python(v)

    def entries_dict(self) -> dict:
        return {(r, c): v for r, c, v in self.triples()}

    def get(self, row_key, col_key, default=None):
        """Stored value at a cell, or ``default`` when absent."""
        rmask = _keys.member_mask(self.row_store, [row_key])
        cmask = _keys.member_mask(self.col_store, [col_key])
        if not rmask.any() or not cmask.any():
            return default
        r = int(np.nonzero(rmask)[0][0])
        c = int(np.nonzero(cmask)[0][0])
        code = (r << int(_SHIFT)) | c
        codes = _encode(self.rows, self.cols)
        i = int(np.searchsorted(codes, code))
        if i < codes.size and codes[i] == code:
            return _values.to_python(self.vals[i])
        return default

    def row_indptr(self) -> np.ndarray:
        """CSR-style offsets of each row rank into the entry arrays."""
        counts = np.bincount(self.rows, minlength=len(self.row_store))
        indptr = np.zeros(len(self.row_store) + 1, np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr

    def __repr__(self) -> str:
        m, n = self.shape
        return f"<AssociativeArray {m}x{n} nnz={self.nnz} tag={self.value_tag!r}>"


def empty_array() -> AssociativeArray:
    return AssociativeArray((), (), np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64), None)


# ---------------------------------------------------------------------------
# internal construction pipeline


def _finalize(row_store, col_store, rows, cols, vals, tag) -> AssociativeArray:
    """Prune unused key ranks and build the canonical array.

    Expects entries already sorted row-major with unique positions and no
    stored zeros.
    """
    if rows.size == 0:
        return empty_array()
    used_r = np.zeros(len(row_store), dtype=bool)
    used_r[rows] = True
    if not used_r.all():
        lut = np.cumsum(used_r) - 1
        rows = lut[rows]
        row_store = _keys.store_take(row_store, np.nonzero(used_r)[0])
    used_c = np.zeros(len(col_store), dtype=bool)
    used_c[cols] = True
    if not used_c.all():
        lut = np.cumsum(used_c) - 1
        cols = lut[cols]
        col_store = _keys.store_take(col_store, np.nonzero(used_c)[0])
    return AssociativeArray(row_store, col_store, rows, cols, vals, tag)


def _finalize_codes(row_store, col_store, codes, vals, tag) -> AssociativeArray:
    if codes.size == 0:
        return empty_array()
    rows, cols = _decode(codes)
    return _finalize(row_store, col_store, rows, cols, vals, tag)


def _drop_zeros(codes, vals, zero, tag):
    if codes.size == 0:
        return codes, vals
    if tag in _FAST_TAGS:
        keep = vals != zero
    else:
        keep = np.fromiter((not _values.values_equal(v, zero) for v in vals), dtype=bool, count=len(vals))
    if keep.all():
        return codes, vals
    return codes[keep], vals[keep]


def _values_array(vals, tag) -> np.ndarray:
    dtype = _VAL_DTYPE[tag]
    if dtype is object:
        arr = np.empty(len(vals), dtype=object)
        arr[:] = [_values.to_python(v) for v in vals]
        return arr
    return np.asarray(vals, dtype=dtype)


def _detect_value_tag(vals, *, allow_mixed: bool) -> str:
    kinds = {_values.kind_of(v) for v in vals}
    if not kinds:
        return _values.TAG_INT
    if len(kinds) == 1:
        return next(iter(kinds))
    if kinds <= {_values.TAG_INT, _values.TAG_FLOAT}:
        return _values.TAG_FLOAT
    if allow_mixed:
        return _values.TAG_MIXED
    raise CarrierError(f"mixed value tags in one array: {sorted(kinds)}")


def _combine_tags(ta, tb, s: Semiring) -> str | None:
    if not s.accepts_tag(ta):
        raise CarrierError(f"{ta} values are outside the {s.name} carrier")
    if not s.accepts_tag(tb):
        raise CarrierError(f"{tb} values are outside the {s.name} carrier")
    if ta is None:
        return tb
    if tb is None or ta == tb:
        return ta
    if {ta, tb} <= {_values.TAG_INT, _values.TAG_FLOAT}:
        return _values.TAG_FLOAT
    if s.accepts_tag(_values.TAG_MIXED):
        return _values.TAG_MIXED
    raise CarrierError(f"cannot combine {ta} and {tb} values under {s.name}")


def _fast_ok(tag, s: Semiring, *codes) -> bool:
    return tag in _FAST_TAGS and all(c is not None for c in codes)


def _kernel_vals(a: AssociativeArray, tag: str) -> np.ndarray:
    """Value array cast for the kernel lanes (bools ride as int64 0/1)."""
    if tag == _values.TAG_BOOL:
        return a.vals.astype(np.int64)
    return a.vals.astype(_VAL_DTYPE[tag], copy=False)


def _result_vals(vals: np.ndarray, tag: str) -> np.ndarray:
    if tag == _values.TAG_BOOL and vals.dtype != np.bool_:
        return vals.astype(np.bool_)
    return vals


def _kernel_vals_raw(vals: np.ndarray, tag: str) -> np.ndarray:
    if tag == _values.TAG_BOOL:
        return vals.astype(np.int64)
    return vals


def _np_zero(s: Semiring, tag: str):
    if tag == _values.TAG_BOOL:
        return False
    return s.zero


# ---------------------------------------------------------------------------
# scalar-lane fallbacks (string and mixed carriers)


def _generic_coalesce(codes, vals, plus):
    order = np.argsort(codes, kind="stable")
    out_c: list[int] = []
    out_v: list = []
    for idx in order:
        code = int(codes[idx])
        if out_c and out_c[-1] == code:
            out_v[-1] = plus(out_v[-1], vals[idx])
        else:
            out_c.append(code)
            out_v.append(vals[idx])
    return np.asarray(out_c, np.int64), out_v


def _generic_merge_union(codes_a, vals_a, codes_b, vals_b, plus):
    i = j = 0
    na, nb = len(codes_a), len(codes_b)
    out_c: list[int] = []
    out_v: list = []
    while i < na and j < nb:
        ca, cb = int(codes_a[i]), int(codes_b[j])
        if ca < cb:
            out_c.append(ca)
            out_v.append(vals_a[i])
            i += 1
        elif cb < ca:
            out_c.append(cb)
            out_v.append(vals_b[j])
            j += 1
        else:
            out_c.append(ca)
            out_v.append(plus(vals_a[i], vals_b[j]))
            i += 1
            j += 1
    out_c.extend(int(c) for c in codes_a[i:])
    out_v.extend(vals_a[i:])
    out_c.extend(int(c) for c in codes_b[j:])
    out_v.extend(vals_b[j:])
    return np.asarray(out_c, np.int64), out_v


def _generic_intersect(codes_a, vals_a, codes_b, vals_b, times):
    i = j = 0
    na, nb = len(codes_a), len(codes_b)
    out_c: list[int] = []
    out_v: list = []
    while i < na and j < nb:
        ca, cb = int(codes_a[i]), int(codes_b[j])
        if ca < cb:
            i += 1
        elif cb < ca:
            j += 1
        else:
            out_c.append(ca)
            out_v.append(times(vals_a[i], vals_b[j]))
            i += 1
            j += 1
    return np.asarray(out_c, np.int64), out_v


def _generic_spgemm(a_rows, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols, plus, times):
    out: dict[int, object] = {}
    shift = int(_SHIFT)
    for p in range(len(a_rows)):
        k = int(a_inner[p])
        va = a_vals[p]
        base = int(a_rows[p]) << shift
        for q in range(int(b_indptr[k]), int(b_indptr[k + 1])):
            code = base | int(b_cols[q])
            v = times(va, b_vals[q])
            if code in out:
                out[code] = plus(out[code], v)
            else:
                out[code] = v
    codes = np.fromiter(sorted(out), dtype=np.int64, count=len(out))
    return codes, [out[int(c)] for c in codes]


def _generic_result(codes, vals_list, s: Semiring, tag: str):
    keep_c: list[int] = []
    keep_v: list = []
    for c, v in zip(codes, vals_list):
        if not _values.values_equal(v, s.zero):
            keep_c.append(int(c))
            keep_v.append(v)
    return np.asarray(keep_c, np.int64), _values_array(keep_v, tag)


# ---------------------------------------------------------------------------
# public constructors and operations


def construct(i_keys, j_keys, values, s: Semiring) -> AssociativeArray:
    """Build an array from parallel row-key / column-key / value vectors.

    Duplicate positions combine with the semiring addition; entries equal
    to the semiring zero are dropped; rows and columns left empty are not
    stored.
    """
    i_keys, j_keys, values = list(i_keys), list(j_keys), list(values)
    if not (len(i_keys) == len(j_keys) == len(values)):
        raise ArrayError(
            f"construct needs equally long vectors, got {len(i_keys)}/{len(j_keys)}/{len(values)}"
        )
    if not values:
        return empty_array()
    row_tag = _keys.axis_tag(i_keys)
    col_tag = _keys.axis_tag(j_keys)
    tag = _detect_value_tag(values, allow_mixed=False)
    if not s.accepts_tag(tag):
        raise CarrierError(f"{tag} values are outside the {s.name} carrier")
    row_store = _keys.store_from_keys(i_keys, row_tag)
    col_store = _keys.store_from_keys(j_keys, col_tag)
    rows = _keys.ranks_of(row_store, i_keys, row_tag)
    cols = _keys.ranks_of(col_store, j_keys, col_tag)
    _check_code_space(len(row_store), len(col_store))
    codes = _encode(rows, cols)
    vals = _values_array(values, tag)
    if _fast_ok(tag, s, s.plus_code) and s.plus_combines_tag(tag):
        kern = backend.kernels()
        codes, out = kern.coalesce(codes, _kernel_vals_raw(vals, tag), s.plus_code)
        out = _result_vals(out, tag)
        codes, out = _drop_zeros(codes, out, _np_zero(s, tag), tag)
    else:
        codes, merged = _generic_coalesce(codes, vals, s.plus)
        codes, out = _generic_result(codes, merged, s, tag)
    return _finalize_codes(row_store, col_store, codes, out, tag)


def stats(a: AssociativeArray) -> ArrayStats:
    """Nonzero-row count, nonzero-column count, and stored-entry count."""
    m, n = a.shape
    return ArrayStats(m, n, a.nnz)


def transpose(a: AssociativeArray) -> AssociativeArray:
    """Swap rows and columns; an involution."""
    if a.nnz == 0:
        return a
    _check_code_space(len(a.col_store), len(a.row_store))
    order = np.argsort(_encode(a.cols, a.rows), kind="stable")
    return AssociativeArray(a.col_store, a.row_store, a.cols[order], a.rows[order], a.vals[order], a.value_tag)


def ew_add(a: AssociativeArray, b: AssociativeArray, s: Semiring) -> AssociativeArray:
    """Element-wise addition; result support is the union of supports."""
    tag = _combine_tags(a.value_tag, b.value_tag, s)
    if a.nnz == 0:
        return b
    if b.nnz == 0:
        return a
    row_store, rmap_a, rmap_b = _keys.union_stores(a.row_store, b.row_store)
    col_store, cmap_a, cmap_b = _keys.union_stores(a.col_store, b.col_store)
    _check_code_space(len(row_store), len(col_store))
    codes_a = _encode(rmap_a[a.rows], cmap_a[a.cols])
    codes_b = _encode(rmap_b[b.rows], cmap_b[b.cols])
    if _fast_ok(tag, s, s.plus_code) and s.plus_combines_tag(tag):
        kern = backend.kernels()
        dtype = np.int64 if tag in (_values.TAG_INT, _values.TAG_BOOL) else np.float64
        codes, out = kern.merge_union(
            codes_a, _kernel_vals(a, tag).astype(dtype, copy=False),
            codes_b, _kernel_vals(b, tag).astype(dtype, copy=False),
            s.plus_code,
        )
        out = _result_vals(out, tag)
        codes, out = _drop_zeros(codes, out, _np_zero(s, tag), tag)
    else:
        codes, merged = _generic_merge_union(codes_a, list(a.vals), codes_b, list(b.vals), s.plus)
        codes, out = _generic_result(codes, merged, s, tag)
    return _finalize_codes(row_store, col_store, codes, out, tag)


def ew_mult(a: AssociativeArray, b: AssociativeArray, s: Semiring) -> AssociativeArray:
    """Element-wise multiplication; support is the intersection of supports."""
    tag = _combine_tags(a.value_tag, b.value_tag, s)
    out_tag = s.times_result_tag or tag
    if a.nnz == 0 or b.nnz == 0:
        return empty_array()
    row_store, rmap_a, rmap_b = _keys.intersect_stores(a.row_store, b.row_store)
    col_store, cmap_a, cmap_b = _keys.intersect_stores(a.col_store, b.col_store)
    if len(row_store) == 0 or len(col_store) == 0:
        return empty_array()
    ra, ca = rmap_a[a.rows], cmap_a[a.cols]
    keep_a = (ra >= 0) & (ca >= 0)
    rb, cb = rmap_b[b.rows], cmap_b[b.cols]
    keep_b = (rb >= 0) & (cb >= 0)
    codes_a = _encode(ra[keep_a], ca[keep_a])
    codes_b = _encode(rb[keep_b], cb[keep_b])
    if _fast_ok(tag, s, s.times_code):
        kern = backend.kernels()
        dtype = np.int64 if tag in (_values.TAG_INT, _values.TAG_BOOL) else np.float64
        codes, out = kern.intersect_apply(
            codes_a, _kernel_vals(a, tag).astype(dtype, copy=False)[keep_a],
            codes_b, _kernel_vals(b, tag).astype(dtype, copy=False)[keep_b],
            s.times_code,
        )
        out = _result_vals(out, out_tag)
        codes, out = _drop_zeros(codes, out, _np_zero(s, out_tag), out_tag)
    else:
        codes, merged = _generic_intersect(
            codes_a, list(a.vals[keep_a]), codes_b, list(b.vals[keep_b]), s.times
        )
        codes, out = _generic_result(codes, merged, s, out_tag)
    return _finalize_codes(row_store, col_store, codes, out, out_tag)


def array_mult(a: AssociativeArray, b: AssociativeArray, s: Semiring) -> AssociativeArray:
    """Array multiplication: sum over shared inner keys of value products.

    Inner keys match by exact key equality between the columns of ``a``
    and the rows of ``b``; there is no coercion between integer and real
    keys, and non-matching inner keys contribute nothing.
    """
    tag = _combine_tags(a.value_tag, b.value_tag, s)
    out_tag = s.times_result_tag or tag
    if a.nnz == 0 or b.nnz == 0:
        return empty_array()
    inner_store, imap_a, imap_b = _keys.intersect_stores(a.col_store, b.row_store)
    n_inner = len(inner_store)
    if n_inner == 0:
        return empty_array()
    ia = imap_a[a.cols]
    keep_a = ia >= 0
    a_rows, a_inner = a.rows[keep_a], ia[keep_a]
    ib = imap_b[b.rows]
    keep_b = ib >= 0
    b_inner, b_cols = ib[keep_b], b.cols[keep_b]
    if a_rows.size == 0 or b_inner.size == 0:
        return empty_array()
    b_indptr = np.zeros(n_inner + 1, np.int64)
    np.cumsum(np.bincount(b_inner, minlength=n_inner), out=b_indptr[1:])
    ncols = len(b.col_store)
    _check_code_space(len(a.row_store), ncols)
    if _fast_ok(tag, s, s.plus_code, s.times_code):
        kern = backend.kernels()
        dtype = np.int64 if tag in (_values.TAG_INT, _values.TAG_BOOL) else np.float64
        a_vals = _kernel_vals(a, tag).astype(dtype, copy=False)[keep_a]
        b_vals = _kernel_vals(b, tag).astype(dtype, copy=False)[keep_b]
        codes, out = kern.spgemm(a_rows, a_inner, a_vals, b_indptr, b_cols, b_vals, ncols, s.plus_code, s.times_code)
        out = _result_vals(out, out_tag)
        codes, out = _drop_zeros(codes, out, _np_zero(s, out_tag), out_tag)
    else:
        codes, merged = _generic_spgemm(
            a_rows, a_inner, list(a.vals[keep_a]), b_indptr, b_cols, list(b.vals[keep_b]), ncols, s.plus, s.times
        )
        codes, out = _generic_result(codes, merged, s, out_tag)
    return _finalize_codes(a.row_store, b.col_store, codes, out, out_tag)


def select_sub(a: AssociativeArray, row_sel=None, col_sel=None) -> AssociativeArray:
    """Restriction of ``a`` to the given row and column keys.

    ``None`` selects the whole axis.  Selector keys absent from the array
    are ignored; rows and columns left empty are dropped.
    """
    keep = np.ones(a.nnz, dtype=bool)
    if row_sel is not None:
        _keys.axis_tag(row_sel)  # mixed-tag selector lists are an error
        keep &= _keys.member_mask(a.row_store, row_sel)[a.rows]
    if col_sel is not None:
        _keys.axis_tag(col_sel)
        keep &= _keys.member_mask(a.col_store, col_sel)[a.cols]
    if keep.all():
        return a
    return _finalize(a.row_store, a.col_store, a.rows[keep], a.cols[keep], a.vals[keep], a.value_tag)


def identity_array(j_keys, j2_keys=None, value=1) -> AssociativeArray:
    """Array with ``value`` at ``(j_keys[p], j2_keys[p])`` for each position.

    With the default ``j2_keys = j_keys`` this is the identity pattern over
    ``j_keys``; with distinct targets it is the relabeling array used by
    rename.  Keys must be unique within each list.
    """
    j_keys = list(j_keys)
    j2_keys = list(j_keys) if j2_keys is None else list(j2_keys)
    if len(j_keys) != len(j2_keys):
        raise ArrayError(f"key lists differ in length: {len(j_keys)} vs {len(j2_keys)}")
    if len(set(j_keys)) != len(j_keys) or len(set(j2_keys)) != len(j2_keys):
        raise ArrayError("identity_array keys must be unique within each list")
    if not j_keys:
        return empty_array()
    row_tag = _keys.axis_tag(j_keys)
    col_tag = _keys.axis_tag(j2_keys)
    row_store = _keys.store_from_keys(j_keys, row_tag)
    col_store = _keys.store_from_keys(j2_keys, col_tag)
    rows = _keys.ranks_of(row_store, j_keys, row_tag)
    cols = _keys.ranks_of(col_store, j2_keys, col_tag)
    order = np.argsort(_encode(rows, cols), kind="stable")
    tag = _values.kind_of(value)
    vals = _values_array([value] * len(j_keys), tag)
    return AssociativeArray(row_store, col_store, rows[order], cols[order], vals[order], tag)


def nonzero_rows(a: AssociativeArray) -> list:
    """Sorted row keys (every stored row has at least one entry)."""
    return a.row_keys


def equal_exact(a: AssociativeArray, b: AssociativeArray) -> bool:
    """Identical key sets and identical entries (key- and type-sensitive)."""
    if a.value_tag != b.value_tag or a.nnz != b.nnz:
        return False
    if not (_keys.stores_equal(a.row_store, b.row_store) and _keys.stores_equal(a.col_store, b.col_store)):
        return False
    if not (np.array_equal(a.rows, b.rows) and np.array_equal(a.cols, b.cols)):
        return False
    if a.vals.dtype == object or b.vals.dtype == object:
        return all(_values.values_equal(x, y) for x, y in zip(a.vals, b.vals))
    return bool(np.array_equal(a.vals, b.vals))


def equal_approx(a: AssociativeArray, b: AssociativeArray, rtol: float = 1e-9) -> bool:
    """Same key structure, values within a relative tolerance.

    Non-numeric carriers fall back to exact comparison.
    """
    numeric = {_values.TAG_INT, _values.TAG_FLOAT}
    if not (a.value_tag in numeric and b.value_tag in numeric):
        return equal_exact(a, b)
    if a.nnz != b.nnz:
        return False
    if not (_keys.stores_equal(a.row_store, b.row_store) and _keys.stores_equal(a.col_store, b.col_store)):
        return False
    if not (np.array_equal(a.rows, b.rows) and np.array_equal(a.cols, b.cols)):
        return False
    va = a.vals.astype(np.float64)
    vb = b.vals.astype(np.float64)
    scale = np.maximum(np.abs(va), np.abs(vb))
    return bool(np.all(np.abs(va - vb) <= rtol * scale))


def validate(a: AssociativeArray, s: Semiring | None = None) -> None:
    """Check the representation invariants; raises :class:`ArrayError`.

    Intended for tests and debugging; operations maintain the invariants
    by construction.
    """
    m, n = a.shape
    if not (a.rows.size == a.cols.size == len(a.vals)):
        raise ArrayError("entry vectors out of step")
    if a.nnz == 0:
        if m or n:
            raise ArrayError("empty array with stored keys")
        return
    codes = _encode(a.rows, a.cols)
    if not np.all(codes[1:] > codes[:-1]):
        raise ArrayError("entries not strictly sorted row-major")
    if a.rows.min() < 0 or a.rows.max() >= m or a.cols.min() < 0 or a.cols.max() >= n:
        raise ArrayError("entry rank out of range")
    for ranks, size, axis in ((a.rows, m, "row"), (a.cols, n, "col")):
        used = np.zeros(size, dtype=bool)
        used[ranks] = True
        if not used.all():
            raise ArrayError(f"stored {axis} without entries")
    if s is not None:
        for v in a.vals:
            if _values.values_equal(v, s.zero):
                raise ArrayError(f"stored value equals the {s.name} zero")


# ---------------------------------------------------------------------------
# schema-free builder used by the relational layer and the file readers


def build_table(i_keys, j_keys, values, *, combine=None) -> AssociativeArray:
    """Build an array from triples without a semiring.

    Values may mix kinds across cells (a relation with string and numeric
    attributes); the per-kind non-stored elements (``0``, ``False``, ``""``,
    ``None``) are dropped.  Duplicate positions combine with ``combine`` or
    raise when none is given.
    """
    filtered = [
        (i, j, _values.to_python(v))
        for i, j, v in zip(i_keys, j_keys, values)
        if not _values.is_nonstored(v)
    ]
    if not filtered:
        return empty_array()
    i_keys = [t[0] for t in filtered]
    j_keys = [t[1] for t in filtered]
    values = [t[2] for t in filtered]
    row_tag = _keys.axis_tag(i_keys)
    col_tag = _keys.axis_tag(j_keys)
    tag = _detect_value_tag(values, allow_mixed=True)
    row_store = _keys.store_from_keys(i_keys, row_tag)
    col_store = _keys.store_from_keys(j_keys, col_tag)
    rows = _keys.ranks_of(row_store, i_keys, row_tag)
    cols = _keys.ranks_of(col_store, j_keys, col_tag)
    _check_code_space(len(row_store), len(col_store))
    codes = _encode(rows, cols)
    if combine is None and np.unique(codes).size != codes.size:
        raise ArrayError("duplicate positions and no combine function")
    codes, merged = _generic_coalesce(codes, _values_array(values, tag), combine or (lambda x, y: y))
    keep = [not _values.is_nonstored(v) for v in merged]
    codes = codes[np.asarray(keep, dtype=bool)]
    merged = [v for v, k in zip(merged, keep) if k]
    if tag == _values.TAG_MIXED:
        tag = _detect_value_tag(merged, allow_mixed=True)
    return _finalize_codes(row_store, col_store, codes, _values_array(merged, tag), tag)

"""Relations as associative arrays.

A relation is an associative array whose rows are tuples and whose columns
are attributes; row keys are arbitrary but unique, and carry no meaning at
input or output of a relational operation.  Two relations are equivalent
(``~``) when every row of one has an identically valued row in the other;
the strict variant also requires equal multiplicities.

Row comparison ranges over the union of both relations' columns, with
absent cells equal to the non-stored element, so rows are equal exactly
when their stored cell maps are equal.  The equivalence permutation array
built from that comparison drives intersection, difference, joins, and
grouping.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _keys, _values
from .core import (
    _VAL_DTYPE,
    AssociativeArray,
    _encode,
    _finalize,
    array_mult,
    build_table,
    empty_array,
    ew_add,
    select_sub,
)
from .errors import ArrayError, CapabilityError, ContractError, RegistryError
from .semiring import PLUS_TIMES, Semiring, sr_neg

Relation = AssociativeArray


# ---------------------------------------------------------------------------
# rows, signatures, equivalence


def row_items(a: Relation) -> list[tuple[object, dict]]:
    """Rows as ``(row_key, {column: value})`` in row-key order."""
    out: list[tuple[object, dict]] = []
    cur_key = None
    cells: dict | None = None
    for r, c, v in a.triples():
        if cells is None or r != cur_key:
            if cells is not None:
                out.append((cur_key, cells))
            cur_key = r
            cells = {}
        cells[c] = v
    if cells is not None:
        out.append((cur_key, cells))
    return out


def row_signature(cells: dict) -> frozenset:
    """Hashable whole-row comparison form (column, canonical value) pairs."""
    return frozenset((c, _values.canon(v)) for c, v in cells.items())


def _signatures(a: Relation) -> list[tuple[object, frozenset]]:
    return [(k, row_signature(cells)) for k, cells in row_items(a)]


def equiv_perm(a: Relation, b: Relation) -> AssociativeArray:
    """Equivalence permutation array: true at (i, j) iff row i of ``a``
    equals row j of ``b`` over the union of both column sets."""
    by_sig: dict[frozenset, list] = {}
    for key, sig in _signatures(b):
        by_sig.setdefault(sig, []).append(key)
    i_keys: list = []
    j_keys: list = []
    for key, sig in _signatures(a):
        for match in by_sig.get(sig, ()):
            i_keys.append(key)
            j_keys.append(match)
    if not i_keys:
        return empty_array()
    return build_table(i_keys, j_keys, [True] * len(i_keys))


def is_permutation_array(p: AssociativeArray) -> bool:
    return p.nnz == 0 or (p.value_tag == _values.TAG_BOOL and bool(np.all(p.vals)))


def equivalent(a: Relation, b: Relation, strict: bool = False) -> bool:
    """Relational equivalence: equal row-value sets (weak) or row-value
    multisets (strict)."""
    sigs_a = [s for _, s in _signatures(a)]
    sigs_b = [s for _, s in _signatures(b)]
    if strict:
        return Counter(sigs_a) == Counter(sigs_b)
    return set(sigs_a) == set(sigs_b)


# ---------------------------------------------------------------------------
# predicates and aggregators


@dataclass(frozen=True)
class RowPredicate:
    """0/1-valued function of the selected columns of one row."""

    fn: Callable[[dict], object]
    name: str = "<fn>"
    const: int | None = None  # 1 or 0 for constant predicates


@dataclass(frozen=True)
class RowPairPredicate:
    """0/1-valued function of selected columns of a row pair."""

    fn: Callable[[dict, dict], object]
    name: str = "<fn>"
    symmetric: bool = False
    const: int | None = None
    _swap: object = field(default=None, compare=False, repr=False)

    def swapped(self) -> "RowPairPredicate":
        """Argument-swapped predicate; swapping twice returns the original."""
        if self._swap is not None:
            return self._swap
        fn = self.fn
        sw = RowPairPredicate(lambda rb, ra: fn(ra, rb), name=f"{self.name}~swap", symmetric=self.symmetric, const=self.const)
        object.__setattr__(sw, "_swap", self)
        object.__setattr__(self, "_swap", sw)
        return sw


ALWAYS_TRUE = RowPredicate(lambda row: 1, name="true", const=1)
ALWAYS_FALSE = RowPredicate(lambda row: 0, name="false", const=0)
PAIR_TRUE = RowPairPredicate(lambda ra, rb: 1, name="true", symmetric=True, const=1)
PAIR_FALSE = RowPairPredicate(lambda ra, rb: 0, name="false", symmetric=True, const=0)


def _compare(op: str, x, y) -> int:
    """Type-aware comparison; mixed kinds and absent cells compare false."""
    if op == "eq":
        return int(x is not None and y is not None and _values.values_equal(x, y))
    if op == "neq":
        return int(not (x is not None and y is not None and _values.values_equal(x, y)))
    if x is None or y is None:
        return 0
    kx, ky = _values.canon(x)[0], _values.canon(y)[0]
    if kx != ky or kx == "b":
        return 0
    if op == "lt":
        return int(x < y)
    if op == "gt":
        return int(x > y)
    if op == "contains":
        return int(kx == "s" and y in x)
    raise RegistryError(f"unknown comparison {op!r}")


COMPARISON_OPS = ("eq", "neq", "lt", "gt", "contains")


def compare_predicate(col, op: str, literal) -> RowPredicate:
    """Row predicate ``row[col] <op> literal`` (false when the cell is absent)."""
    if op not in COMPARISON_OPS:
        raise RegistryError(f"unknown comparison {op!r}")
    return RowPredicate(lambda row: _compare(op, row.get(col), literal), name=f"{col} {op} {literal!r}")


def pair_compare(a_col, op: str, b_col) -> RowPairPredicate:
    """Pair predicate comparing one column of each side."""
    if op not in COMPARISON_OPS:
        raise RegistryError(f"unknown comparison {op!r}")
    return RowPairPredicate(
        lambda ra, rb: _compare(op, ra.get(a_col), rb.get(b_col)),
        name=f"a.{a_col} {op} b.{b_col}",
        symmetric=op in ("eq", "neq"),
    )


def _as_row_predicate(phi) -> RowPredicate:
    return phi if isinstance(phi, RowPredicate) else RowPredicate(phi)


def _as_pair_predicate(theta) -> RowPairPredicate:
    return theta if isinstance(theta, RowPairPredicate) else RowPairPredicate(theta)


def _check_01(value, name: str) -> int:
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (int, np.integer)) and value in (0, 1):
        return int(value)
    raise ContractError(f"predicate {name} returned {value!r}; it must produce 0 or 1")


@dataclass(frozen=True)
class Aggregator:
    """Binary commutative reduction over one column.

    ``on_zero`` declares how the function treats the non-stored element:
    ``identity`` (absent cells contribute nothing) or ``annihilator``
    (the whole aggregation collapses to the empty relation).  ``kind``
    distinguishes the two builtins that are not plain value folds.
    """

    fn: Callable | None
    name: str = "<fn>"
    on_zero: str = "identity"
    kind: str = "fold"  # fold | count | first-by-key
    trusted: bool = False


AGGREGATORS: dict[str, Aggregator] = {
    "sum": Aggregator(lambda x, y: x + y, name="sum", trusted=True),
    "min": Aggregator(lambda x, y: min(x, y), name="min", trusted=True),
    "max": Aggregator(lambda x, y: max(x, y), name="max", trusted=True),
    "count": Aggregator(None, name="count", kind="count", trusted=True),
    "first-by-key": Aggregator(None, name="first-by-key", kind="first-by-key", trusted=True),
}


def _as_aggregator(f) -> Aggregator:
    if isinstance(f, Aggregator):
        return f
    if isinstance(f, str):
        try:
            return AGGREGATORS[f]
        except KeyError:
            raise RegistryError(f"unknown aggregator {f!r}") from None
    return Aggregator(f, name=getattr(f, "__name__", "<fn>"))


def _check_commutative(agg: Aggregator, samples: list) -> None:
    if agg.trusted or agg.fn is None:
        return
    pairs = 0
    for i in range(len(samples) - 1):
        x, y = samples[i], samples[i + 1]
        if not _values.values_equal(agg.fn(x, y), agg.fn(y, x)):
            raise ContractError(f"aggregator {agg.name} is not commutative on ({x!r}, {y!r})")
        pairs += 1
        if pairs >= 8:
            return


# ---------------------------------------------------------------------------
# array surgery helpers (value-exact, no semiring involved)


def _key_str(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, (int, np.integer)):
        return str(int(k))
    return repr(float(k))


def _relabel_axis_rows(a: Relation, mapping: dict) -> Relation:
    """Replace row keys via ``mapping`` (injective on the mapped keys)."""
    old = a.row_keys
    new = [mapping.get(k, k) for k in old]
    if len(set(new)) != len(new):
        raise ArrayError("row relabeling is not injective")
    tag = _keys.axis_tag(new)
    store = _keys.store_from_keys(new, tag)
    lut = _keys.ranks_of(store, new, tag)
    rows = lut[a.rows]
    order = np.argsort(_encode(rows, a.cols), kind="stable")
    return AssociativeArray(store, a.col_store, rows[order], a.cols[order], a.vals[order], a.value_tag)


def _relabel_cols(a: Relation, mapping: dict) -> Relation:
    """Keep only columns in ``mapping`` and relabel them (injectively)."""
    old = a.col_keys
    kept = [r for r, k in enumerate(old) if k in mapping]
    if not kept or a.nnz == 0:
        return empty_array()
    new_names = [mapping[old[r]] for r in kept]
    if len(set(new_names)) != len(new_names):
        raise ArrayError("column relabeling is not injective")
    tag = _keys.axis_tag(new_names)
    store = _keys.store_from_keys(new_names, tag)
    lut = np.full(len(old), -1, np.int64)
    lut[np.asarray(kept, np.int64)] = _keys.ranks_of(store, new_names, tag)
    mapped = lut[a.cols]
    keep = mapped >= 0
    rows, cols, vals = a.rows[keep], mapped[keep], a.vals[keep]
    order = np.argsort(_encode(rows, cols), kind="stable")
    return _relabel_finalize(a.row_store, store, rows[order], cols[order], vals[order], a.value_tag)


def _relabel_finalize(row_store, col_store, rows, cols, vals, tag) -> Relation:
    # value-exact pruning of emptied rows/cols
    return _finalize(row_store, col_store, rows, cols, vals, tag)


def _concat_tag(ta: str | None, tb: str | None) -> str | None:
    if ta is None:
        return tb
    if tb is None or ta == tb:
        return ta
    if {ta, tb} <= {_values.TAG_INT, _values.TAG_FLOAT}:
        return _values.TAG_FLOAT
    return _values.TAG_MIXED


def _concat_disjoint(a: Relation, b: Relation) -> Relation:
    """Stack two relations whose row keys are disjoint."""
    if a.nnz == 0:
        return b
    if b.nnz == 0:
        return a
    tag = _concat_tag(a.value_tag, b.value_tag)
    row_store, rmap_a, rmap_b = _keys.union_stores(a.row_store, b.row_store)
    col_store, cmap_a, cmap_b = _keys.union_stores(a.col_store, b.col_store)
    rows = np.concatenate([rmap_a[a.rows], rmap_b[b.rows]])
    cols = np.concatenate([cmap_a[a.cols], cmap_b[b.cols]])
    if tag in (_values.TAG_STR, _values.TAG_MIXED):
        vals = np.empty(rows.size, dtype=object)
        vals[: a.nnz] = a.vals
        vals[a.nnz :] = b.vals
    else:
        vals = np.concatenate([a.vals.astype(_VAL_DTYPE[tag]), b.vals.astype(_VAL_DTYPE[tag])])
    order = np.argsort(_encode(rows, cols), kind="stable")
    return AssociativeArray(row_store, col_store, rows[order], cols[order], vals[order], tag)


def _stack_rows(pairs: list[tuple[object, object]], a: Relation) -> Relation:
    """New relation with row ``new_key`` copying row ``src_key`` of ``a``.

    Preserves values exactly; source rows may repeat under several new
    keys.  ``new_key`` values must be distinct.
    """
    if not pairs or a.nnz == 0:
        return empty_array()
    new_keys = [p[0] for p in pairs]
    if len(set(new_keys)) != len(new_keys):
        raise ArrayError("duplicate output row keys")
    tag = _keys.axis_tag(new_keys)
    store = _keys.store_from_keys(new_keys, tag)
    new_ranks = _keys.ranks_of(store, new_keys, tag)
    src_rank = {k: r for r, k in enumerate(a.row_keys)}
    indptr = a.row_indptr()
    chunks_r: list[np.ndarray] = []
    chunks_c: list[np.ndarray] = []
    chunks_v: list[np.ndarray] = []
    for (new_key, src_key), nr in zip(pairs, new_ranks):
        r = src_rank[src_key]
        lo, hi = int(indptr[r]), int(indptr[r + 1])
        chunks_r.append(np.full(hi - lo, nr, np.int64))
        chunks_c.append(a.cols[lo:hi])
        chunks_v.append(a.vals[lo:hi])
    rows = np.concatenate(chunks_r)
    cols = np.concatenate(chunks_c)
    if a.vals.dtype == object:
        vals = np.empty(rows.size, dtype=object)
        pos = 0
        for ch in chunks_v:
            vals[pos : pos + ch.size] = ch
            pos += ch.size
    else:
        vals = np.concatenate(chunks_v)
    order = np.argsort(_encode(rows, cols), kind="stable")
    return _relabel_finalize(store, a.col_store, rows[order], cols[order], vals[order], a.value_tag)


# ---------------------------------------------------------------------------
# the relational operations


def project(a: Relation, j_cols) -> Relation:
    """Keep the columns in ``j_cols``; rows left empty disappear."""
    return select_sub(a, None, list(j_cols))


def rename(a: Relation, j_cols, j2_cols) -> Relation:
    """Project the columns ``j_cols`` and relabel them ``j2_cols``."""
    j_cols, j2_cols = list(j_cols), list(j2_cols)
    if len(j_cols) != len(j2_cols):
        raise ArrayError(f"rename lists differ in length: {len(j_cols)} vs {len(j2_cols)}")
    if len(set(j_cols)) != len(j_cols):
        raise ArrayError("rename source columns must be distinct")
    if len(set(j2_cols)) != len(j2_cols):
        raise ArrayError("rename target columns must be distinct")
    return _relabel_cols(a, dict(zip(j_cols, j2_cols)))


def union(a: Relation, b: Relation) -> Relation:
    """All rows of both relations; colliding row keys of ``b`` are
    deterministically freshened first.

    Fresh keys get a ``#u<k>`` suffix with the smallest free counter.  When
    a collision involves non-string row keys, all row keys of both
    operands are first converted to their canonical string form so the row
    axis stays homogeneous.  Because row keys are disjoint afterwards,
    element-wise addition reduces to stacking (every cell meets the
    non-stored element on the other side).
    """
    if a.nnz == 0:
        return b
    if b.nnz == 0:
        return a
    a_keys = a.row_keys
    b_keys = b.row_keys
    if set(a_keys) & set(b_keys):
        row_tags = {_keys.key_tag(k) for k in a_keys} | {_keys.key_tag(k) for k in b_keys}
        if row_tags != {_keys.TAG_STR}:
            a = _relabel_axis_rows(a, {k: _key_str(k) for k in a_keys})
            b = _relabel_axis_rows(b, {k: _key_str(k) for k in b_keys})
            a_keys = a.row_keys
            b_keys = b.row_keys
        a_set = set(a_keys)
        taken = a_set | set(b_keys)
        mapping = {}
        for key in b_keys:
            if key in a_set:
                k = 1
                while f"{key}#u{k}" in taken:
                    k += 1
                fresh = f"{key}#u{k}"
                mapping[key] = fresh
                taken.add(fresh)
        if mapping:
            b = _relabel_axis_rows(b, mapping)
    return _concat_disjoint(a, b)


def intersection(a: Relation, b: Relation) -> Relation:
    """The rows of ``b`` that match some row of ``a``.

    This is the permutation-array product: with P the equivalence
    permutation array of ``a`` versus ``b``, the result selects exactly
    the ``b`` rows with a nonzero P column.
    """
    sigs_a = {s for _, s in _signatures(a)}
    matching = [k for k, s in _signatures(b) if s in sigs_a]
    if not matching:
        return empty_array()
    return select_sub(b, matching, None)


def difference(a: Relation, b: Relation, strategy: str = "mask", s: Semiring = PLUS_TIMES) -> Relation:
    """Rows of ``a`` with no match in ``b``.

    ``mask`` drops the rows of ``a`` whose equivalence-permutation row is
    nonempty and is total over all carriers.  ``algebraic`` computes
    ``a (+) -(P b)`` with the semiring's additive inverse, so matched rows
    cancel to the non-stored element; it requires ``s.has_plus_inverse``.
    """
    if strategy not in ("mask", "algebraic"):
        raise ArrayError(f"unknown difference strategy {strategy!r}")
    if strategy == "mask":
        sigs_b = {sig for _, sig in _signatures(b)}
        keep = [k for k, sig in _signatures(a) if sig not in sigs_b]
        if not keep:
            return empty_array()
        return select_sub(a, keep, None)
    if not s.has_plus_inverse:
        raise CapabilityError(f"semiring {s.name} has no additive inverse; use the mask strategy")
    p = equiv_perm(a, b)
    if p.nnz == 0:
        return a
    # P b keyed by a's rows: each matched a-row receives its (identical)
    # matching b-row, then negates and cancels against a.
    first_match: dict = {}
    for i_key, j_key, _ in p.triples():
        first_match.setdefault(i_key, j_key)
    pb = _stack_rows(sorted(first_match.items(), key=lambda kv: kv[0]), b)
    neg_vals = np.asarray([sr_neg(s, v) for v in pb.vals], dtype=pb.vals.dtype)
    neg = AssociativeArray(pb.row_store, pb.col_store, pb.rows, pb.cols, neg_vals, pb.value_tag)
    return ew_add(a, neg, s)


def select(a: Relation, j_cols, phi) -> Relation:
    """Rows of ``a`` satisfying the 0/1 predicate ``phi`` on columns ``j_cols``.

    Equivalent to the permutation product P a with P the identity pattern
    over the qualifying rows.
    """
    phi = _as_row_predicate(phi)
    j_set = list(j_cols)
    kept = []
    for key, cells in row_items(a):
        restricted = {c: v for c, v in cells.items() if c in j_set}
        if _check_01(phi.fn(restricted), phi.name):
            kept.append(key)
    if not kept:
        return empty_array()
    return select_sub(a, kept, None)


def _disambiguate_columns(a: Relation, b: Relation) -> tuple[Relation, Relation]:
    """Suffix colliding ``b`` column names with ``#B`` before combining.

    Non-string column axes are first stringified on both sides (the suffix
    scheme produces strings).
    """
    a_cols = a.col_keys
    b_cols = b.col_keys
    shared = set(a_cols) & set(b_cols)
    if not shared:
        return a, b
    col_tags = {_keys.key_tag(k) for k in a_cols} | {_keys.key_tag(k) for k in b_cols}
    if col_tags != {_keys.TAG_STR}:
        a = _relabel_cols(a, {k: _key_str(k) for k in a_cols})
        b = _relabel_cols(b, {k: _key_str(k) for k in b_cols})
        shared = {_key_str(k) for k in shared}
        b_cols = b.col_keys
    b_map = {k: (f"{k}#B" if k in shared else k) for k in b_cols}
    return a, _relabel_cols(b, b_map)


def _theta_pairs(a: Relation, b: Relation, a_cols, b_cols, theta: RowPairPredicate):
    a_cols, b_cols = list(a_cols), list(b_cols)
    a_rows = row_items(a)
    b_rows = row_items(b)
    pairs = []
    for ka, ra in a_rows:
        ra_j = {c: v for c, v in ra.items() if c in a_cols}
        for kb, rb in b_rows:
            rb_j = {c: v for c, v in rb.items() if c in b_cols}
            if _check_01(theta.fn(ra_j, rb_j), theta.name):
                pairs.append((ka, kb))
    return pairs


def theta_perm(a: Relation, b: Relation, a_cols, b_cols, theta) -> AssociativeArray:
    """Permutation array of the row pairs satisfying ``theta``."""
    pairs = _theta_pairs(a, b, a_cols, b_cols, _as_pair_predicate(theta))
    if not pairs:
        return empty_array()
    return build_table([p[0] for p in pairs], [p[1] for p in pairs], [True] * len(pairs))


def theta_join(a: Relation, b: Relation, a_cols, b_cols, theta, s: Semiring = PLUS_TIMES) -> Relation:
    """Join keyed by ``a``'s rows: matched ``b`` rows are added in via the
    permutation product, so several matches for one ``a`` row combine cell
    by cell with the semiring addition.

    Evaluated with a 0/1-weighted permutation array under ``s``: the
    result is ``P b (+) D a`` where D restricts to the ``a`` rows with a
    match.  Colliding column names of ``b`` get a ``#B`` suffix first.
    Value carriers must be compatible with ``s`` (string-valued inputs
    have no addition; use :func:`theta_join_pairs`).
    """
    theta = _as_pair_predicate(theta)
    a2, b2 = _disambiguate_columns(a, b)
    p = theta_perm(a, b, a_cols, b_cols, theta)
    if p.nnz == 0:
        return empty_array()
    # weight the matches with the semiring's one so the product forwards
    # values unchanged (1 for plus-times, 0 for the tropical semirings)
    weight_tag = _values.kind_of(s.one)
    weights = np.full(p.nnz, s.one, dtype=_VAL_DTYPE[weight_tag])
    p01 = AssociativeArray(p.row_store, p.col_store, p.rows, p.cols, weights, weight_tag)
    pb = array_mult(p01, b2, s)
    matched = p.row_keys
    da = select_sub(a2, matched, None)
    return ew_add(pb, da, s)


def theta_join_pairs(a: Relation, b: Relation, a_cols, b_cols, theta) -> Relation:
    """Pair-expanded join: one output row per matching row pair, keyed
    ``"<a key>|<b key>"``, carrying all attributes of both sides."""
    theta = _as_pair_predicate(theta)
    a2, b2 = _disambiguate_columns(a, b)
    pairs = _theta_pairs(a, b, a_cols, b_cols, theta)
    if not pairs:
        return empty_array()
    a_cells = dict(row_items(a2))
    b_cells = dict(row_items(b2))
    i_out: list = []
    j_out: list = []
    v_out: list = []
    for ka, kb in pairs:
        out_key = f"{_key_str(ka)}|{_key_str(kb)}"
        for c, v in a_cells.get(ka, {}).items():
            i_out.append(out_key)
            j_out.append(c)
            v_out.append(v)
        for c, v in b_cells.get(kb, {}).items():
            i_out.append(out_key)
            j_out.append(c)
            v_out.append(v)
    return build_table(i_out, j_out, v_out)


def extended_projection(a: Relation, j_cols, out_col, phi) -> Relation:
    """One computed column: row i holds ``phi`` of its ``j_cols`` cells.

    ``phi`` may return any carrier value; rows where it yields the
    non-stored element (``None``, ``0``, ``False``, ``""``) are dropped.
    """
    j_cols = list(j_cols)
    fn = phi.fn if isinstance(phi, RowPredicate) else phi
    i_out: list = []
    v_out: list = []
    for key, cells in row_items(a):
        restricted = {c: v for c, v in cells.items() if c in j_cols}
        v = fn(restricted)
        if v is None or _values.is_nonstored(v):
            continue
        _values.kind_of(v)  # rejects values outside every carrier
        i_out.append(key)
        v_out.append(v)
    if not i_out:
        return empty_array()
    return build_table(i_out, [out_col] * len(i_out), v_out)


@dataclass(frozen=True)
class ExtendFn:
    """Named per-row function for extended projection, CLI-addressable.

    ``concat`` joins the selected cells with ``/`` in column-list order;
    ``sum``/``min``/``max`` fold the numeric cells present; ``pass-through``
    forwards the single selected cell.  Absent cells are skipped; a row
    with nothing to combine yields ``None`` and is dropped.
    """

    name: str
    cols: tuple

    def __call__(self, row: dict):
        present = [row[c] for c in self.cols if c in row]
        if self.name == "concat":
            return "/".join(str(v) for v in present) if present else None
        if self.name == "pass-through":
            return present[0] if present else None
        nums = []
        for v in present:
            if _values.canon(v)[0] != "n":
                raise ContractError(f"{self.name} needs numeric cells, got {v!r}")
            nums.append(v)
        if not nums:
            return None
        if self.name == "sum":
            return sum(nums)
        if self.name == "min":
            return min(nums)
        if self.name == "max":
            return max(nums)
        raise RegistryError(f"unknown extend function {self.name!r}")


EXTEND_NAMES = ("concat", "sum", "min", "max", "pass-through")


def make_extend(name: str, j_cols) -> ExtendFn:
    if name not in EXTEND_NAMES:
        raise RegistryError(f"unknown extend function {name!r} (known: {', '.join(EXTEND_NAMES)})")
    return ExtendFn(name, tuple(j_cols))


def aggregate(a: Relation, group_col, value_col, f) -> Relation:
    """Group rows by equal values in ``group_col`` and reduce
    ``value_col`` with the binary commutative function ``f``.

    The output has one row per group, keyed by the group's least row key,
    with ``group_col`` holding the shared value and ``value_col`` the
    reduction.  Rows lacking ``group_col`` belong to no group.  An
    aggregator declared annihilating (``f(0, v) = 0``) collapses the whole
    result to the empty relation.
    """
    agg = _as_aggregator(f)
    if group_col == value_col:
        raise ArrayError("group and value columns must differ")
    if agg.on_zero == "annihilator":
        return empty_array()
    groups: dict[tuple, list[tuple[object, dict]]] = {}
    for key, cells in row_items(a):
        if group_col not in cells:
            continue
        groups.setdefault(_values.canon(cells[group_col]), []).append((key, cells))
    if not groups:
        return empty_array()
    i_out: list = []
    j_out: list = []
    v_out: list = []
    for members in groups.values():
        members.sort(key=lambda kv: kv[0])
        rep_key = members[0][0]
        group_value = members[0][1][group_col]
        stored = [cells[value_col] for _, cells in members if value_col in cells]
        if agg.kind == "count":
            reduced = len(members)
        elif agg.kind == "first-by-key":
            reduced = stored[0] if stored else None
        else:
            _check_commutative(agg, stored)
            reduced = None
            for v in stored:
                reduced = v if reduced is None else agg.fn(reduced, v)
        i_out.append(rep_key)
        j_out.append(group_col)
        v_out.append(group_value)
        if reduced is not None:
            i_out.append(rep_key)
            j_out.append(value_col)
            v_out.append(reduced)
    return build_table(i_out, j_out, v_out)

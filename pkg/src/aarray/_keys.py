"""Key handling: tags, canonical axis storage, and rank maps.

Row/column keys are drawn from one of three totally ordered domains per
axis: strings (UTF-8 code point order, which coincides with bytewise
UTF-8 order), 64-bit integers, or 64-bit reals.  Axes are homogeneous;
integer and real keys never coerce into each other.

Numeric axes are stored as sorted read-only numpy arrays so that set
operations on large benchmark key spaces stay in C.  String axes are
stored as sorted tuples.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import KeyTagError

TAG_STR = "str"
TAG_INT = "int"
TAG_FLOAT = "float"

_NUMERIC_DTYPE = {TAG_INT: np.int64, TAG_FLOAT: np.float64}


def key_tag(key) -> str:
    """Tag of a single key; bools and NaN are rejected."""
    if isinstance(key, str):
        return TAG_STR
    if isinstance(key, (bool, np.bool_)):
        raise KeyTagError(f"boolean {key!r} is not a valid key")
    if isinstance(key, (int, np.integer)):
        return TAG_INT
    if isinstance(key, (float, np.floating)):
        if math.isnan(key):
            raise KeyTagError("NaN is not a valid key")
        return TAG_FLOAT
    raise KeyTagError(f"unsupported key type {type(key).__name__}")


def normalize_key(key):
    """Convert numpy scalars to plain Python scalars."""
    if isinstance(key, np.integer):
        return int(key)
    if isinstance(key, np.floating):
        return float(key)
    if isinstance(key, np.str_):
        return str(key)
    return key


def axis_tag(keys) -> str | None:
    """Common tag of a key sequence, None when empty; mixed tags raise."""
    tag = None
    for k in keys:
        t = key_tag(k)
        if tag is None:
            tag = t
        elif t != tag:
            raise KeyTagError(f"mixed key tags on one axis: {tag} and {t}")
    return tag


def empty_store():
    return ()


def store_from_keys(keys, tag: str | None):
    """Sorted-unique canonical storage for an axis."""
    if tag is None or len(keys) == 0:
        return ()
    if tag == TAG_STR:
        return tuple(sorted(set(keys)))
    arr = np.unique(np.asarray(keys, dtype=_NUMERIC_DTYPE[tag]))
    arr.flags.writeable = False
    return arr


def store_len(store) -> int:
    return len(store)


def store_tag(store) -> str | None:
    if len(store) == 0:
        return None
    if isinstance(store, tuple):
        return TAG_STR
    return TAG_INT if store.dtype == np.int64 else TAG_FLOAT


def store_take(store, idx: np.ndarray):
    """Sub-store at sorted rank positions ``idx``."""
    if isinstance(store, tuple):
        return tuple(store[i] for i in idx)
    sub = store[idx]
    sub.flags.writeable = False
    return sub


def store_keys(store) -> list:
    """Keys as plain Python scalars, in sorted order."""
    if isinstance(store, tuple):
        return list(store)
    return [normalize_key(k) for k in store]


def ranks_of(store, keys, tag: str) -> np.ndarray:
    """Rank of each key in ``keys`` within ``store``; all must be present."""
    if tag == TAG_STR:
        pos = {k: i for i, k in enumerate(store)}
        return np.fromiter((pos[k] for k in keys), dtype=np.int64, count=len(keys))
    arr = np.asarray(keys, dtype=_NUMERIC_DTYPE[tag])
    return np.searchsorted(np.asarray(store), arr).astype(np.int64)


def member_mask(store, keys) -> np.ndarray:
    """Boolean mask over store ranks marking membership in ``keys``.

    Keys whose tag differs from the store's tag simply never match.
    """
    n = store_len(store)
    mask = np.zeros(n, dtype=bool)
    if n == 0 or len(keys) == 0:
        return mask
    tag = store_tag(store)
    if isinstance(store, tuple):
        wanted = {k for k in keys if key_tag(k) == TAG_STR}
        for i, k in enumerate(store):
            if k in wanted:
                mask[i] = True
        return mask
    same = [k for k in keys if key_tag(k) == tag]
    if same:
        arr = np.asarray(same, dtype=_NUMERIC_DTYPE[tag])
        idx = np.searchsorted(np.asarray(store), arr)
        ok = (idx < n) & (np.asarray(store)[np.minimum(idx, n - 1)] == arr)
        mask[idx[ok]] = True
    return mask


def union_stores(a, b):
    """Union store plus rank maps from each input store into the union.

    Returns ``(store, map_a, map_b)`` where ``map_a[r]`` is the union rank
    of input rank ``r``.  Tags must agree (unless one side is empty).
    """
    ta, tb = store_tag(a), store_tag(b)
    if ta is not None and tb is not None and ta != tb:
        raise KeyTagError(f"cannot combine {ta} keys with {tb} keys on one axis")
    tag = ta or tb
    if tag is None:
        return (), np.empty(0, np.int64), np.empty(0, np.int64)
    if tag == TAG_STR:
        u = tuple(sorted(set(a) | set(b)))
        pos = {k: i for i, k in enumerate(u)}
        map_a = np.fromiter((pos[k] for k in a), dtype=np.int64, count=len(a))
        map_b = np.fromiter((pos[k] for k in b), dtype=np.int64, count=len(b))
        return u, map_a, map_b
    aa = np.asarray(a, dtype=_NUMERIC_DTYPE[tag]) if len(a) else np.empty(0, _NUMERIC_DTYPE[tag])
    bb = np.asarray(b, dtype=_NUMERIC_DTYPE[tag]) if len(b) else np.empty(0, _NUMERIC_DTYPE[tag])
    u = np.union1d(aa, bb)
    u.flags.writeable = False
    return u, np.searchsorted(u, aa).astype(np.int64), np.searchsorted(u, bb).astype(np.int64)


def intersect_stores(a, b):
    """Shared-key store plus rank maps; unmatched ranks map to -1.

    Differing tags yield an empty intersection (exact key equality only,
    no coercion between integer and real keys).
    """
    ta, tb = store_tag(a), store_tag(b)
    if ta is None or tb is None or ta != tb:
        return (), np.full(store_len(a), -1, np.int64), np.full(store_len(b), -1, np.int64)
    map_a = np.full(store_len(a), -1, np.int64)
    map_b = np.full(store_len(b), -1, np.int64)
    if ta == TAG_STR:
        shared = tuple(sorted(set(a) & set(b)))
        pos = {k: i for i, k in enumerate(shared)}
        for i, k in enumerate(a):
            r = pos.get(k)
            if r is not None:
                map_a[i] = r
        for i, k in enumerate(b):
            r = pos.get(k)
            if r is not None:
                map_b[i] = r
        return shared, map_a, map_b
    shared, ia, ib = np.intersect1d(np.asarray(a), np.asarray(b), assume_unique=True, return_indices=True)
    shared.flags.writeable = False
    map_a[ia] = np.arange(shared.size, dtype=np.int64)
    map_b[ib] = np.arange(shared.size, dtype=np.int64)
    return shared, map_a, map_b


def stores_equal(a, b) -> bool:
    if isinstance(a, tuple) or isinstance(b, tuple):
        return isinstance(a, tuple) and isinstance(b, tuple) and a == b
    return bool(a.dtype == b.dtype and np.array_equal(a, b))

"""Scalar value helpers: tags, canonical comparison forms, non-stored tests.

Values are tagged scalars: boolean, 64-bit integer, 64-bit float, or
string.  For comparisons (row equivalence, grouping, the equality
multiplication) values are canonicalized to a ``(kind, value)`` pair so
that integers and reals compare by numeric value while booleans, numbers,
and strings never compare equal across kinds.
"""

from __future__ import annotations

import numpy as np

from .errors import CarrierError

TAG_BOOL = "bool"
TAG_INT = "int"
TAG_FLOAT = "float"
TAG_STR = "str"
TAG_MIXED = "mixed"


def kind_of(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return TAG_BOOL
    if isinstance(v, (int, np.integer)):
        return TAG_INT
    if isinstance(v, (float, np.floating)):
        return TAG_FLOAT
    if isinstance(v, str):
        return TAG_STR
    raise CarrierError(f"unsupported value type {type(v).__name__}")


def to_python(v):
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, np.str_):
        return str(v)
    return v


def canon(v):
    """Comparison form: numerics share one kind, bool and str are distinct."""
    k = kind_of(v)
    if k == TAG_BOOL:
        return ("b", bool(v))
    if k == TAG_STR:
        return ("s", str(v))
    return ("n", to_python(v))


def values_equal(a, b) -> bool:
    """Type-aware equality; values of different kinds are never equal."""
    return canon(a) == canon(b)


_NONSTORED = {TAG_BOOL: False, TAG_INT: 0, TAG_FLOAT: 0.0, TAG_STR: ""}


def nonstored_for(tag: str):
    """Conventional non-stored element for a value tag."""
    return _NONSTORED[tag]


def is_nonstored(v) -> bool:
    """True when ``v`` is the conventional non-stored element of its kind."""
    if v is None:
        return True
    k = kind_of(v)
    if k == TAG_STR:
        return v == ""
    if k == TAG_BOOL:
        return not v
    return v == 0

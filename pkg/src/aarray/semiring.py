"""Semirings: the value algebra that parameterizes every array operation.

A semiring bundles a carrier of values with an addition, a multiplication,
the additive identity (which doubles as the multiplicative annihilator and
is the non-stored element of sparse arrays), and the multiplicative
identity.  Five instances are registered:

======================  =============  =============  =========  ====
name                    plus           times          zero       one
======================  =============  =============  =========  ====
``plus-times``          ``+``          ``*``          ``0``      ``1``
``max-plus``            ``max``        ``+``          ``-inf``   ``0``
``min-plus``            ``min``        ``+``          ``+inf``   ``0``
``and-or``              logical or     logical and    ``False``  ``True``
``and-eq``              logical and    equality test  ``False``  ``True``
======================  =============  =============  =========  ====

``and-eq`` is the row-comparison pairing: its multiplication compares two
values of any kind (mixed kinds compare unequal rather than erroring) and
its addition conjoins the resulting booleans.  It does not satisfy the
semiring identity/annihilator/distributivity laws and is therefore marked
``lawful=False``; the law suites run over the other four.

The tropical infinities are sentinels: they are the non-stored element and
never appear inside an array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _values
from .backend import OP_ADD, OP_EQ, OP_MAX, OP_MIN, OP_MUL
from .errors import CapabilityError, CarrierError, RegistryError

_NUMERIC = frozenset((_values.TAG_INT, _values.TAG_FLOAT))
_BOOLEAN = frozenset((_values.TAG_BOOL,))
_ANY = frozenset((_values.TAG_BOOL, _values.TAG_INT, _values.TAG_FLOAT, _values.TAG_STR, _values.TAG_MIXED))


@dataclass(frozen=True)
class Semiring:
    """Value carrier plus (plus, times, zero, one) and optional inverses.

    ``plus_code``/``times_code`` are kernel opcodes when the operation is
    one of the vectorizable primitives; ``None`` routes arrays through the
    generic scalar lane.  ``times_result_tag`` is the value tag produced by
    ``times`` (``None`` means the operand tag is preserved, as for ordinary
    arithmetic; the equality test of ``and-eq`` always produces booleans).
    """

    name: str
    plus: Callable
    times: Callable
    zero: object
    one: object
    has_plus_inverse: bool = False
    has_times_inverse: bool = False
    value_kind: str = "numeric"  # numeric | boolean | string-capable
    accepts: frozenset = field(default=_NUMERIC)
    plus_code: int | None = None
    times_code: int | None = None
    times_result_tag: str | None = None
    #: tags the addition itself can combine; None means every accepted tag.
    #: and-eq conjoins booleans only, even though its equality test takes
    #: any carrier, so combining raw numeric inputs with it is an error.
    plus_input_tags: frozenset | None = None
    lawful: bool = True
    neg: Callable | None = None

    def check_value(self, v) -> None:
        """Raise :class:`CarrierError` unless ``v`` is in the carrier."""
        kind = _values.kind_of(v)
        if kind not in self.accepts:
            raise CarrierError(f"{kind} value {v!r} is outside the {self.name} carrier")

    def accepts_tag(self, tag: str | None) -> bool:
        return tag is None or tag in self.accepts

    def plus_combines_tag(self, tag: str | None) -> bool:
        if self.plus_input_tags is None:
            return self.accepts_tag(tag)
        return tag is None or tag in self.plus_input_tags

    def __repr__(self) -> str:
        return f"Semiring({self.name!r})"


def _check_pair(s: Semiring, v, w) -> None:
    s.check_value(v)
    s.check_value(w)


def sr_plus(s: Semiring, v, w):
    """``v (+) w`` under semiring ``s``; operands must be in the carrier."""
    _check_pair(s, v, w)
    return s.plus(v, w)


def sr_times(s: Semiring, v, w):
    """``v (*) w`` under semiring ``s``."""
    _check_pair(s, v, w)
    return s.times(v, w)


def sr_neg(s: Semiring, v):
    """Additive inverse of ``v``; requires ``s.has_plus_inverse``."""
    if not s.has_plus_inverse:
        raise CapabilityError(f"semiring {s.name} has no additive inverse")
    s.check_value(v)
    return s.neg(v)


def _num(v):
    # numpy scalars leak into user callables otherwise
    return _values.to_python(v)


def _bool_and(v, w):
    if not isinstance(v, (bool, np.bool_)) or not isinstance(w, (bool, np.bool_)):
        raise CarrierError("and-eq addition combines booleans")
    return bool(v) and bool(w)


_REGISTRY: dict[str, Semiring] = {}


def _register(s: Semiring) -> Semiring:
    _REGISTRY[s.name] = s
    return s


PLUS_TIMES = _register(
    Semiring(
        name="plus-times",
        plus=lambda v, w: _num(v) + _num(w),
        times=lambda v, w: _num(v) * _num(w),
        zero=0,
        one=1,
        has_plus_inverse=True,
        has_times_inverse=True,
        value_kind="numeric",
        accepts=_NUMERIC,
        plus_code=OP_ADD,
        times_code=OP_MUL,
        neg=lambda v: -_num(v),
    )
)

MAX_PLUS = _register(
    Semiring(
        name="max-plus",
        plus=lambda v, w: max(_num(v), _num(w)),
        times=lambda v, w: _num(v) + _num(w),
        zero=-math.inf,
        one=0,
        value_kind="numeric",
        accepts=_NUMERIC,
        plus_code=OP_MAX,
        times_code=OP_ADD,
    )
)

MIN_PLUS = _register(
    Semiring(
        name="min-plus",
        plus=lambda v, w: min(_num(v), _num(w)),
        times=lambda v, w: _num(v) + _num(w),
        zero=math.inf,
        one=0,
        value_kind="numeric",
        accepts=_NUMERIC,
        plus_code=OP_MIN,
        times_code=OP_ADD,
    )
)

AND_OR = _register(
    Semiring(
        name="and-or",
        plus=lambda v, w: bool(v) or bool(w),
        times=lambda v, w: bool(v) and bool(w),
        zero=False,
        one=True,
        value_kind="boolean",
        accepts=_BOOLEAN,
        plus_code=OP_MAX,
        times_code=OP_MIN,
    )
)

AND_EQ = _register(
    Semiring(
        name="and-eq",
        plus=_bool_and,
        times=_values.values_equal,
        zero=False,
        one=True,
        value_kind="string-capable",
        accepts=_ANY,
        plus_code=OP_MIN,
        times_code=OP_EQ,
        times_result_tag=_values.TAG_BOOL,
        plus_input_tags=_BOOLEAN,
        lawful=False,
    )
)

#: Semirings that satisfy the full semiring laws (see module docstring for
#: why ``and-eq`` is excluded).
LAWFUL_SEMIRINGS = ("plus-times", "max-plus", "min-plus", "and-or")


def get_semiring(name: str) -> Semiring:
    """Look up a registered semiring by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        known = ", ".join(sorted(_REGISTRY))
        raise RegistryError(f"unknown semiring {name!r} (registered: {known})") from None


def registered_semirings() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))

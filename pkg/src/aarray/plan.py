"""Expression trees over arrays and the relational operations.

A :class:`Plan` is an immutable tree; leaves hold concrete arrays (or only
size statistics, for cost-model work), interior nodes name an operation
and its parameters.  Leaf statistics are exact; anything derived for an
interior node is an estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .core import (
    AssociativeArray,
    ArrayStats,
    array_mult,
    ew_add,
    ew_mult,
    stats,
    transpose,
)
from .errors import ArrayError
from .semiring import Semiring
from . import relational

LEAF = "leaf"

ARRAY_OPS = ("ew_add", "ew_mult", "array_mult", "transpose")
RELATIONAL_OPS = (
    "project",
    "rename",
    "union",
    "intersection",
    "difference",
    "select",
    "theta_join",
    "extended_projection",
    "aggregate",
)
KINDS = (LEAF,) + ARRAY_OPS + RELATIONAL_OPS


@dataclass(frozen=True, eq=False)
class Plan:
    """One node of an expression tree.  Treat ``params`` as immutable.

    The two trailing fields are lazily computed caches (immutability makes
    them safe); rewrites share subtrees, so cached signatures and size
    estimates make neighbor enumeration cheap.
    """

    kind: str
    children: tuple["Plan", ...] = ()
    params: Mapping = field(default_factory=dict)
    _sig: object = field(default=None, compare=False, repr=False)
    _est: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArrayError(f"unknown plan node kind {self.kind!r}")

    def __repr__(self) -> str:
        if self.kind == LEAF:
            a = self.params.get("array")
            return f"Leaf({a!r})" if a is not None else f"Leaf(stats={self.params.get('stats')!r})"
        return f"{self.kind}({', '.join(map(repr, self.children))})"


def leaf(array: AssociativeArray) -> Plan:
    return Plan(LEAF, (), {"array": array})


def leaf_stats(st: ArrayStats) -> Plan:
    """A leaf known only by its statistics; usable for costing, not evaluation."""
    return Plan(LEAF, (), {"stats": st})


def node(kind: str, *children: Plan, **params) -> Plan:
    return Plan(kind, tuple(children), params)


def node_count(p: Plan) -> int:
    return 1 + sum(node_count(c) for c in p.children)


def leaf_count(p: Plan) -> int:
    if p.kind == LEAF:
        return 1
    return sum(leaf_count(c) for c in p.children)


def signature(p: Plan):
    """Structural identity for memoization; leaf arrays compare by object."""
    if p._sig is not None:
        return p._sig
    if p.kind == LEAF:
        sig = (LEAF, id(p.params.get("array")), p.params.get("stats"))
    else:
        items = []
        for k in sorted(p.params):
            v = p.params[k]
            if isinstance(v, Semiring):
                items.append((k, v.name))
            elif isinstance(v, (list, tuple)):
                items.append((k, tuple(v)))
            else:
                items.append((k, id(v) if callable(v) or hasattr(v, "fn") else v))
        sig = (p.kind, tuple(items)) + tuple(signature(c) for c in p.children)
    object.__setattr__(p, "_sig", sig)
    return sig


def plans_equal(p: Plan, q: Plan) -> bool:
    return signature(p) == signature(q)


def leaf_array(p: Plan) -> AssociativeArray:
    a = p.params.get("array")
    if a is None:
        raise ArrayError("leaf carries statistics only; it cannot be evaluated")
    return a


def leaf_statistics(p: Plan) -> ArrayStats:
    a = p.params.get("array")
    if a is not None:
        return stats(a)
    st = p.params.get("stats")
    if st is None:
        raise ArrayError("leaf has neither an array nor statistics")
    return st


def evaluate(p: Plan) -> AssociativeArray:
    """Evaluate the tree bottom-up into one array."""
    if p.kind == LEAF:
        return leaf_array(p)
    ch = [evaluate(c) for c in p.children]
    pr = p.params
    if p.kind == "ew_add":
        return ew_add(ch[0], ch[1], pr["semiring"])
    if p.kind == "ew_mult":
        return ew_mult(ch[0], ch[1], pr["semiring"])
    if p.kind == "array_mult":
        return array_mult(ch[0], ch[1], pr["semiring"])
    if p.kind == "transpose":
        return transpose(ch[0])
    if p.kind == "project":
        return relational.project(ch[0], pr["cols"])
    if p.kind == "rename":
        return relational.rename(ch[0], pr["cols"], pr["new_cols"])
    if p.kind == "union":
        return relational.union(ch[0], ch[1])
    if p.kind == "intersection":
        return relational.intersection(ch[0], ch[1])
    if p.kind == "difference":
        return relational.difference(ch[0], ch[1])
    if p.kind == "select":
        return relational.select(ch[0], pr["cols"], pr["phi"])
    if p.kind == "theta_join":
        if pr.get("variant", "pairs") == "pairs":
            return relational.theta_join_pairs(ch[0], ch[1], pr["a_cols"], pr["b_cols"], pr["theta"])
        return relational.theta_join(ch[0], ch[1], pr["a_cols"], pr["b_cols"], pr["theta"], pr.get("semiring", relational.PLUS_TIMES))
    if p.kind == "extended_projection":
        return relational.extended_projection(ch[0], pr["cols"], pr["out_col"], pr["phi"])
    if p.kind == "aggregate":
        return relational.aggregate(ch[0], pr["group_col"], pr["value_col"], pr["f"])
    raise ArrayError(f"unknown plan node kind {p.kind!r}")

"""Semiring-generic sparse associative arrays.

Sorted sparse arrays over arbitrary totally ordered keys, parameterized by
a semiring; a relational layer (project, rename, union, intersection,
difference, select, theta join, extended projection, aggregation) built
purely from the array operations; a plan rewriter driven by the identity,
annihilator, commutativity, associativity, and distributivity properties
of those operations; and deterministic generators plus TSV formats for
reproducible benchmarking.
"""

from .backend import active_backend, set_backend
from .core import (
    ArrayStats,
    AssociativeArray,
    array_mult,
    build_table,
    construct,
    empty_array,
    equal_approx,
    equal_exact,
    ew_add,
    ew_mult,
    identity_array,
    nonzero_rows,
    select_sub,
    stats,
    transpose,
    validate,
)
from .errors import (
    ArrayError,
    BackendError,
    CapabilityError,
    CarrierError,
    ContractError,
    FormatError,
    KeyTagError,
    MismatchError,
    RegistryError,
    ScriptError,
)
from .io import (
    Rng,
    random_array,
    random_relation,
    read_table,
    read_triples,
    write_table,
    write_triples,
)
from .plan import Plan, evaluate, leaf, leaf_stats, node, node_count
from .relational import (
    Aggregator,
    ExtendFn,
    Relation,
    RowPairPredicate,
    RowPredicate,
    aggregate,
    compare_predicate,
    difference,
    equiv_perm,
    equivalent,
    extended_projection,
    intersection,
    make_extend,
    pair_compare,
    project,
    rename,
    row_items,
    select,
    theta_join,
    theta_join_pairs,
    theta_perm,
    union,
)
from .rewrite import PROPERTIES, PropertyReport, check_property, estimate_cost, reorder, simplify
from .semiring import LAWFUL_SEMIRINGS, Semiring, get_semiring, registered_semirings, sr_neg, sr_plus, sr_times

__version__ = "0.1.0"

__all__ = [
    "Aggregator",
    "ArrayError",
    "ArrayStats",
    "AssociativeArray",
    "BackendError",
    "CapabilityError",
    "CarrierError",
    "ContractError",
    "ExtendFn",
    "FormatError",
    "KeyTagError",
    "LAWFUL_SEMIRINGS",
    "MismatchError",
    "PROPERTIES",
    "Plan",
    "PropertyReport",
    "RegistryError",
    "Relation",
    "Rng",
    "RowPairPredicate",
    "RowPredicate",
    "ScriptError",
    "Semiring",
    "active_backend",
    "aggregate",
    "array_mult",
    "build_table",
    "check_property",
    "compare_predicate",
    "construct",
    "difference",
    "empty_array",
    "equal_approx",
    "equal_exact",
    "equiv_perm",
    "equivalent",
    "estimate_cost",
    "evaluate",
    "ew_add",
    "ew_mult",
    "extended_projection",
    "get_semiring",
    "identity_array",
    "intersection",
    "leaf",
    "leaf_stats",
    "make_extend",
    "node",
    "node_count",
    "nonzero_rows",
    "pair_compare",
    "project",
    "random_array",
    "random_relation",
    "read_table",
    "read_triples",
    "registered_semirings",
    "rename",
    "reorder",
    "row_items",
    "select",
    "select_sub",
    "set_backend",
    "simplify",
    "sr_neg",
    "sr_plus",
    "sr_times",
    "stats",
    "theta_join",
    "theta_join_pairs",
    "theta_perm",
    "transpose",
    "union",
    "validate",
    "write_table",
    "write_triples",
]

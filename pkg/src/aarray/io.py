"""Deterministic generation and bit-exact file formats.

Two tab-separated formats, both UTF-8 with LF line endings:

* triple files: header ``row<TAB>col<TAB>val``, one stored entry per line;
* table files: first line is an empty cell followed by the column keys,
  each further line a row key followed by the cell values, with an empty
  cell meaning "not stored".

Cells parse as integers or floats when the full text is a plain numeric
literal (no underscores, infinities, or NaN), as booleans for the exact
texts ``true``/``false``, and as strings otherwise; ``2013-05-30`` and
``5:14`` therefore stay strings.  A key axis that would come out mixed is
repaired deterministically: integer plus real keys all become real, any
string key makes the whole axis strings.  Tabs and newlines inside keys or
values are errors, not escaped.

Randomness is SplitMix64, chosen because the recurrence is trivially
portable and the counter form vectorizes: the i-th state is
``seed + i * 0x9E3779B97F4A7C15`` (mod 2^64) pushed through the mix, which
is bit-identical to stepping the generator i times.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np

from . import _keys, _values, backend
from .core import (
    AssociativeArray,
    _encode,
    _finalize_codes,
    build_table,
    construct,
    empty_array,
)
from .errors import FormatError, RegistryError
from .semiring import PLUS_TIMES

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Rng:
    """SplitMix64 stream; identical seeds yield identical streams everywhere."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        return self.next_u64() % n

    def next_unit(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def stream(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as uint64, advancing the state.

        Vectorized counter form of the same recurrence; bit-identical to
        ``[self.next_u64() for _ in range(count)]``.
        """
        with np.errstate(over="ignore"):
            states = np.uint64(self._state) + np.arange(1, count + 1, dtype=np.uint64) * np.uint64(_GOLDEN)
            z = states
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * _GOLDEN) & _MASK
        return z


# ---------------------------------------------------------------------------
# random generation


def random_array(n: int, d: float, seed: int, values: str = "ones") -> AssociativeArray:
    """Random sparse array over integer keys 1..n with ~d entries per row.

    Draws ``round(n*d)`` positions with rows and columns uniform over
    ``{1..n}`` (interleaved row/column draws, then value draws), combining
    duplicate positions by addition.  ``values`` is ``ones`` (constant 1),
    ``ints`` (uniform 1..9), or ``floats`` (uniform [0.5, 1.5)).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    count = int(round(n * d))
    if count == 0:
        return empty_array()
    rng = Rng(seed)
    pos = rng.stream(2 * count)
    rows = (pos[0::2] % np.uint64(n)).astype(np.int64) + 1
    cols = (pos[1::2] % np.uint64(n)).astype(np.int64) + 1
    if values == "ones":
        vals = np.ones(count, np.int64)
        tag = _values.TAG_INT
    elif values == "ints":
        vals = (rng.stream(count) % np.uint64(9)).astype(np.int64) + 1
        tag = _values.TAG_INT
    elif values == "floats":
        vals = (rng.stream(count) >> np.uint64(11)) * 2.0**-53 + 0.5
        tag = _values.TAG_FLOAT
    else:
        raise RegistryError(f"unknown value distribution {values!r}")
    row_store = np.unique(rows)
    col_store = np.unique(cols)
    row_store.flags.writeable = False
    col_store.flags.writeable = False
    codes = _encode(np.searchsorted(row_store, rows), np.searchsorted(col_store, cols))
    codes, out = backend.kernels().coalesce(codes, vals, backend.OP_ADD)
    # values are positive, so no sums cancel to the non-stored element
    return _finalize_codes(row_store, col_store, codes, out, tag)


def random_relation(seed: int, max_rows: int = 64, max_cols: int = 6, value_kind: str = "str") -> AssociativeArray:
    """Random relation with string row keys and columns drawn from c1..c6.

    Cells are present with probability 0.85; values come from a small
    string pool or from 1..9 for ``value_kind='int'``.
    """
    rng = Rng(seed)
    ncols = 1 + rng.next_below(max_cols)
    cols = [f"c{i + 1}" for i in range(ncols)]
    nrows = 1 + rng.next_below(max_rows)
    pool = ("red", "blue", "green", "gold", "violet", "x")
    i_out: list = []
    j_out: list = []
    v_out: list = []
    for r in range(nrows):
        key = f"r{r:03d}"
        for c in cols:
            if rng.next_below(100) >= 85:
                continue
            if value_kind == "int":
                v = 1 + rng.next_below(9)
            else:
                v = pool[rng.next_below(len(pool))]
            i_out.append(key)
            j_out.append(c)
            v_out.append(v)
    return build_table(i_out, j_out, v_out)


# ---------------------------------------------------------------------------
# scalar text forms


def _digits(s: str) -> bool:
    return bool(s) and s.isascii() and s.isdigit()


def parse_scalar(text: str):
    """Numeric when fully numeric, boolean for true/false, else string."""
    if text == "true":
        return True
    if text == "false":
        return False
    stripped = text[1:] if text[:1] in "+-" else text
    if _digits(stripped):
        return int(text)
    if stripped and _is_float_literal(stripped):
        return float(text)
    return text


def _is_float_literal(s: str) -> bool:
    mantissa, _, exponent = s.partition("e") if "e" in s else s.partition("E")
    if exponent:
        exp = exponent[1:] if exponent[:1] in "+-" else exponent
        if not _digits(exp):
            return False
    head, dot, tail = mantissa.partition(".")
    if not dot and not exponent:
        return False
    if not (_digits(head) or _digits(tail)):
        return False
    return (head == "" or _digits(head)) and (tail == "" or _digits(tail))


def format_scalar(v) -> str:
    kind = _values.kind_of(v)
    if kind == _values.TAG_BOOL:
        return "true" if v else "false"
    if kind == _values.TAG_INT:
        return str(int(v))
    if kind == _values.TAG_FLOAT:
        return repr(float(v))
    if "\t" in v or "\n" in v:
        raise FormatError(f"tabs and newlines are not allowed in fields: {v!r}")
    return v


def _repair_axis(texts: list[str]) -> list:
    """Parse key texts, repairing a mixed axis deterministically."""
    parsed = [parse_scalar(t) for t in texts]
    # booleans make no sense as keys; treat their text form as strings
    parsed = [t if isinstance(p, bool) else p for p, t in zip(parsed, texts)]
    tags = {_keys.key_tag(k) for k in parsed}
    if len(tags) <= 1:
        return parsed
    if tags == {_keys.TAG_INT, _keys.TAG_FLOAT}:
        return [float(k) for k in parsed]
    return list(texts)


# ---------------------------------------------------------------------------
# triple files


_TRIPLE_HEADER = "row\tcol\tval"


def read_triples(path) -> AssociativeArray:
    """Read a triple file.

    Duplicate positions combine by addition for numeric values; for other
    carriers the last triple wins and a warning is issued.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != _TRIPLE_HEADER:
        raise FormatError(f"{path}: missing '{_TRIPLE_HEADER}' header")
    row_texts: list[str] = []
    col_texts: list[str] = []
    val_texts: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        row_texts.append(fields[0])
        col_texts.append(fields[1])
        val_texts.append(fields[2])
    if not row_texts:
        return empty_array()
    rows = _repair_axis(row_texts)
    cols = _repair_axis(col_texts)
    vals = [parse_scalar(t) for t in val_texts]
    numeric = all(_values.kind_of(v) in (_values.TAG_INT, _values.TAG_FLOAT) for v in vals)
    if numeric:
        return construct(rows, cols, vals, PLUS_TIMES)
    if len({(r, c) for r, c in zip(rows, cols)}) != len(rows):
        warnings.warn(f"{path}: duplicate positions in non-numeric triples; last value wins", stacklevel=2)
    return build_table(rows, cols, vals, combine=lambda old, new: new)


def dumps_triples(a: AssociativeArray) -> str:
    lines = [_TRIPLE_HEADER]
    for r, c, v in a.triples():
        lines.append(f"{format_scalar(r)}\t{format_scalar(c)}\t{format_scalar(v)}")
    return "\n".join(lines) + "\n"


def write_triples(a: AssociativeArray, path) -> None:
    Path(path).write_text(dumps_triples(a), encoding="utf-8")


# ---------------------------------------------------------------------------
# table files


def read_table(path) -> AssociativeArray:
    """Read a table file; empty cells are not stored."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(f"{path}: empty file")
    header = lines[0].split("\t")
    if header[0] != "":
        raise FormatError(f"{path}: header must start with an empty cell")
    col_texts = header[1:]
    if len(set(col_texts)) != len(col_texts):
        raise FormatError(f"{path}: duplicate column keys")
    row_texts: list[str] = []
    grid: list[list[str]] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(col_texts) + 1:
            raise FormatError(f"{path}:{lineno}: expected {len(col_texts) + 1} cells, got {len(cells)}")
        row_texts.append(cells[0])
        grid.append(cells[1:])
    if len(set(row_texts)) != len(row_texts):
        raise FormatError(f"{path}: duplicate row keys")
    if not row_texts or not col_texts:
        return empty_array()
    rows = _repair_axis(row_texts)
    cols = _repair_axis(col_texts)
    # texts can collide after parsing ("1" and "01" are the same integer)
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        raise FormatError(f"{path}: keys collide after numeric parsing")
    i_out: list = []
    j_out: list = []
    v_out: list = []
    for r, line in zip(rows, grid):
        for c, cell in zip(cols, line):
            if cell == "":
                continue
            i_out.append(r)
            j_out.append(c)
            v_out.append(parse_scalar(cell))
    return build_table(i_out, j_out, v_out)


def dumps_table(a: AssociativeArray) -> str:
    cols = a.col_keys
    lines = ["\t".join([""] + [format_scalar(c) for c in cols])]
    cells = a.entries_dict()
    for r in a.row_keys:
        row = [format_scalar(r)]
        for c in cols:
            v = cells.get((r, c))
            row.append("" if v is None else format_scalar(v))
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def write_table(a: AssociativeArray, path) -> None:
    Path(path).write_text(dumps_table(a), encoding="utf-8")

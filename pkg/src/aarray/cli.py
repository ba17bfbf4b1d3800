"""Command-line interface.

Subcommands:

* ``query``   run a line-oriented relational script over table files and
              print emitted tables to standard output;
* ``check``   run algebraic-property suites and print a one-line report
              per property (exit 2 when any property fails);
* ``bench``   reproduce the distributivity/associativity timing sweeps as
              CSV, validating result equality before timing;
* ``bench-backends``  compare the numba and pure-numpy kernel lanes.

Exit codes: 0 success, 1 usage error, 2 property or validation failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, relational, rewrite
from .errors import ArrayError, ContractError, MismatchError, ScriptError
from .io import dumps_table, parse_scalar, read_table
from .semiring import get_semiring

QUERY_COMMANDS = (
    "LOAD",
    "PROJECT",
    "RENAME",
    "UNION",
    "INTERSECT",
    "EXCEPT",
    "SELECT",
    "JOIN",
    "EXTEND",
    "AGG",
    "EMIT",
)


class QueryRunner:
    """Executes query scripts: one command per line, ``#`` comments allowed.

    Tables live in a namespace of names bound by LOAD lines or by
    ``name=path`` command-line arguments.  JOIN uses the pair-expanded
    join (one output row per matching pair).
    """

    def __init__(self, out=None):
        self.tables: dict[str, object] = {}
        self.out = out if out is not None else sys.stdout

    def bind(self, name: str, array) -> None:
        self.tables[name] = array

    def _get(self, name: str, lineno: int):
        try:
            return self.tables[name]
        except KeyError:
            raise ScriptError(f"line {lineno}: unknown table {name!r}") from None

    def run_script(self, text: str, base_dir: Path | None = None) -> None:
        for lineno, raw in enumerate(text.split("\n"), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            self._run_line(line, lineno, base_dir)

    def _run_line(self, line: str, lineno: int, base_dir: Path | None) -> None:
        tokens = line.split()
        cmd = tokens[0]

        def need(count: int) -> list[str]:
            if len(tokens) != count + 1:
                raise ScriptError(f"line {lineno}: {cmd} takes {count} arguments, got {len(tokens) - 1}")
            return tokens[1:]

        if cmd == "LOAD":
            name, file = need(2)
            path = Path(file)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            self.tables[name] = read_table(path)
        elif cmd == "PROJECT":
            out, src, cols = need(3)
            self.tables[out] = relational.project(self._get(src, lineno), _cols(cols))
        elif cmd == "RENAME":
            out, src, pairs = need(3)
            old, new = _rename_pairs(pairs, lineno)
            self.tables[out] = relational.rename(self._get(src, lineno), old, new)
        elif cmd == "UNION":
            out, a, b = need(3)
            self.tables[out] = relational.union(self._get(a, lineno), self._get(b, lineno))
        elif cmd == "INTERSECT":
            out, a, b = need(3)
            self.tables[out] = relational.intersection(self._get(a, lineno), self._get(b, lineno))
        elif cmd == "EXCEPT":
            out, a, b = need(3)
            self.tables[out] = relational.difference(self._get(a, lineno), self._get(b, lineno))
        elif cmd == "SELECT":
            out, src, col, op, literal = need(5)
            column = parse_scalar(col)
            phi = relational.compare_predicate(column, op, parse_scalar(literal))
            self.tables[out] = relational.select(self._get(src, lineno), [column], phi)
        elif cmd == "JOIN":
            out, a, b, acol, op, bcol = need(6)
            a_col, b_col = parse_scalar(acol), parse_scalar(bcol)
            theta = relational.pair_compare(a_col, op, b_col)
            self.tables[out] = relational.theta_join_pairs(
                self._get(a, lineno), self._get(b, lineno), [a_col], [b_col], theta
            )
        elif cmd == "EXTEND":
            out, src, newcol, fn, cols = need(5)
            columns = _cols(cols)
            phi = relational.make_extend(fn, columns)
            self.tables[out] = relational.extended_projection(
                self._get(src, lineno), columns, parse_scalar(newcol), phi
            )
        elif cmd == "AGG":
            out, src, groupcol, valcol, fn = need(5)
            self.tables[out] = relational.aggregate(
                self._get(src, lineno), parse_scalar(groupcol), parse_scalar(valcol), fn
            )
        elif cmd == "EMIT":
            (name,) = need(1)
            self.out.write(dumps_table(self._get(name, lineno)))
        else:
            raise ScriptError(f"line {lineno}: unknown command {cmd!r} (known: {', '.join(QUERY_COMMANDS)})")


def _cols(token: str) -> list:
    return [parse_scalar(t) for t in token.split(",") if t != ""]


def _rename_pairs(token: str, lineno: int) -> tuple[list, list]:
    old: list = []
    new: list = []
    for part in token.split(","):
        if "=" not in part:
            raise ScriptError(f"line {lineno}: RENAME expects col=new pairs, got {part!r}")
        src, dst = part.split("=", 1)
        old.append(parse_scalar(src))
        new.append(parse_scalar(dst))
    return old, new


# ---------------------------------------------------------------------------
# subcommands


def cmd_query(args) -> int:
    runner = QueryRunner()
    script_path = Path(args.script)
    for binding in args.tables:
        if "=" not in binding:
            print(f"table bindings take the form name=path, got {binding!r}", file=sys.stderr)
            return 1
        name, path = binding.split("=", 1)
        runner.bind(name, read_table(path))
    try:
        runner.run_script(script_path.read_text(encoding="utf-8"), base_dir=script_path.parent)
    except ScriptError as exc:
        print(f"{script_path}: {exc}", file=sys.stderr)
        return 1
    except ContractError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    return 0


def cmd_check(args, registry=None) -> int:
    names = list(rewrite.PROPERTIES) if args.properties is None else args.properties.split(",")
    lookup = registry if registry is not None else {}
    try:
        semiring = lookup[args.semiring] if args.semiring in lookup else get_semiring(args.semiring)
        reports = [rewrite.check_property(n, semiring, args.trials, args.seed) for n in names]
    except ArrayError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for report in reports:
        print(report.to_line())
    return 0 if all(r.passed for r in reports) else 2


def cmd_bench(args) -> int:
    sizes = [int(t) for t in args.sizes.split(",")]
    seeds = [int(t) for t in args.seeds.split(",")]
    try:
        rows = bench.sweep(args.mode, args.nA, sizes, args.d, seeds)
    except MismatchError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    csv = bench.rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv, encoding="utf-8")
    else:
        sys.stdout.write(csv)
    return 0


def cmd_bench_backends(args) -> int:
    sizes = [int(t) for t in args.sizes.split(",")]
    try:
        rows = bench.compare_backends(sizes, d=args.d, seed=args.seed)
    except MismatchError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    csv = bench.backend_rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv, encoding="utf-8")
    else:
        sys.stdout.write(csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aarray", description="Associative array algebra toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="run a relational query script over table files")
    q.add_argument("script", help="query script path")
    q.add_argument("tables", nargs="*", help="name=path table bindings loaded before the script runs")

    c = sub.add_parser("check", help="run algebraic property suites")
    c.add_argument("--semiring", default="plus-times")
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--properties", default=None, help="comma-separated property names (default: all)")

    b = sub.add_parser("bench", help="time both orders of a rewrite identity")
    b.add_argument("--mode", choices=bench.MODES, required=True)
    b.add_argument("--nA", type=int, default=1024, help="fixed left-array size (default 1024)")
    b.add_argument("--sizes", default="256,1024,4096,16384", help="comma-separated swept sizes")
    b.add_argument("--d", type=float, default=8, help="mean stored entries per row (default 8)")
    b.add_argument("--seeds", default="1", help="comma-separated seeds")
    b.add_argument("--out", default=None, help="CSV output path (default: standard output)")

    k = sub.add_parser("bench-backends", help="compare the numba and pure-numpy kernel lanes")
    k.add_argument("--sizes", default="1024,4096,16384")
    k.add_argument("--d", type=float, default=8)
    k.add_argument("--seed", type=int, default=1)
    k.add_argument("--out", default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "query":
            return cmd_query(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "bench":
            return cmd_bench(args)
        if args.command == "bench-backends":
            return cmd_bench_backends(args)
    except (ArrayError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 1


def entrypoint() -> None:
    sys.exit(main())

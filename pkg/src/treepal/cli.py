"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed tree, 2 a size guard was
hit (oracle limit or word materialisation), 3 a structural invariant
failed, 64 invalid flags.  Records go to stdout as tab-separated
``length u v [word]`` lines with 1-based node ids; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import sys
import time
from typing import Iterable, TextIO

from .dtree import InvariantError
from .generators import gen_comb, gen_path, gen_random
from .oracle import DEFAULT_LIMIT, OracleLimitError, oracle_all
from .pipeline import PalindromeIndex
from .tree import LabeledTree, PalTriple, TreeFormatError, palindrome_of, parse_tree

EXIT_PARSE = 1
EXIT_GUARD = 2
EXIT_INVARIANT = 3
EXIT_USAGE = 64
DEFAULT_MATERIALIZE = 10_000_000


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class GuardError(RuntimeError):
    pass


def _load(path: str) -> LabeledTree:
    if path == "-":
        return parse_tree(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_tree(fh.read())


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _record(t: PalTriple, word: str | None = None) -> str:
    fields = [str(t.length), str(t.u + 1), str(t.v + 1)]
    if word is not None:
        fields.append(word)
    return "\t".join(fields)


def _write_records(out: TextIO, tree: LabeledTree, triples: Iterable[PalTriple],
                   strings: bool, budget: int) -> None:
    triples = list(triples)
    if strings:
        total = sum(t.length for t in triples)
        if total > budget:
            raise GuardError(f"materialising {total} characters exceeds --max-materialize {budget}")
    for t in triples:
        out.write(_record(t, palindrome_of(tree, t) if strings else None) + "\n")


def _summary(tree: LabeledTree, count: int, stats: dict) -> list[str]:
    n = tree.n_edges
    lines = [f"count\t{count}", f"n\t{n}",
             f"count_per_n15\t{count / max(n, 1) ** 1.5:.6f}"]
    lines += [f"{k}\t{v}" for k, v in stats.items()]
    return lines


def cmd_gen(args) -> int:
    if args.kind == "path":
        tree = gen_path(args.n, args.pattern)
    elif args.kind == "comb":
        tree = gen_comb(args.p)
    else:
        tree = gen_random(args.n, args.sigma, args.seed)
    out = _open_out(args.out)
    try:
        out.write(tree.serialize())
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_report(args) -> int:
    tree = _load(args.file)
    started = time.perf_counter()
    index = PalindromeIndex(tree)
    result = index.report_all()
    elapsed = time.perf_counter() - started
    out = _open_out(args.out)
    try:
        _write_records(out, tree, result, args.strings, args.max_materialize)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.stats:
        stats = dict(result.stats, seconds=f"{elapsed:.3f}")
        print("\n".join(_summary(tree, len(result), stats)), file=sys.stderr)
    return 0


def cmd_count(args) -> int:
    tree = _load(args.file)
    print(len(PalindromeIndex(tree).report_all()))
    return 0


def cmd_test(args) -> int:
    if args.length < 1:
        print("error: --length must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    tree = _load(args.file)
    hit = PalindromeIndex(tree).test(args.length)
    print("false" if hit is None else "true\t" + _record(hit))
    return 0


def cmd_longest(args) -> int:
    tree = _load(args.file)
    length, hit = PalindromeIndex(tree).longest()
    print("0" if hit is None else _record(hit))
    return 0


def cmd_oracle(args) -> int:
    tree = _load(args.file)
    pals = oracle_all(tree, limit=args.limit)
    triples = sorted((pals.triple(w, tree) for w in pals),
                     key=lambda t: (t.length, palindrome_of(tree, t)))
    if args.count:
        print(len(triples))
        return 0
    out = _open_out(args.out)
    try:
        _write_records(out, tree, triples, args.strings, args.max_materialize)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_stats(args) -> int:
    tree = _load(args.file)
    index = PalindromeIndex(tree)
    result = index.report_all()
    checks = index.check_invariants()
    for line in _summary(tree, len(result), {**result.stats, **checks}):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treepal",
                     description="Distinct palindromic substrings of edge-labelled trees.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write a generated tree")
    kinds = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    p = kinds.add_parser("path", help="labelled path")
    p.add_argument("--n", type=int, required=True, help="number of edges")
    p.add_argument("--pattern", default="a", help="labels, repeated along the path")
    c = kinds.add_parser("comb", help="palindrome-rich comb for a prime p >= 5")
    c.add_argument("--p", type=int, required=True)
    r = kinds.add_parser("random", help="random recursive tree")
    r.add_argument("--n", type=int, required=True, help="number of edges")
    r.add_argument("--sigma", type=int, default=2, help="alphabet size")
    r.add_argument("--seed", type=int, default=0)
    for k in (p, c, r):
        k.add_argument("--out", help="output file (default stdout)")
    gen.set_defaults(func=cmd_gen)

    def with_file(name: str, helptext: str) -> argparse.ArgumentParser:
        q = sub.add_parser(name, help=helptext)
        q.add_argument("file", help="tree file, or - for stdin")
        return q

    def with_records(q: argparse.ArgumentParser) -> None:
        q.add_argument("--strings", action="store_true", help="append each palindrome")
        q.add_argument("--max-materialize", type=int, default=DEFAULT_MATERIALIZE,
                       metavar="N", help="character budget for --strings")
        q.add_argument("--out", help="output file (default stdout)")

    rep = with_file("report", "list every distinct palindrome")
    with_records(rep)
    rep.add_argument("--stats", action="store_true", help="summary block on stderr")
    rep.set_defaults(func=cmd_report)

    with_file("count", "number of distinct palindromes").set_defaults(func=cmd_count)

    tst = with_file("test", "is there a palindrome of the given length")
    tst.add_argument("--length", "-k", type=int, required=True)
    tst.set_defaults(func=cmd_test)

    with_file("longest", "longest palindrome").set_defaults(func=cmd_longest)

    orc = with_file("oracle", "brute-force report for small trees")
    with_records(orc)
    orc.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                     help="refuse trees with more edges")
    orc.add_argument("--count", action="store_true", help="print only the count")
    orc.set_defaults(func=cmd_oracle)

    with_file("stats", "structural metrics and invariant checks").set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TreeFormatError, UnicodeDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OracleLimitError, GuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

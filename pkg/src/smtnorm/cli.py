"""Command-line front end.

Exit status: 0 on success, 1 on usage errors, 2 when any input fails to
parse or normalize.  Scripts and CSV go to stdout (or ``--out``); every
diagnostic goes to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from functools import partial
from pathlib import Path

from . import __version__
from .harness import stability_experiment, uniqueness_details, write_stability_csv, write_uniqueness_csv
from .normalizer import AntisymTable, NormalizeOptions, normalize
from .oracle import Graph, OracleLimits, exact_normalize, iso_equivalent
from .scrambler import Op, ScrambleOptions, parse_ops, scramble
from .smtlib import SmtError, parse_script, print_script

log = logging.getLogger("smtnorm")

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_seeds(text: str) -> list:
    """``"1..10"`` (inclusive), ``"1,4,9"`` or a single number."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        seeds = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}") from None
    if not seeds or any(s < 0 for s in seeds):
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}")
    return seeds


def _ops(text: str) -> frozenset:
    try:
        return parse_ops(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive(kind):
    def conv(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="smtnorm", description="Normalize, scramble and evaluate SMT-LIB scripts.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", metavar="PATH", help="write the payload here instead of stdout")
        sp.add_argument("--strict", action="store_true", help="reject '!' annotations instead of dropping them")

    def norm_flags(sp):
        sp.add_argument("--no-antisym", action="store_true", help="skip anti-symmetric operator rewriting")
        sp.add_argument("--keep-unused", action="store_true", help="keep declarations no assertion uses")
        sp.add_argument("--antisym-table", metavar="PATH", help="file of 'representative dual' lines")
        sp.add_argument("--prefix", default="X", help="prefix of generated symbol names (default X)")

    def oracle_flags(sp):
        sp.add_argument("--max-assertions", type=_positive(int), default=7)
        sp.add_argument("--max-comm", type=_positive(int), default=10, help="limit on commutative occurrences")
        sp.add_argument("--enumerate-comm", action="store_true", help="also try commutative operand swaps")

    sp = sub.add_parser("normalize", help="approximate normal form")
    sp.add_argument("files", nargs="+")
    common(sp)
    norm_flags(sp)

    sp = sub.add_parser("scramble", help="seeded semantics-preserving mutation")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ops", type=_ops, default=frozenset(Op), help="comma list of shuffle,rename,commswap,antisym")
    sp.add_argument("--antisym-table", metavar="PATH")
    common(sp)

    sp = sub.add_parser("exact-normalize", help="exact normal form by exhaustive search (small scripts)")
    sp.add_argument("files", nargs="+")
    common(sp)
    norm_flags(sp)
    oracle_flags(sp)

    sp = sub.add_parser("uniqueness", help="distinct normalized outputs over scrambled copies (CSV)")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--seeds", type=parse_seeds, default=list(range(1, 11)))
    sp.add_argument("--ops", type=_ops, default=frozenset({Op.SHUFFLE, Op.RENAME}))
    sp.add_argument("--normalizer", choices=("approx", "exact", "none"), default="approx")
    sp.add_argument("--jobs", type=_positive(int), default=1)
    common(sp)
    norm_flags(sp)
    oracle_flags(sp)

    sp = sub.add_parser("stability", help="run a solver on scrambled copies (CSV)")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--seeds", type=parse_seeds, default=list(range(1, 61)))
    sp.add_argument("--ops", type=_ops, default=frozenset(Op))
    sp.add_argument("--solver-cmd", required=True, metavar="TEMPLATE", help="command with '{}' for the file path")
    sp.add_argument("--timeout", type=_positive(float), default=60.0)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--no-normalize", action="store_true", help="run solvers on the scrambled copies as they are")
    sp.add_argument("--jobs", type=_positive(int), default=1)
    common(sp)
    norm_flags(sp)

    sp = sub.add_parser("iso", help="graph isomorphism through exact normalization")
    sp.add_argument("graphs", nargs=2, metavar="GRAPH")
    sp.add_argument("--out", metavar="PATH")
    sp.add_argument("--max-assertions", type=_positive(int), default=32)
    sp.add_argument("--max-comm", type=_positive(int), default=32)
    return p


def _norm_options(args) -> NormalizeOptions:
    table = AntisymTable.load(args.antisym_table) if getattr(args, "antisym_table", None) else AntisymTable()
    return NormalizeOptions(
        antisym_enabled=not args.no_antisym,
        drop_unused_decls=not args.keep_unused,
        name_prefix=args.prefix,
        antisym_table=table,
    )


def _limits(args) -> OracleLimits:
    return OracleLimits(
        max_assertions=args.max_assertions,
        max_comm_occurrences=args.max_comm,
        enumerate_comm=getattr(args, "enumerate_comm", False),
    )


def _read(path: str, strict: bool = False):
    return parse_script(Path(path).read_text(encoding="utf-8"), strict=strict)


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _report(path, e: Exception) -> None:
    where = f":{e.line}:{e.column}" if getattr(e, "line", None) else ""
    code = getattr(e, "code", type(e).__name__)
    log.error("%s%s: %s: %s", path, where, code, getattr(e, "message", e))


def _per_file(args, transform) -> int:
    status = EXIT_OK
    with _output(args.out) as out:
        for path in args.files:
            try:
                result = transform(_read(path, args.strict))
            except (SmtError, OSError, UnicodeDecodeError, RecursionError) as e:
                _report(path, e)
                status = EXIT_INPUT
                continue
            out.write(print_script(result))
    return status


def _exact(opts, lim, s):
    return exact_normalize(s, lim, opts)


def _identity(s):
    return s


def _uniqueness_job(path, seeds, ops, strict, mode, opts, lim):
    """Worker for one benchmark; returns a CSV row and an error message."""
    try:
        s = _read(path, strict)
        if mode == "approx":
            fn = partial(normalize, opts=opts)
        elif mode == "exact":
            fn = partial(_exact, opts, lim)
        else:
            fn = _identity
        res = uniqueness_details(s, seeds, ops, fn)
    except (SmtError, OSError, UnicodeDecodeError, RecursionError) as e:
        return (path, len(seeds), "error"), f"{path}: {getattr(e, 'code', type(e).__name__)}: {e}"
    msg = f"{path}: seeds {res.failed_seeds} failed" if res.failed_seeds else None
    return (path, len(seeds), res.distinct), msg


def cmd_uniqueness(args) -> int:
    opts, lim = _norm_options(args), _limits(args)
    job = partial(_uniqueness_job, seeds=args.seeds, ops=args.ops, strict=args.strict, mode=args.normalizer, opts=opts, lim=lim)
    if args.jobs > 1 and len(args.files) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(job, args.files))
    else:
        results = [job(f) for f in args.files]
    status = EXIT_OK
    for row, msg in results:
        if msg:
            log.error(msg)
        if row[2] == "error":
            status = EXIT_INPUT
    with _output(args.out) as out:
        write_uniqueness_csv([row for row, _ in results], out)
    return status


def cmd_stability(args) -> int:
    if "{}" not in args.solver_cmd:
        raise UsageError("--solver-cmd needs a '{}' placeholder for the benchmark path")
    opts = _norm_options(args)
    benchmarks, failed = {}, []
    for path in args.files:
        try:
            benchmarks[path] = _read(path, args.strict)
        except (SmtError, OSError, UnicodeDecodeError, RecursionError) as e:
            _report(path, e)
            failed.append(path)
    normalizer = None if args.no_normalize else partial(normalize, opts=opts)
    try:
        rows = stability_experiment(
            benchmarks, args.seeds, args.ops, args.solver_cmd, args.timeout, normalizer, jobs=args.jobs, alpha=args.alpha
        ) if benchmarks else []
    except SmtError as e:
        _report("stability", e)
        return EXIT_INPUT
    by_name = {r.benchmark: r for r in rows}
    out_rows = [by_name[p] if p in by_name else (p, len(args.seeds), 0, "", "", "error") for p in args.files]
    with _output(args.out) as out:
        write_stability_csv(out_rows, out)
    return EXIT_INPUT if failed else EXIT_OK


def cmd_iso(args) -> int:
    try:
        g1, g2 = (Graph.load(p) for p in args.graphs)
    except (OSError, ValueError) as e:
        log.error("%s", e)
        return EXIT_INPUT
    try:
        same = iso_equivalent(g1, g2, OracleLimits(max_assertions=args.max_assertions, max_comm_occurrences=args.max_comm))
    except SmtError as e:
        _report("iso", e)
        return EXIT_INPUT
    with _output(args.out) as out:
        out.write("isomorphic\n" if same else "not-isomorphic\n")
    return EXIT_OK


def _configure_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("smtnorm: %(levelname)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.DEBUG if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)
    inputs = args.graphs if args.command == "iso" else args.files
    missing = [p for p in inputs if not Path(p).is_file()]
    if missing:
        parser.print_usage(sys.stderr)
        print(f"smtnorm: error: no such file: {', '.join(missing)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "normalize":
            opts = _norm_options(args)
            return _per_file(args, partial(normalize, opts=opts))
        if args.command == "scramble":
            table = AntisymTable.load(args.antisym_table) if args.antisym_table else AntisymTable()
            sopts = ScrambleOptions(seed=args.seed, ops=args.ops, antisym_table=table)
            return _per_file(args, partial(scramble, opts=sopts))
        if args.command == "exact-normalize":
            return _per_file(args, partial(_exact, _norm_options(args), _limits(args)))
        if args.command == "uniqueness":
            return cmd_uniqueness(args)
        if args.command == "stability":
            return cmd_stability(args)
        return cmd_iso(args)
    except (UsageError, ValueError, OSError) as e:
        # Bad option values (seed range, prefix, antisym table) surface here.
        print(f"smtnorm: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

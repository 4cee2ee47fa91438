"""Exact normalization by exhaustive search, and the graph encoding that shows
exact normalization is at least as hard as graph isomorphism.

``exact_normalize`` picks, among all orderings of the assertions (and,
optionally, all operand swaps of commutative operators), the one whose
concatenated global pattern is smallest, then renames symbols by that
pattern.  The search is a depth-first enumeration that drops a branch only
when its pattern prefix is already strictly larger than some alternative,
so every minimal candidate is still reached.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from pathlib import Path

from .normalizer import NormalizeOptions, canonicalize_antisymmetric, rename_all
from .smtlib import App, Kind, Let, Quant, Script, SmtError, Sym, flatten_term, parse_script, print_script
from .theory import DEFAULT_COMMUTATIVE


class LimitExceededError(SmtError):
    code = "limit-exceeded"


@dataclass(frozen=True)
class OracleLimits:
    max_assertions: int = 7
    max_comm_occurrences: int = 10
    enumerate_comm: bool = False
    commutative_table: tuple = DEFAULT_COMMUTATIVE

    def __post_init__(self):
        if self.max_assertions <= 0 or self.max_comm_occurrences <= 0:
            raise ValueError("oracle limits must be positive")


def _is_swappable(t, commutative) -> bool:
    return isinstance(t, App) and t.head.kind is Kind.THEORY and t.head.name in commutative and len(t.args) == 2


def count_commutative(t, commutative=DEFAULT_COMMUTATIVE) -> int:
    if isinstance(t, Sym):
        return 0
    if isinstance(t, App):
        return _is_swappable(t, commutative) + sum(count_commutative(a, commutative) for a in t.args)
    if isinstance(t, Let):
        return sum(count_commutative(x, commutative) for _, x in t.bindings) + count_commutative(t.body, commutative)
    return count_commutative(t.body, commutative)


def commutative_variants(t, commutative=DEFAULT_COMMUTATIVE) -> list:
    """Every term obtained by swapping the operands of zero or more binary
    commutative applications, without duplicates, in a fixed order."""
    if isinstance(t, Sym):
        return [t]
    if isinstance(t, App):
        out = []
        for args in itertools.product(*(commutative_variants(a, commutative) for a in t.args)):
            out.append(App(t.head, args))
            if _is_swappable(t, commutative):
                out.append(App(t.head, args[::-1]))
        return list(dict.fromkeys(out))
    if isinstance(t, Let):
        values = [commutative_variants(x, commutative) for _, x in t.bindings]
        out = []
        for combo in itertools.product(*values, commutative_variants(t.body, commutative)):
            bindings = tuple((v, x) for (v, _), x in zip(t.bindings, combo[:-1]))
            out.append(Let(bindings, combo[-1]))
        return list(dict.fromkeys(out))
    return list(dict.fromkeys(Quant(t.quantifier, t.bindings, b) for b in commutative_variants(t.body, commutative)))


def _extend(tokens, numbering: dict) -> tuple:
    """Pattern of ``tokens`` continuing ``numbering``; returns (pattern, new numbering)."""
    out = []
    fresh = None
    for t in tokens:
        if t.kind is Kind.USER:
            k = numbering.get(t.uid)
            if k is None and fresh is not None:
                k = fresh.get(t.uid)
            if k is None:
                if fresh is None:
                    fresh = {}
                k = fresh[t.uid] = f"@{len(numbering) + len(fresh) + 1}"
            out.append(k)
        else:
            out.append(t.name)
    if fresh:
        numbering = {**numbering, **fresh}
    return tuple(out), numbering


def _dominates(d: tuple, c: tuple) -> bool:
    """True if ``d`` is strictly smaller than ``c`` at their first difference
    within the common length, so no continuation of ``c`` can win."""
    for a, b in zip(d, c):
        if a != b:
            return a < b
    return False


def minimal_candidates(s: Script, lim: OracleLimits = OracleLimits()) -> tuple:
    """(minimal concatenated pattern, list of assertion tuples reaching it)."""
    check_limits(s, lim)
    terms = list(s.assertions)
    if lim.enumerate_comm:
        options = [commutative_variants(t, lim.commutative_table) for t in terms]
    else:
        options = [[t] for t in terms]
    options = [[(v, flatten_term(v)) for v in opts] for opts in options]
    first = {}
    rep = [first.setdefault(t, i) for i, t in enumerate(terms)]
    n = len(terms)
    used = [False] * n
    chosen: list = []
    best = [None]
    leaves: list = []

    def search(prefix: tuple, numbering: dict) -> None:
        if len(chosen) == n:
            if best[0] is None or prefix < best[0]:
                best[0] = prefix
                leaves.clear()
            if prefix == best[0]:
                leaves.append(tuple(chosen))
            return
        cands = []
        seen = set()
        for i in range(n):
            if used[i] or rep[i] in seen:
                continue
            seen.add(rep[i])
            for term, toks in options[i]:
                ext, num = _extend(toks, numbering)
                cands.append((ext, i, term, num))
        low = min(c[0] for c in cands)
        cands = [c for c in cands if not _dominates(low, c[0])]
        if len(cands) > 1:
            cands = [c for c in cands if not any(_dominates(d[0], c[0]) for d in cands)]
        for ext, i, term, num in cands:
            nxt = prefix + ext
            if best[0] is not None and nxt > best[0][: len(nxt)]:
                continue
            used[i] = True
            chosen.append(term)
            search(nxt, num)
            chosen.pop()
            used[i] = False

    search((), {})
    return best[0], leaves


def check_limits(s: Script, lim: OracleLimits) -> None:
    if len(s.assertions) > lim.max_assertions:
        raise LimitExceededError(f"{len(s.assertions)} assertions exceed the oracle limit of {lim.max_assertions}")
    if lim.enumerate_comm:
        k = sum(count_commutative(a, lim.commutative_table) for a in s.assertions)
        if k > lim.max_comm_occurrences:
            raise LimitExceededError(f"{k} commutative occurrences exceed the oracle limit of {lim.max_comm_occurrences}")


def exact_outputs(s: Script, lim: OracleLimits = OracleLimits(), opts: NormalizeOptions = NormalizeOptions()) -> dict:
    """Printed output -> renamed script, for every minimal candidate."""
    if opts.antisym_enabled:
        s = canonicalize_antisymmetric(s, opts.antisym_table)
    _, leaves = minimal_candidates(s, lim)
    outputs = {}
    for leaf in leaves:
        out = rename_all(Script(s.header, leaf, s.trailer), opts)
        outputs.setdefault(print_script(out), out)
    return outputs


def exact_normalize(s: Script, lim: OracleLimits = OracleLimits(), opts: NormalizeOptions = NormalizeOptions()) -> Script:
    """Canonical form of ``s`` under assertion shuffling and renaming (plus
    commutative swaps when ``lim.enumerate_comm``).

    Candidates with equal minimal patterns almost always print identically;
    when they do not (e.g. same-shaped assertions over differently sorted
    symbols) the smallest printed text is taken, which keeps the result
    independent of the input order.
    """
    outputs = exact_outputs(s, lim, opts)
    return outputs[min(outputs)]


# ---------------------------------------------------------------------------
# Graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n; edges stored as (i, j), i < j."""

    n: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for i, j in self.edges:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"bad edge ({i}, {j}) for {self.n} vertices")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        norm = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            norm.add((min(i, j), max(i, j)))
        return cls(n, frozenset(norm))

    @classmethod
    def parse(cls, text: str) -> "Graph":
        """``n m`` on the first line, then ``m`` lines ``i j`` (1-based)."""
        fields = text.split()
        if len(fields) < 2:
            raise ValueError("graph file must start with 'n m'")
        n, m = int(fields[0]), int(fields[1])
        rest = [int(x) for x in fields[2:]]
        if len(rest) != 2 * m:
            raise ValueError(f"expected {m} edges, found {len(rest) / 2:g}")
        edges = list(zip(rest[::2], rest[1::2]))
        g = cls.from_edges(n, edges)
        if len(g.edges) != m:
            raise ValueError("duplicate edges in graph file")
        return g

    @classmethod
    def load(cls, path) -> "Graph":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"] + [f"{i} {j}" for i, j in sorted(self.edges)]
        return "\n".join(lines) + "\n"


def graph_to_formulas(g: Graph) -> Script:
    """One predicate ``f``, one constant per vertex; ``(f v)`` per vertex and
    ``(= v w)`` per edge."""
    lines = ["(set-logic QF_UF)", "(declare-sort V 0)", "(declare-fun f (V) Bool)"]
    lines += [f"(declare-const v{i} V)" for i in range(1, g.n + 1)]
    lines += [f"(assert (f v{i}))" for i in range(1, g.n + 1)]
    lines += [f"(assert (= v{i} v{j}))" for i, j in sorted(g.edges)]
    lines.append("(check-sat)")
    return parse_script("\n".join(lines))


def iso_equivalent(g1: Graph, g2: Graph, lim: OracleLimits = OracleLimits(max_assertions=32, max_comm_occurrences=32)) -> bool:
    """Whether the two graphs' encodings share an exact normal form.

    Equality operands must be allowed to swap: without that, the fixed
    orientation of ``(= vi vj)`` depends on the vertex numbering.
    """
    lim = replace(lim, enumerate_comm=True)
    a = print_script(exact_normalize(graph_to_formulas(g1), lim))
    b = print_script(exact_normalize(graph_to_formulas(g2), lim))
    return a == b

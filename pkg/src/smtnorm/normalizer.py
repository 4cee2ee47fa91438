"""Approximate normalization of SMT-LIB scripts.

The pipeline is:

1. rewrite anti-symmetric comparisons to one representative operator,
2. sort assertions by pattern, breaking ties inside a pattern class by
   comparing super-patterns of the first differing pair of symbols,
3. rename every user symbol to ``X<k>`` following first occurrence in the
   sorted assertions,
4. sort each pattern class again, now by the renamed token sequences.

Shuffled and renamed copies of a script map to the same output unless the
script is symmetric enough that step 2 leaves some assertions tied.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field, replace
from functools import cmp_to_key
from pathlib import Path

from .patterns import (
    RoleIndex,
    cmp,
    distinct_user_symbols,
    global_numbering,
    local_pattern,
    partition_by_pattern,
)
from .smtlib import (
    App,
    Command,
    Declare,
    Define,
    Kind,
    Script,
    SmtError,
    Sym,
    flatten_define,
    flatten_term,
    map_apps,
    map_user_syms,
    print_term,
)
from .theory import DEFAULT_ANTISYMMETRIC, THEORY_SYMBOLS

_PREFIX_RE = re.compile(r"[A-Za-z~!$%^&*_\-+=<>.?/][0-9A-Za-z~!@$%^&*_\-+=<>.?/]*\Z")


class NameCollisionError(SmtError):
    code = "name-collision"


@dataclass(frozen=True)
class AntisymTable:
    """Pairs ``(representative, dual)``; ``(dual a b)`` becomes ``(representative b a)``."""

    pairs: tuple = DEFAULT_ANTISYMMETRIC

    def __post_init__(self):
        seen = set()
        for rep, dual in self.pairs:
            if rep == dual:
                raise ValueError(f"operator {rep!r} paired with itself")
            if rep in seen or dual in seen:
                raise ValueError(f"operator listed twice in anti-symmetric table: {rep} {dual}")
            seen.update((rep, dual))

    @property
    def duals(self) -> dict:
        return {dual: rep for rep, dual in self.pairs}

    @property
    def swaps(self) -> dict:
        """Every operator of the table mapped to its partner."""
        out = {dual: rep for rep, dual in self.pairs}
        out.update((rep, dual) for rep, dual in self.pairs)
        return out

    @classmethod
    def parse(cls, text: str) -> "AntisymTable":
        pairs = []
        for n, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {n}: expected 'representative dual', got {line!r}")
            pairs.append(tuple(parts))
        return cls(tuple(pairs))

    @classmethod
    def load(cls, path) -> "AntisymTable":
        return cls.parse(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class NormalizeOptions:
    antisym_enabled: bool = True
    drop_unused_decls: bool = True
    name_prefix: str = "X"
    antisym_table: AntisymTable = field(default_factory=AntisymTable)

    def __post_init__(self):
        if not _PREFIX_RE.match(self.name_prefix):
            raise ValueError(f"invalid symbol prefix {self.name_prefix!r}")


# ---------------------------------------------------------------------------
# Anti-symmetric operators
# ---------------------------------------------------------------------------


def map_bodies(s: Script, fn) -> Script:
    header = tuple(replace(c, body=fn(c.body)) if isinstance(c, Define) else c for c in s.header)
    return Script(header, tuple(fn(a) for a in s.assertions), s.trailer)


def canonicalize_antisymmetric(s: Script, table: AntisymTable = AntisymTable()) -> Script:
    duals = table.duals

    def rewrite(app: App) -> App:
        head = app.head
        if head.kind is Kind.THEORY and head.name in duals:
            # Chained comparisons reverse as a whole: (< a b c) is (> c b a).
            return App(Sym(duals[head.name]), app.args[::-1])
        return app

    return map_bodies(s, lambda t: map_apps(t, rewrite))


# ---------------------------------------------------------------------------
# Sorting
# ---------------------------------------------------------------------------


class SortContext:
    """Patterns, classes and super-patterns of one assertion list."""

    def __init__(self, assertions):
        self.assertions = tuple(assertions)
        self.formulas = [flatten_term(a) for a in self.assertions]
        self.patterns = [local_pattern(f) for f in self.formulas]
        self.partition = partition_by_pattern(self.formulas, self.patterns)
        self.roles = RoleIndex(self.partition, self.formulas)
        self.vars = [distinct_user_symbols(f) for f in self.formulas]
        self._index = None

    def index(self, term) -> int:
        if self._index is None:
            self._index = {}
            for i, a in enumerate(self.assertions):
                self._index.setdefault(a, i)
        return self._index[term]

    def compare(self, i: int, j: int) -> int:
        c = cmp(self.patterns[i], self.patterns[j])
        if c:
            return c
        va, vb = self.vars[i], self.vars[j]
        if len(va) != len(vb):
            raise AssertionError("equal patterns with different symbol counts")
        for v, u in zip(va, vb):
            if v == u:
                continue
            c = self.roles.compare(v, u)
            if c:
                return c
        return 0

    def order(self) -> list:
        """Assertion indices in sorted order; ties keep their input order."""
        key = cmp_to_key(self.compare)
        out = []
        for members in self.partition.classes:
            out.extend(sorted(members, key=key) if len(members) > 1 else members)
        return out


def compare_assertions(a, b, ctx: SortContext) -> int:
    return ctx.compare(ctx.index(a), ctx.index(b))


def sort_assertions(s: Script) -> Script:
    ctx = SortContext(s.assertions)
    return Script(s.header, tuple(s.assertions[i] for i in ctx.order()), s.trailer)


# ---------------------------------------------------------------------------
# Renaming
# ---------------------------------------------------------------------------


def _global_refs(d: Define, decls: dict) -> set:
    return {t.uid for t in flatten_define(d) if t.kind is Kind.USER and t.uid in decls}


def rename_all(s: Script, opts: NormalizeOptions = NormalizeOptions()) -> Script:
    """Rename user symbols to ``<prefix><k>`` by first occurrence in the assertions."""
    decls = s.declarations()
    numbering = global_numbering(flatten_term(a) for a in s.assertions)

    defines = [c for c in s.header if isinstance(c, Define)]
    used = {uid for uid in numbering if uid in decls}
    for d in reversed(defines):
        if d.name in used:
            used |= _global_refs(d, decls)
    for d in defines:
        if d.name in used:
            global_numbering([flatten_define(d)], numbering)
    if opts.drop_unused_decls:
        kept = [c for c in s.header if not isinstance(c, (Declare, Define)) or c.name in used]
    else:
        kept = list(s.header)
        for c in s.header:
            if isinstance(c, (Declare, Define)) and c.name not in numbering:
                numbering[c.name] = len(numbering) + 1
                if isinstance(c, Define):
                    global_numbering([flatten_define(c)], numbering)

    new_names = {uid: f"{opts.name_prefix}{k}" for uid, k in numbering.items()}
    reserved = s.passthrough_names() | THEORY_SYMBOLS
    clash = reserved.intersection(new_names.values())
    if clash:
        raise NameCollisionError(f"generated name(s) collide with existing symbols: {', '.join(sorted(clash))}")
    return apply_renaming(Script(tuple(kept), s.assertions, s.trailer), new_names, numbering)


def apply_renaming(s: Script, new_names: dict, order: dict = None) -> Script:
    """Rename user symbols by uid.  Declarations are emitted by increasing
    ``order`` value, delayed where a definition needs a later symbol."""
    decls = s.declarations()

    def rename(sym: Sym) -> Sym:
        new = new_names[sym.uid]
        return Sym(new, Kind.USER, new if sym.uid in decls else new + "#b")

    def rename_term(t):
        return map_user_syms(t, rename)

    passthrough = [c for c in s.header if not isinstance(c, (Declare, Define))]
    items = []
    for c in s.header:
        if isinstance(c, Declare):
            items.append(replace(c, name=new_names[c.name]))
        elif isinstance(c, Define):
            params = tuple((rename(v), sort) for v, sort in c.params)
            items.append(Define(new_names[c.name], params, c.sort, rename_term(c.body)))
    if order is not None:
        items = _declaration_order(items, {new_names[u]: k for u, k in order.items() if u in decls})
    return Script(
        tuple(passthrough) + tuple(items),
        tuple(rename_term(a) for a in s.assertions),
        s.trailer,
    )


def _declaration_order(items: list, rank: dict) -> list:
    by_name = {c.name: c for c in items}
    deps = {}
    for c in items:
        if isinstance(c, Define):
            deps[c.name] = {t.uid for t in flatten_define(c) if t.kind is Kind.USER and t.uid in by_name}
        else:
            deps[c.name] = set()
    users: dict = {}
    for name, ds in deps.items():
        for d in ds:
            users.setdefault(d, []).append(name)
    waiting = {name: len(ds) for name, ds in deps.items()}
    ready = [(rank[n], n) for n, w in waiting.items() if w == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        _, name = heapq.heappop(ready)
        out.append(by_name[name])
        for u in users.get(name, ()):
            waiting[u] -= 1
            if waiting[u] == 0:
                heapq.heappush(ready, (rank[u], u))
    return out


# ---------------------------------------------------------------------------
# Final sort and pipeline
# ---------------------------------------------------------------------------


def final_sort(s: Script) -> Script:
    """Reorder assertions inside each pattern class by their token sequences."""

    def key(a):
        flat = flatten_term(a)
        return local_pattern(flat), tuple(t.name for t in flat), print_term(a)

    return Script(s.header, tuple(sorted(s.assertions, key=key)), s.trailer)


def normalize(s: Script, opts: NormalizeOptions = NormalizeOptions()) -> Script:
    if opts.antisym_enabled:
        s = canonicalize_antisymmetric(s, opts.antisym_table)
    return final_sort(rename_all(sort_assertions(s), opts))

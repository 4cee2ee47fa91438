"""Name-independent views of formulas and the orders used to sort them.

A *pattern* replaces every user symbol of a flattened formula by ``@k``,
where ``k`` counts distinct user symbols in order of first occurrence.
Two formulas that differ only by a consistent renaming have equal patterns.

Patterns are tuples of strings and compare as such: position by position,
by code point (``"@10" < "@2"``), a proper prefix first.  Python's tuple
ordering already is that order, so ``pattern_compare`` is a thin wrapper.

A *role* is the 1-based position of a symbol's first occurrence in the user
symbols of a formula (0 when absent).  Multisets of roles are kept as
sorted tuples, which makes the integer multiset order plain tuple order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .smtlib import Kind, Token


def cmp(a, b) -> int:
    return (a > b) - (a < b)


def tokens(names: Iterable[str], user: Iterable[str]) -> list:
    """Build a flattened formula from bare names; handy for examples and tests."""
    user = set(user)
    return [Token(n, Kind.USER, n) if n in user else Token(n, Kind.THEORY) for n in names]


def user_subsequence(seq: Sequence[Token]) -> list:
    return [t for t in seq if t.kind is Kind.USER]


def distinct_user_symbols(seq: Sequence[Token]) -> list:
    """uids of the user symbols of ``seq``, in order of first occurrence."""
    seen = {}
    for t in seq:
        if t.kind is Kind.USER and t.uid not in seen:
            seen[t.uid] = None
    return list(seen)


def _pattern_into(seq: Sequence[Token], numbering: dict, out: list) -> None:
    for t in seq:
        if t.kind is Kind.USER:
            k = numbering.get(t.uid)
            if k is None:
                k = numbering[t.uid] = f"@{len(numbering) + 1}"
            out.append(k)
        else:
            out.append(t.name)


def local_pattern(seq: Sequence[Token]) -> tuple:
    out: list = []
    _pattern_into(seq, {}, out)
    return tuple(out)


def sequence_patterns(seqs: Sequence[Sequence[Token]]) -> list:
    """Patterns of several formulas with one numbering shared across all of them.

    Equivalent to conjoining the formulas, taking the pattern of the
    conjunction and splitting it back at the original boundaries.
    """
    numbering: dict = {}
    result = []
    for seq in seqs:
        out: list = []
        _pattern_into(seq, numbering, out)
        result.append(tuple(out))
    return result


def global_numbering(seqs: Iterable[Sequence[Token]], numbering: dict = None) -> dict:
    """uid -> k for the shared numbering of ``sequence_patterns``."""
    numbering = {} if numbering is None else numbering
    for seq in seqs:
        for t in seq:
            if t.kind is Kind.USER and t.uid not in numbering:
                numbering[t.uid] = len(numbering) + 1
    return numbering


def pattern_compare(p: Sequence[str], q: Sequence[str]) -> int:
    return cmp(tuple(p), tuple(q))


def role(symbol: str, seq: Sequence[Token]) -> int:
    i = 0
    for t in seq:
        if t.kind is Kind.USER:
            i += 1
            if t.uid == symbol:
                return i
    return 0


def first_roles(seq: Sequence[Token]) -> dict:
    """uid -> role for every user symbol of ``seq`` in one pass."""
    roles: dict = {}
    i = 0
    for t in seq:
        if t.kind is Kind.USER:
            i += 1
            if t.uid not in roles:
                roles[t.uid] = i
    return roles


def role_multiset(symbol: str, formulas: Iterable[Sequence[Token]]) -> tuple:
    return tuple(sorted(role(symbol, f) for f in formulas))


def multiset_compare(m1: Iterable[int], m2: Iterable[int]) -> int:
    return cmp(tuple(sorted(m1)), tuple(sorted(m2)))


@dataclass(frozen=True)
class ClassPartition:
    """Formulas grouped by equal local pattern, groups in pattern order."""

    classes: tuple  # tuple of tuples of formula indices, original order kept
    patterns: tuple  # pattern shared by each class

    def class_of(self) -> dict:
        return {i: c for c, members in enumerate(self.classes) for i in members}


def partition_by_pattern(formulas: Sequence[Sequence[Token]], patterns: Sequence[tuple] = None) -> ClassPartition:
    if patterns is None:
        patterns = [local_pattern(f) for f in formulas]
    groups: dict = {}
    for i, p in enumerate(patterns):
        groups.setdefault(p, []).append(i)
    keys = sorted(groups)
    return ClassPartition(tuple(tuple(groups[k]) for k in keys), tuple(keys))


def super_pattern(symbol: str, partition: ClassPartition, formulas: Sequence[Sequence[Token]]) -> tuple:
    return tuple(role_multiset(symbol, [formulas[i] for i in members]) for members in partition.classes)


def super_pattern_compare(s1: Sequence, s2: Sequence) -> int:
    if len(s1) != len(s2):
        raise ValueError(f"super-patterns of different length ({len(s1)} vs {len(s2)})")
    for m1, m2 in zip(s1, s2):
        c = multiset_compare(m1, m2)
        if c:
            return c
    return 0


class RoleIndex:
    """Sparse super-patterns of every user symbol over a class partition.

    Most symbols occur in few classes, so each symbol keeps only the classes
    in which it has a non-zero role.  Comparisons give the same answer as
    ``super_pattern_compare`` on the dense super-patterns.
    """

    def __init__(self, partition: ClassPartition, formulas: Sequence[Sequence[Token]]):
        self.sizes = [len(m) for m in partition.classes]
        entries: dict = {}
        for c, members in enumerate(partition.classes):
            for i in members:
                for uid, r in first_roles(formulas[i]).items():
                    entries.setdefault(uid, {}).setdefault(c, []).append(r)
        self.entries = {uid: {c: tuple(sorted(rs)) for c, rs in per.items()} for uid, per in entries.items()}
        self._cache: dict = {}

    def dense(self, symbol: str) -> tuple:
        per = self.entries.get(symbol, {})
        out = []
        for c, size in enumerate(self.sizes):
            nz = per.get(c, ())
            out.append((0,) * (size - len(nz)) + nz)
        return tuple(out)

    def compare(self, a: str, b: str) -> int:
        if a == b:
            return 0
        key = (a, b)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        ea = self.entries.get(a, {})
        eb = self.entries.get(b, {})
        result = 0
        for c in sorted(ea.keys() | eb.keys()):
            ra = ea.get(c, ())
            rb = eb.get(c, ())
            if ra == rb:
                continue
            # Sorted multisets are zeros followed by the non-zero roles: fewer
            # occurrences means more leading zeros, hence smaller.
            if len(ra) != len(rb):
                result = -1 if len(ra) < len(rb) else 1
            else:
                result = cmp(ra, rb)
            break
        self._cache[key] = result
        self._cache[(b, a)] = -result
        return result

"""Semantics-preserving mutations of a script, driven by a seeded PRNG.

Random draws happen in a fixed order: operand swaps and operator flips
(definitions first, then assertions, each bottom-up), then the renaming
permutation, then the assertion permutation.  The output is therefore a
pure function of the script and the options.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .normalizer import AntisymTable, map_bodies, apply_renaming
from .patterns import distinct_user_symbols
from .prng import MASK64, XorShift64Star
from .smtlib import App, Declare, Define, Kind, Script, Sym, flatten_define, flatten_term, map_apps
from .theory import DEFAULT_COMMUTATIVE, THEORY_SYMBOLS


class Op(enum.Enum):
    SHUFFLE = "shuffle"
    RENAME = "rename"
    COMMSWAP = "commswap"
    ANTISYM = "antisym"


def parse_ops(text: str) -> frozenset:
    """``"shuffle,rename"`` -> ``{Op.SHUFFLE, Op.RENAME}``."""
    try:
        ops = frozenset(Op(part.strip().lower()) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ValueError(f"unknown scramble operation in {text!r}; choose from {', '.join(o.value for o in Op)}") from e
    if not ops:
        raise ValueError("no scramble operation given")
    return ops


@dataclass(frozen=True)
class ScrambleOptions:
    seed: int = 0
    ops: frozenset = frozenset(Op)
    commutative_table: tuple = DEFAULT_COMMUTATIVE
    antisym_table: AntisymTable = field(default_factory=AntisymTable)

    def __post_init__(self):
        if not self.ops:
            raise ValueError("at least one scramble operation is required")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def fresh_names(count: int, reserved, prefix: str = "u") -> list:
    names = []
    k = 0
    while len(names) < count:
        k += 1
        name = f"{prefix}{k}"
        if name not in reserved:
            names.append(name)
    return names


def user_identities(s: Script) -> list:
    """Every user symbol of ``s``: declarations in header order, then binders
    by first occurrence."""
    ids = {c.name: None for c in s.header if isinstance(c, (Declare, Define))}
    for c in s.header:
        if isinstance(c, Define):
            ids.update(dict.fromkeys(distinct_user_symbols(flatten_define(c))))
    for a in s.assertions:
        ids.update(dict.fromkeys(distinct_user_symbols(flatten_term(a))))
    return list(ids)


def scramble(s: Script, opts: ScrambleOptions = ScrambleOptions()) -> Script:
    rng = XorShift64Star(opts.seed)
    ops = opts.ops

    if Op.COMMSWAP in ops or Op.ANTISYM in ops:
        commutative = set(opts.commutative_table) if Op.COMMSWAP in ops else set()
        swaps = opts.antisym_table.swaps if Op.ANTISYM in ops else {}

        def mutate(app: App) -> App:
            head = app.head
            if head.kind is not Kind.THEORY:
                return app
            if head.name in commutative and len(app.args) == 2 and rng.coin():
                app = App(head, app.args[::-1])
            if head.name in swaps and rng.coin():
                app = App(Sym(swaps[head.name]), app.args[::-1])
            return app

        s = map_bodies(s, lambda t: map_apps(t, mutate))

    if Op.RENAME in ops:
        ids = user_identities(s)
        rng.shuffle(ids)
        names = fresh_names(len(ids), s.passthrough_names() | THEORY_SYMBOLS)
        s = apply_renaming(s, dict(zip(ids, names)))

    if Op.SHUFFLE in ops:
        assertions = list(s.assertions)
        rng.shuffle(assertions)
        s = Script(s.header, tuple(assertions), s.trailer)
    return s

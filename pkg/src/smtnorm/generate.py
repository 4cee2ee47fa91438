"""Seeded random SMT-LIB scripts for tests, benchmarks and demos."""

from __future__ import annotations

from dataclasses import dataclass

from .prng import XorShift64Star
from .smtlib import Script, parse_script

_ARITH = ("+", "-", "*")
_COMPARE = ("<", "<=", ">", ">=", "=")


@dataclass(frozen=True)
class GenConfig:
    assertions: int = 6
    constants: int = 5
    functions: int = 1
    depth: int = 2
    numerals: bool = True
    boolean_connectives: bool = True
    binders: bool = False
    definitions: bool = False


class _Gen:
    def __init__(self, rng: XorShift64Star, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.consts = [f"c{i}" for i in range(1, cfg.constants + 1)]
        self.funcs = [f"g{i}" for i in range(1, cfg.functions + 1)]
        self.defs: list = []
        self.bound: list = []
        self.fresh = 0

    def pick(self, seq):
        return seq[self.rng.below(len(seq))]

    def leaf(self) -> str:
        r = self.rng.below(10)
        if self.cfg.numerals and r == 0:
            return str(self.rng.below(20))
        if self.bound and r < 4:
            return self.pick(self.bound)
        return self.pick(self.consts)

    def int_term(self, depth: int) -> str:
        if depth <= 0 or self.rng.below(4) == 0:
            return self.leaf()
        r = self.rng.below(6)
        callables = self.funcs + self.defs
        if callables and r == 0:
            return f"({self.pick(callables)} {self.int_term(depth - 1)})"
        return f"({self.pick(_ARITH)} {self.int_term(depth - 1)} {self.int_term(depth - 1)})"

    def atom(self, depth: int) -> str:
        return f"({self.pick(_COMPARE)} {self.int_term(depth)} {self.int_term(depth)})"

    def formula(self) -> str:
        d = self.cfg.depth
        if self.cfg.binders and self.rng.below(5) == 0:
            self.fresh += 1
            var = f"b{self.fresh}"
            if self.rng.coin():
                value = self.int_term(d - 1)
                self.bound.append(var)
                body = self.atom(d - 1)
                self.bound.pop()
                return f"(let (({var} {value})) {body})"
            self.bound.append(var)
            body = self.atom(d - 1)
            self.bound.pop()
            quant = "forall" if self.rng.coin() else "exists"
            return f"({quant} (({var} Int)) {body})"
        if self.cfg.boolean_connectives and self.rng.below(6) == 0:
            op = self.pick(("and", "or"))
            return f"({op} {self.atom(d - 1)} {self.atom(d - 1)})"
        if self.cfg.boolean_connectives and self.rng.below(8) == 0:
            return f"(not {self.atom(d)})"
        return self.atom(d)

    def script(self) -> str:
        lines = ["(set-logic UFLIA)" if self.cfg.binders else "(set-logic QF_UFLIA)"]
        lines += [f"(declare-fun {f} (Int) Int)" for f in self.funcs]
        lines += [f"(declare-const {c} Int)" for c in self.consts]
        if self.cfg.definitions:
            self.bound.append("p")
            body = self.int_term(1)
            self.bound.pop()
            lines.append(f"(define-fun h1 ((p Int)) Int {body})")
            self.defs.append("h1")
        lines += [f"(assert {self.formula()})" for _ in range(self.cfg.assertions)]
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"


def random_script_text(seed: int, cfg: GenConfig = GenConfig()) -> str:
    return _Gen(XorShift64Star(seed), cfg).script()


def random_script(seed: int, cfg: GenConfig = GenConfig()) -> Script:
    return parse_script(random_script_text(seed, cfg))


def is_discriminable(s: Script) -> bool:
    """True when the tie-breaking comparison separates every pair of
    assertions that share a pattern."""
    from .normalizer import SortContext

    ctx = SortContext(s.assertions)
    for members in ctx.partition.classes:
        for x in range(len(members)):
            for y in range(x + 1, len(members)):
                if ctx.compare(members[x], members[y]) == 0:
                    return False
    return True


def large_script_text(assertions: int, symbols: int, seed: int = 0) -> str:
    """A flat QF_LIA-style script of the given size (every symbol used)."""
    rng = XorShift64Star(seed)
    names = [f"s{i}" for i in range(1, symbols + 1)]
    lines = ["(set-logic QF_LIA)"] + [f"(declare-const {n} Int)" for n in names]
    for i in range(assertions):
        a = names[i % symbols] if i < symbols else names[rng.below(symbols)]
        b = names[rng.below(symbols)]
        c = names[rng.below(symbols)]
        op = _COMPARE[rng.below(len(_COMPARE))]
        ar = _ARITH[rng.below(len(_ARITH))]
        lines.append(f"(assert ({op} ({ar} {a} {b}) (+ {c} {rng.below(100)})))")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"

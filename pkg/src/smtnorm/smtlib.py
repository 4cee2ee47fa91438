"""Reading, representing and printing SMT-LIB 2 scripts.

Only the subset of commands that benchmark normalization needs is accepted:
``set-logic``, ``set-info``, ``set-option``, ``declare-fun``, ``declare-const``,
``define-fun``, ``assert``, ``check-sat``, ``get-model`` and ``exit``.
``declare-sort`` and ``declare-datatype(s)`` are passed through untouched and
the names they introduce behave like theory symbols.

Every atom of a term is classified either as a *theory* symbol (operators,
literals, names from passed-through declarations) or as a *user* symbol
(declared constants and functions, and variables bound by ``let``,
``forall``, ``exists`` or a ``define-fun`` parameter list).  Bound variables
carry a unique ``uid`` so that two binders that happen to use the same name,
or a binder shadowing a global symbol, never get confused.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional, Union

from .theory import THEORY_SYMBOLS


class Kind(enum.Enum):
    THEORY = "theory"
    USER = "user"
    PLACEHOLDER = "placeholder"


class SmtError(Exception):
    """Base class for every error raised while handling a script."""

    code = "error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class SmtSyntaxError(SmtError):
    code = "syntax"


class UndeclaredSymbolError(SmtError):
    code = "undeclared"


class RedeclarationError(SmtError):
    code = "redeclared"


class UnsupportedCommandError(SmtError):
    code = "unsupported"


class ArityError(SmtError):
    code = "arity"


class AnnotationError(SmtError):
    code = "annotation"


# ---------------------------------------------------------------------------
# Terms and commands
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sym:
    """An atom: operator, literal, declared symbol or bound variable.

    ``uid`` identifies a user symbol.  It equals ``name`` for globally
    declared symbols and is unique per binder for bound variables.  It is
    excluded from equality: the surrounding tree already determines which
    binder a name refers to.
    """

    name: str
    kind: Kind = Kind.THEORY
    uid: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.uid is None and self.kind is Kind.USER:
            object.__setattr__(self, "uid", self.name)


@dataclass(frozen=True)
class App:
    head: Sym
    args: tuple


@dataclass(frozen=True)
class Let:
    bindings: tuple  # ((Sym, Term), ...)
    body: "Term"


@dataclass(frozen=True)
class Quant:
    quantifier: str  # "forall" | "exists"
    bindings: tuple  # ((Sym, sort), ...)
    body: "Term"


Term = Union[Sym, App, Let, Quant]


@dataclass(frozen=True)
class Command:
    """A command kept as-is.  ``args`` are nested tuples of atom spellings."""

    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Declare:
    name: str
    arg_sorts: tuple
    sort: str
    command: str = "declare-fun"

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


@dataclass(frozen=True)
class Define:
    name: str
    params: tuple  # ((Sym, sort), ...)
    sort: str
    body: Term

    @property
    def arity(self) -> int:
        return len(self.params)


HeaderItem = Union[Command, Declare, Define]


@dataclass(frozen=True)
class Script:
    header: tuple = ()
    assertions: tuple = ()
    trailer: tuple = ()

    def declarations(self) -> dict:
        """User symbol name -> its ``Declare``/``Define``."""
        return {c.name: c for c in self.header if isinstance(c, (Declare, Define))}

    def passthrough_names(self) -> frozenset:
        """Names introduced by ``declare-sort``/``declare-datatype(s)``."""
        names = set()
        for c in self.header:
            if isinstance(c, Command):
                names |= _introduced_names(c)
        return frozenset(names)


class Token(NamedTuple):
    """One entry of a flattened term."""

    name: str
    kind: Kind
    uid: Optional[str] = None


# ---------------------------------------------------------------------------
# Lexing and s-expression reading
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>;[^\n]*)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<string>"(?:[^"]|"")*")
  | (?P<quoted>\|[^|\\]*\|)
  | (?P<keyword>:[^\s()|";]+)
  | (?P<atom>[^\s()|";]+)
    """,
    re.VERBOSE,
)
_NUMERAL_RE = re.compile(r"\d+\Z")
_DECIMAL_RE = re.compile(r"\d+\.\d+\Z")
_HEX_RE = re.compile(r"#x[0-9A-Fa-f]+\Z")
_BIN_RE = re.compile(r"#b[01]+\Z")
_SIMPLE_SYMBOL_RE = re.compile(r"[A-Za-z~!@$%^&*_\-+=<>.?/][0-9A-Za-z~!@$%^&*_\-+=<>.?/]*\Z")


class _Atom(NamedTuple):
    text: str  # symbol content (unquoted) or literal spelling
    kind: str  # sym | num | dec | hex | bin | str | kw
    pos: int


class _List(list):
    pos = 0


def quote_symbol(name: str) -> str:
    if _SIMPLE_SYMBOL_RE.match(name):
        return name
    return f"|{name}|"


def _line_col(text: str, pos: int) -> tuple:
    line = text.count("\n", 0, pos) + 1
    return line, pos - (text.rfind("\n", 0, pos) + 1) + 1


def _classify(text: str, pos: int) -> _Atom:
    if text[0].isdigit():
        if _NUMERAL_RE.match(text):
            return _Atom(text, "num", pos)
        if _DECIMAL_RE.match(text):
            return _Atom(text, "dec", pos)
    elif text[0] == "#":
        if _HEX_RE.match(text):
            return _Atom(text, "hex", pos)
        if _BIN_RE.match(text):
            return _Atom(text, "bin", pos)
    return _Atom(text, "sym", pos)


def read_sexprs(text: str) -> list:
    """Split ``text`` into top-level s-expressions."""
    top: list = []
    stack = [top]
    pos = 0
    n = len(text)
    match = _TOKEN_RE.match
    while pos < n:
        m = match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise SmtSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "lpar":
            lst = _List()
            lst.pos = pos
            stack[-1].append(lst)
            stack.append(lst)
        elif kind == "rpar":
            if len(stack) == 1:
                line, col = _line_col(text, pos)
                raise SmtSyntaxError("unbalanced ')'", line, col)
            stack.pop()
        elif kind == "atom":
            stack[-1].append(_classify(tok, pos))
        elif kind == "quoted":
            stack[-1].append(_Atom(tok[1:-1], "sym", pos))
        elif kind == "string":
            stack[-1].append(_Atom(tok, "str", pos))
        elif kind == "keyword":
            stack[-1].append(_Atom(tok, "kw", pos))
        pos = m.end()
    if len(stack) > 1:
        line, col = _line_col(text, stack[-1].pos)
        raise SmtSyntaxError("unbalanced '('", line, col)
    return top


def _spelling(sx) -> Union[str, tuple]:
    """Nested-tuple form of an s-expression, symbols quoted when needed."""
    if isinstance(sx, _Atom):
        return quote_symbol(sx.text) if sx.kind == "sym" else sx.text
    return tuple(_spelling(x) for x in sx)


def sexpr_text(sx) -> str:
    if isinstance(sx, str):
        return sx
    return "(" + " ".join(sexpr_text(x) for x in sx) + ")"


def _symbols_in(sx) -> Iterator[str]:
    if isinstance(sx, str):
        if sx[0] not in '":#' and not sx[0].isdigit():
            yield sx[1:-1] if sx.startswith("|") else sx
    else:
        for x in sx:
            yield from _symbols_in(x)


def _introduced_names(cmd: Command) -> set:
    if cmd.name == "declare-sort" and cmd.args:
        return set(_symbols_in(cmd.args[0]))
    if cmd.name in ("declare-datatypes", "declare-datatype"):
        names = set(_symbols_in(cmd.args))
        return names | {"is-" + n for n in names}
    return set()


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_PASSTHROUGH = {"set-logic", "set-info", "set-option", "declare-sort", "declare-datatypes", "declare-datatype"}
_TRAILER = {"check-sat", "get-model", "exit"}


class _Parser:
    def __init__(self, text: str, strict: bool):
        self.text = text
        self.strict = strict
        self.user: dict = {}  # name -> arity
        self.extra_theory: set = set()
        self.scopes: list = []
        self.counter = itertools.count(1)

    def error(self, cls, message: str, node) -> SmtError:
        pos = node.pos if node is not None else 0
        line, col = _line_col(self.text, pos)
        return cls(message, line, col)

    # -- commands ----------------------------------------------------------

    def script(self) -> Script:
        header, assertions, trailer = [], [], []
        for sx in read_sexprs(self.text):
            if not isinstance(sx, _List) or not sx or not isinstance(sx[0], _Atom) or sx[0].kind != "sym":
                raise self.error(SmtSyntaxError, "expected a command", sx)
            name = sx[0].text
            args = sx[1:]
            if name in _TRAILER:
                trailer.append(Command(name, _spelling(args)))
                continue
            if trailer:
                raise self.error(UnsupportedCommandError, f"'{name}' after check-sat (incremental scripts are not supported)", sx)
            if name == "assert":
                if len(args) != 1:
                    raise self.error(SmtSyntaxError, "assert takes exactly one term", sx)
                assertions.append(self.term(args[0]))
            elif name in _PASSTHROUGH:
                cmd = Command(name, _spelling(args))
                self.extra_theory |= _introduced_names(cmd)
                header.append(cmd)
            elif name == "declare-fun":
                header.append(self.declare_fun(sx))
            elif name == "declare-const":
                header.append(self.declare_const(sx))
            elif name == "define-fun":
                header.append(self.define_fun(sx))
            else:
                raise self.error(UnsupportedCommandError, f"unsupported command '{name}'", sx)
        return Script(tuple(header), tuple(assertions), tuple(trailer))

    def fresh_name(self, atom, arity: int) -> str:
        if not isinstance(atom, _Atom) or atom.kind != "sym":
            raise self.error(SmtSyntaxError, "expected a symbol", atom)
        if atom.text in self.user:
            raise self.error(RedeclarationError, f"symbol '{atom.text}' already declared", atom)
        self.user[atom.text] = arity
        return atom.text

    def sort(self, sx) -> str:
        if isinstance(sx, _List) and not sx:
            raise self.error(SmtSyntaxError, "empty sort", sx)
        return sexpr_text(_spelling(sx))

    def declare_fun(self, sx) -> Declare:
        if len(sx) != 4 or not isinstance(sx[2], _List):
            raise self.error(SmtSyntaxError, "malformed declare-fun", sx)
        arg_sorts = tuple(self.sort(s) for s in sx[2])
        sort = self.sort(sx[3])
        return Declare(self.fresh_name(sx[1], len(arg_sorts)), arg_sorts, sort, "declare-fun")

    def declare_const(self, sx) -> Declare:
        if len(sx) != 3:
            raise self.error(SmtSyntaxError, "malformed declare-const", sx)
        sort = self.sort(sx[2])
        return Declare(self.fresh_name(sx[1], 0), (), sort, "declare-const")

    def define_fun(self, sx) -> Define:
        if len(sx) != 5 or not isinstance(sx[2], _List):
            raise self.error(SmtSyntaxError, "malformed define-fun", sx)
        params = self.sorted_vars(sx[2])
        sort = self.sort(sx[3])
        self.scopes.append({v.name: v for v, _ in params})
        try:
            body = self.term(sx[4])
        finally:
            self.scopes.pop()
        return Define(self.fresh_name(sx[1], len(params)), params, sort, body)

    # -- terms -------------------------------------------------------------

    def bound(self, atom) -> Sym:
        if not isinstance(atom, _Atom) or atom.kind != "sym":
            raise self.error(SmtSyntaxError, "expected a variable name", atom)
        return Sym(atom.text, Kind.USER, f"{atom.text}#{next(self.counter)}")

    def sorted_vars(self, lst) -> tuple:
        out = []
        seen = set()
        for b in lst:
            if not isinstance(b, _List) or len(b) != 2:
                raise self.error(SmtSyntaxError, "expected (name sort)", b)
            var = self.bound(b[0])
            if var.name in seen:
                raise self.error(SmtSyntaxError, f"variable '{var.name}' bound twice", b)
            seen.add(var.name)
            out.append((var, self.sort(b[1])))
        return tuple(out)

    def resolve(self, atom: _Atom, nargs: int) -> Sym:
        name = atom.text
        for scope in reversed(self.scopes):
            if name in scope:
                if nargs:
                    raise self.error(ArityError, f"bound variable '{name}' applied to arguments", atom)
                return scope[name]
        arity = self.user.get(name)
        if arity is not None:
            if arity != nargs:
                raise self.error(ArityError, f"'{name}' expects {arity} argument(s), got {nargs}", atom)
            return Sym(name, Kind.USER, name)
        if name in THEORY_SYMBOLS or name in self.extra_theory:
            return Sym(name, Kind.THEORY)
        raise self.error(UndeclaredSymbolError, f"undeclared symbol '{name}'", atom)

    def head(self, sx, nargs: int) -> Sym:
        if isinstance(sx, _Atom):
            if sx.kind != "sym":
                raise self.error(SmtSyntaxError, f"'{sx.text}' cannot be applied", sx)
            return self.resolve(sx, nargs)
        if sx and isinstance(sx[0], _Atom) and sx[0].kind == "sym":
            if sx[0].text == "_":
                return Sym(sexpr_text(_spelling(sx)), Kind.THEORY)
            if sx[0].text == "as" and len(sx) == 3:
                inner = sx[1]
                if isinstance(inner, _Atom) and inner.kind == "sym" and inner.text in self.user:
                    return self.resolve(inner, nargs)
                return Sym(sexpr_text(_spelling(sx)), Kind.THEORY)
        raise self.error(SmtSyntaxError, "malformed function head", sx)

    def term(self, sx) -> Term:
        if isinstance(sx, _Atom):
            if sx.kind == "sym":
                return self.resolve(sx, 0)
            if sx.kind == "kw":
                raise self.error(SmtSyntaxError, f"unexpected keyword {sx.text}", sx)
            return Sym(sx.text, Kind.THEORY)
        if not sx:
            raise self.error(SmtSyntaxError, "empty term", sx)
        first = sx[0]
        if isinstance(first, _Atom) and first.kind == "sym":
            word = first.text
            if word == "let":
                return self.let(sx)
            if word in ("forall", "exists"):
                return self.quant(sx)
            if word == "!":
                if self.strict:
                    raise self.error(AnnotationError, "term annotations are not allowed in strict mode", sx)
                if len(sx) < 2:
                    raise self.error(SmtSyntaxError, "malformed annotation", sx)
                return self.term(sx[1])
            if word in ("_", "as"):
                return self.head(sx, 0)
            if word == "match":
                raise self.error(UnsupportedCommandError, "match terms are not supported", sx)
        if len(sx) == 1:
            raise self.error(SmtSyntaxError, "application without arguments", sx)
        head = self.head(first, len(sx) - 1)
        return App(head, tuple(self.term(a) for a in sx[1:]))

    def let(self, sx) -> Let:
        if len(sx) != 3 or not isinstance(sx[1], _List) or not sx[1]:
            raise self.error(SmtSyntaxError, "malformed let", sx)
        bindings = []
        scope = {}
        for b in sx[1]:
            if not isinstance(b, _List) or len(b) != 2:
                raise self.error(SmtSyntaxError, "expected (name term)", b)
            var = self.bound(b[0])
            if var.name in scope:
                raise self.error(SmtSyntaxError, f"variable '{var.name}' bound twice", b)
            scope[var.name] = var
            bindings.append((var, self.term(b[1])))
        self.scopes.append(scope)
        try:
            body = self.term(sx[2])
        finally:
            self.scopes.pop()
        return Let(tuple(bindings), body)

    def quant(self, sx) -> Quant:
        if len(sx) != 3 or not isinstance(sx[1], _List) or not sx[1]:
            raise self.error(SmtSyntaxError, f"malformed {sx[0].text}", sx)
        bindings = self.sorted_vars(sx[1])
        self.scopes.append({v.name: v for v, _ in bindings})
        try:
            body = self.term(sx[2])
        finally:
            self.scopes.pop()
        return Quant(sx[0].text, bindings, body)


def parse_script(text: str, strict: bool = False) -> Script:
    """Parse SMT-LIB text.  ``strict`` rejects ``!`` annotations instead of dropping them."""
    return _Parser(text, strict).script()


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def _sym_text(s: Sym) -> str:
    return quote_symbol(s.name) if s.kind is Kind.USER else s.name


def _emit(t: Term, out: list) -> None:
    if isinstance(t, Sym):
        out.append(_sym_text(t))
    elif isinstance(t, App):
        out.append("(")
        out.append(_sym_text(t.head))
        for a in t.args:
            out.append(" ")
            _emit(a, out)
        out.append(")")
    elif isinstance(t, Let):
        out.append("(let (")
        for i, (var, value) in enumerate(t.bindings):
            out.append(" (" if i else "(")
            out.append(_sym_text(var))
            out.append(" ")
            _emit(value, out)
            out.append(")")
        out.append(") ")
        _emit(t.body, out)
        out.append(")")
    else:
        out.append(f"({t.quantifier} (")
        out.append(" ".join(f"({_sym_text(v)} {s})" for v, s in t.bindings))
        out.append(") ")
        _emit(t.body, out)
        out.append(")")


def print_term(t: Term) -> str:
    out: list = []
    _emit(t, out)
    return "".join(out)


def print_command(c) -> str:
    if isinstance(c, Declare):
        name = quote_symbol(c.name)
        if c.command == "declare-const":
            return f"(declare-const {name} {c.sort})"
        return f"(declare-fun {name} ({' '.join(c.arg_sorts)}) {c.sort})"
    if isinstance(c, Define):
        params = " ".join(f"({_sym_text(v)} {s})" for v, s in c.params)
        return f"(define-fun {quote_symbol(c.name)} ({params}) {c.sort} {print_term(c.body)})"
    return sexpr_text((c.name,) + tuple(c.args))


def print_script(s: Script) -> str:
    lines = [print_command(c) for c in s.header]
    lines.extend(f"(assert {print_term(a)})" for a in s.assertions)
    lines.extend(print_command(c) for c in s.trailer)
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# Flattening and traversal
# ---------------------------------------------------------------------------


def _flatten(t: Term, out: list) -> None:
    if isinstance(t, Sym):
        out.append(Token(t.name, t.kind, t.uid))
    elif isinstance(t, App):
        h = t.head
        out.append(Token(h.name, h.kind, h.uid))
        for a in t.args:
            _flatten(a, out)
    elif isinstance(t, Let):
        out.append(Token("let", Kind.THEORY))
        for var, value in t.bindings:
            out.append(Token(var.name, var.kind, var.uid))
            _flatten(value, out)
        _flatten(t.body, out)
    else:
        out.append(Token(t.quantifier, Kind.THEORY))
        for var, sort in t.bindings:
            out.append(Token(var.name, var.kind, var.uid))
            out.append(Token(sort, Kind.THEORY))
        _flatten(t.body, out)


def flatten_term(t: Term) -> list:
    """Preorder symbol sequence of ``t``: heads before their arguments."""
    out: list = []
    _flatten(t, out)
    return out


def flatten_define(d: Define) -> list:
    out = []
    for var, sort in d.params:
        out.append(Token(var.name, var.kind, var.uid))
        out.append(Token(sort, Kind.THEORY))
    _flatten(d.body, out)
    return out


def map_user_syms(t: Term, fn) -> Term:
    """Rebuild ``t`` with every user ``Sym`` (including binders) replaced by ``fn(sym)``."""
    if isinstance(t, Sym):
        return fn(t) if t.kind is Kind.USER else t
    if isinstance(t, App):
        head = fn(t.head) if t.head.kind is Kind.USER else t.head
        return App(head, tuple(map_user_syms(a, fn) for a in t.args))
    if isinstance(t, Let):
        return Let(tuple((fn(v), map_user_syms(x, fn)) for v, x in t.bindings), map_user_syms(t.body, fn))
    return Quant(t.quantifier, tuple((fn(v), s) for v, s in t.bindings), map_user_syms(t.body, fn))


def map_apps(t: Term, fn) -> Term:
    """Bottom-up rewrite: ``fn`` sees every ``App`` after its arguments were rewritten."""
    if isinstance(t, Sym):
        return t
    if isinstance(t, App):
        return fn(App(t.head, tuple(map_apps(a, fn) for a in t.args)))
    if isinstance(t, Let):
        return Let(tuple((v, map_apps(x, fn)) for v, x in t.bindings), map_apps(t.body, fn))
    return Quant(t.quantifier, t.bindings, map_apps(t.body, fn))

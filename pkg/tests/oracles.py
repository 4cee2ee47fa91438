"""Independent reference implementations used to check the package.

Nothing here imports the pattern or normalizer code; the checks are written
from the definitions, favouring brute force over speed.
"""

from __future__ import annotations

import itertools
import re

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def brute_force_isomorphic(n1, edges1, n2, edges2) -> bool:
    """Try every bijection of vertices 1..n."""
    if n1 != n2 or len(edges1) != len(edges2):
        return False
    target = {frozenset(e) for e in edges2}
    for perm in itertools.permutations(range(1, n1 + 1)):
        m = dict(zip(range(1, n1 + 1), perm))
        if all(frozenset((m[i], m[j])) in target for i, j in edges1):
            return True
    return False


def certificate(n, edges) -> tuple:
    """Smallest sorted edge list over all relabelings; equal iff isomorphic."""
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        m = dict(zip(range(1, n + 1), perm))
        cand = tuple(sorted(tuple(sorted((m[i], m[j]))) for i, j in edges))
        if best is None or cand < best:
            best = cand
    return (n, best)


def all_graphs(n):
    """Every labeled simple graph on vertices 1..n, as edge lists."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield [p for k, p in enumerate(pairs) if mask >> k & 1]


def prefix_tokens(term_text: str) -> list:
    """Preorder symbols of a printed quantifier-free term (parentheses dropped)."""
    return [t for t in _TOKEN.findall(term_text) if t not in "()"]


def pattern(tokens, user, numbering=None) -> tuple:
    """Placeholder pattern straight from the definition."""
    numbering = {} if numbering is None else numbering
    out = []
    for t in tokens:
        if t in user:
            if t not in numbering:
                numbering[t] = len(numbering) + 1
            out.append(f"@{numbering[t]}")
        else:
            out.append(t)
    return tuple(out)


def min_conjoined_pattern(assertion_texts, user) -> tuple:
    """Minimum over every ordering of the conjoined global pattern."""
    best = None
    for perm in itertools.permutations(assertion_texts):
        numbering = {}
        key = ()
        for a in perm:
            key += pattern(prefix_tokens(a), user, numbering)
        if best is None or key < best:
            best = key
    return best


def median(values):
    v = sorted(values)
    n = len(v)
    return v[n // 2] if n % 2 else (v[n // 2 - 1] + v[n // 2]) / 2


def z_statistic(successes, n, p0):
    return (successes / n - p0) / ((p0 * (1 - p0) / n) ** 0.5)


def read_sexp(text: str):
    """Nested lists of atom strings for one printed term."""
    stack = [[]]
    for tok in _TOKEN.findall(text):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    (only,) = stack[0]
    return only


def write_sexp(sx) -> str:
    if isinstance(sx, str):
        return sx
    return "(" + " ".join(write_sexp(x) for x in sx) + ")"


def swap_variants(sx, commutative) -> set:
    """Printed forms reachable by swapping operands of binary commutative applications."""
    if isinstance(sx, str):
        return {sx}
    head, args = sx[0], sx[1:]
    out = set()
    for combo in itertools.product(*(sorted(swap_variants(a, commutative)) for a in args)):
        out.add("(" + " ".join((head,) + combo) + ")")
        if head in commutative and len(combo) == 2:
            out.add("(" + " ".join((head, combo[1], combo[0])) + ")")
    return out


def in_shuffle_swap_closure(original, mutated, commutative) -> bool:
    """Whether the assertion list ``mutated`` is some permutation of some
    operand-swapped version of ``original`` (all as printed terms)."""
    if len(original) != len(mutated):
        return False
    variants = [swap_variants(read_sexp(a), commutative) for a in original]
    return any(all(m in variants[i] for m, i in zip(mutated, perm)) for perm in itertools.permutations(range(len(original))))

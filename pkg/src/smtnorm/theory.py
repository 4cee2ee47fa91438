"""Names with a fixed interpretation in the standard SMT-LIB theories."""

CORE = {
    "true", "false", "not", "=>", "and", "or", "xor", "=", "distinct", "ite",
}

ARITH = {
    "+", "-", "*", "/", "div", "mod", "abs", "<=", "<", ">=", ">",
    "to_real", "to_int", "is_int",
}

BITVEC = {
    "concat", "bvnot", "bvand", "bvor", "bvneg", "bvadd", "bvmul", "bvudiv",
    "bvurem", "bvshl", "bvlshr", "bvult", "bvnand", "bvnor", "bvxor", "bvxnor",
    "bvcomp", "bvsub", "bvsdiv", "bvsrem", "bvsmod", "bvashr", "bvule", "bvugt",
    "bvuge", "bvslt", "bvsle", "bvsgt", "bvsge", "bv2nat", "bv2int", "nat2bv",
    "int2bv", "bvredor", "bvredand",
}

ARRAYS = {"select", "store"}

STRINGS = {
    "str.++", "str.len", "str.<", "str.<=", "str.at", "str.substr",
    "str.prefixof", "str.suffixof", "str.contains", "str.indexof",
    "str.replace", "str.replace_all", "str.replace_re", "str.replace_re_all",
    "str.is_digit", "str.to_code", "str.from_code", "str.to_int",
    "str.from_int", "str.to.int", "int.to.str", "str.in_re", "str.to_re",
    "str.in.re", "str.to.re", "re.none", "re.all", "re.allchar", "re.++",
    "re.union", "re.inter", "re.*", "re.+", "re.opt", "re.range", "re.comp",
    "re.diff", "re.nostr",
}

FLOATS = {
    "fp", "fp.abs", "fp.neg", "fp.add", "fp.sub", "fp.mul", "fp.div", "fp.fma",
    "fp.sqrt", "fp.rem", "fp.roundToIntegral", "fp.min", "fp.max", "fp.leq",
    "fp.lt", "fp.geq", "fp.gt", "fp.eq", "fp.isNormal", "fp.isSubnormal",
    "fp.isZero", "fp.isInfinite", "fp.isNaN", "fp.isNegative", "fp.isPositive",
    "fp.to_real", "RNE", "RNA", "RTP", "RTN", "RTZ", "roundNearestTiesToEven",
    "roundNearestTiesToAway", "roundTowardPositive", "roundTowardNegative",
    "roundTowardZero",
}

THEORY_SYMBOLS = frozenset(CORE | ARITH | BITVEC | ARRAYS | STRINGS | FLOATS)

# Operators whose two operands may be exchanged without changing meaning.
DEFAULT_COMMUTATIVE = (
    "and", "or", "=", "+", "*", "bvadd", "bvmul", "bvand", "bvor", "bvxor",
)

# (representative, dual): `(dual a b)` means the same as `(representative b a)`.
DEFAULT_ANTISYMMETRIC = (
    (">", "<"),
    (">=", "<="),
    ("bvugt", "bvult"),
    ("bvuge", "bvule"),
    ("bvsgt", "bvslt"),
    ("bvsge", "bvsle"),
)

"""Generators for the four orthogonal product set families.

Pattern tokens used below, one per party:

    int        fixed computational basis vector |u>
    "P"        fixed |d_k - 1>
    "a" "b" "g" "k"
               the alpha / beta / gamma / kappa Fourier family, iterated
    ("pm", a, b)
               |a> +- |b>, sign iterated; b may be "P"
    "p"        |p>, p = 1 .. d_k - 1, expanded into one block per value
"""
from __future__ import annotations

import itertools

from .states import ALPHA, BASIS, BETA, GAMMA, KAPPA, PM, Block, Dims, OPSInstance, Slot

FOUR_ASYM, FOUR_SYM, ODD_N, EVEN_N = "FourAsym", "FourSym", "OddN", "EvenN"
FAMILIES = (FOUR_ASYM, FOUR_SYM, ODD_N, EVEN_N)

_FAMILY_TOKENS = {"a": (ALPHA, "i"), "b": (BETA, "j"), "g": (GAMMA, "m"), "k": (KAPPA, "l")}

# Rows H_1 .. H_18 of the asymmetric four-party set.
_FOUR_ASYM_ROWS = [
    (0, 0, "b", "a"),
    (0, 0, "P", "b"),
    ("b", "a", "P", "P"),
    ("P", "b", "P", "P"),
    ("P", "P", "g", "a"),
    ("P", "P", 0, "g"),
    ("g", "a", 0, 0),
    (0, "g", 0, 0),
    (0, "k", 0, "g"),
    ("P", "k", "P", "b"),
    ("k", "P", "b", "P"),
    ("k", 0, "g", 0),
    (0, "g", "k", "P"),
    ("P", "b", "k", 0),
    ("k", "P", "P", "b"),
    ("k", 0, 0, "g"),
    (0, "P", ("pm", 0, "P"), "k"),
    ("P", 0, ("pm", 0, "P"), "k"),
]

# First member H_{r,1} of each group of the symmetric set; H_{r,t+1} is H_{r,t} shifted
# one party to the left. Group 8 has period two.
_FOUR_SYM_FIRST = [
    (("k", "k", 0, "g"), 4),
    (("P", 0, 0, "b"), 4),
    ((0, 0, "P", "g"), 4),
    (("k", "P", "P", ("pm", 0, "P")), 4),
    (("P", "P", "k", "b"), 4),
    ((0, "P", "P", "P"), 4),
    ((0, "k", "P", "k"), 4),
    (("P", "k", "P", "k"), 2),
]


def _slot(token, party: int, dims: Dims) -> Slot:
    d = dims[party]
    if isinstance(token, int):
        return Slot(BASIS, (token,))
    if token == "P":
        return Slot(BASIS, (d - 1,))
    if token in _FAMILY_TOKENS:
        kind, letter = _FAMILY_TOKENS[token]
        return Slot(kind, (), f"{letter}{party + 1}")
    if isinstance(token, tuple) and token[0] == "pm":
        a, b = (d - 1 if x == "P" else x for x in token[1:])
        return Slot(PM, (a, b), f"s{party + 1}")
    raise ValueError(f"bad pattern token {token!r}")


def _block(block_id: str, row, dims: Dims) -> Block:
    return Block(block_id, dims, tuple(_slot(tok, k, dims) for k, tok in enumerate(row)))


def shift_left(row, t: int) -> tuple:
    """Row t (1-based) of a cyclic family whose first row is `row`."""
    n = len(row)
    return tuple(row[(k + t - 1) % n] for k in range(n))


def _require(dims, n_ok, what: str) -> Dims:
    dims = dims if isinstance(dims, Dims) else Dims(tuple(dims))
    if not n_ok(dims.n):
        raise ValueError(f"{what}; got n = {dims.n}")
    return dims


def build_four_asym(dims) -> OPSInstance:
    """The 18-block asymmetric four-party set H_1 .. H_18."""
    dims = _require(dims, lambda n: n == 4, "FourAsym needs exactly 4 parties")
    blocks = tuple(_block(f"H_{r}", row, dims) for r, row in enumerate(_FOUR_ASYM_ROWS, 1))
    return OPSInstance(dims, blocks, FOUR_ASYM)


def build_four_sym(dims) -> OPSInstance:
    """The 30-block cyclically symmetric four-party set H_{1,1} .. H_{8,2}."""
    dims = _require(dims, lambda n: n == 4, "FourSym needs exactly 4 parties")
    blocks = []
    for r, (first, period) in enumerate(_FOUR_SYM_FIRST, 1):
        for t in range(1, period + 1):
            blocks.append(_block(f"H_{{{r},{t}}}", shift_left(first, t), dims))
    return OPSInstance(dims, tuple(blocks), FOUR_SYM)


def _expand_p(label: str, sup: str, r: int, t: int, row, dims: Dims) -> list[Block]:
    (K,) = [k for k, tok in enumerate(row) if tok == "p"]
    out = []
    for p in range(1, dims[K]):
        concrete = tuple(p if tok == "p" else tok for tok in row)
        out.append(_block(f"H^{sup}_{{{p}{r},{t}}}", concrete, dims))
    return out


def _odd_rows(n: int):
    h = (n - 1) // 2
    row1 = ["a"] * h + ["p"] + [0] * (n - h - 1)
    row2 = ["g"] + [0] * (n - 1)
    row2[h] = "p"
    row2[n - 1] = 1
    return [(1, tuple(row1)), (2, tuple(row2))]


def _even_rows(n: int):
    h = n // 2
    r1 = ["a"] * (h - 1) + ["g", "p"] + [0] * (n - h - 1)
    r2 = [0, "p"] + [0] * (n - 4) + [2, 2]
    r3 = ["g"] + [0] * (h - 2) + ["p"] + [1] * h
    r4 = [("pm", 0, 1), 1] + [0] * (n - 2)
    r4[h] = 1
    return [(1, tuple(r1)), (2, tuple(r2)), (3, tuple(r3)), (4, tuple(r4))]


def build_odd(dims) -> OPSInstance:
    """Blocks H^O_{p1,t} and H^O_{p2,t}, t = 1..n, for odd n >= 5."""
    dims = _require(dims, lambda n: n >= 5 and n % 2 == 1, "OddN needs odd n >= 5")
    blocks = []
    for r, row1 in _odd_rows(dims.n):
        for t in range(1, dims.n + 1):
            blocks += _expand_p("H", "O", r, t, shift_left(row1, t), dims)
    return OPSInstance(dims, tuple(blocks), ODD_N)


def build_even(dims) -> OPSInstance:
    """Blocks H^E_{p1,t}, H^E_{p2,t}, H^E_{p3,t}, H^E_{4,t}, t = 1..n, for even n >= 6."""
    dims = _require(dims, lambda n: n >= 6 and n % 2 == 0, "EvenN needs even n >= 6")
    blocks = []
    for r, row1 in _even_rows(dims.n):
        for t in range(1, dims.n + 1):
            row = shift_left(row1, t)
            if "p" in row:
                blocks += _expand_p("H", "E", r, t, row, dims)
            else:
                blocks.append(_block(f"H^E_{{{r},{t}}}", row, dims))
    return OPSInstance(dims, tuple(blocks), EVEN_N)


BUILDERS = {FOUR_ASYM: build_four_asym, FOUR_SYM: build_four_sym, ODD_N: build_odd, EVEN_N: build_even}


def build(family: str, dims) -> OPSInstance:
    try:
        builder = BUILDERS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}") from None
    return builder(dims)


def count_states(ops: OPSInstance) -> int:
    return ops.count()


def four_asym_count(d: int) -> int:
    return 12 * d * d - 20 * d + 4


def four_sym_count(d: int) -> int:
    return 4 * d**3 - 10 * d**2 + 12 * d - 4


def computational_basis(dims) -> OPSInstance:
    """Every computational basis product state, one block each.

    Locally reducible on every party, so it serves as a negative control.
    """
    dims = dims if isinstance(dims, Dims) else Dims(tuple(dims))
    blocks = []
    for idx in itertools.product(*(range(d) for d in dims)):
        blocks.append(Block("B_" + "".join(map(str, idx)), dims, tuple(Slot(BASIS, (u,)) for u in idx)))
    return OPSInstance(dims, tuple(blocks), "ComputationalBasis")

"""Structured product states: local factors, blocks of states, whole instances.

Party indices are 0-based here; the JSON and CLI surfaces use 1-based indices.
All states are unnormalized.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, common_order

BASIS, ALPHA, BETA, GAMMA, KAPPA, PM = "basis", "alpha", "beta", "gamma", "kappa", "pm"
FAMILY_KINDS = (ALPHA, BETA, GAMMA, KAPPA)
KINDS = (BASIS,) + FAMILY_KINDS + (PM,)


@dataclass(frozen=True)
class Dims:
    d: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.d)
        object.__setattr__(self, "d", d)
        if len(d) < 3:
            raise ValueError(f"need at least 3 parties, got {len(d)}")
        if min(d) < 3:
            raise ValueError(f"every local dimension must be >= 3, got {d}")

    @property
    def n(self) -> int:
        return len(self.d)

    def __getitem__(self, k: int) -> int:
        return self.d[k]

    def __iter__(self):
        return iter(self.d)

    def __len__(self):
        return len(self.d)

    def prime(self, k: int) -> int:
        """d_k - 1, the largest local basis index."""
        return self.d[k] - 1

    @property
    def global_order(self) -> int:
        """One root-of-unity order that holds every amplitude of every family."""
        return common_order(x for dk in self.d for x in (dk, dk - 1, max(dk - 2, 1), 2))


def family_size(kind: str, dim: int) -> int:
    """Number of members of a local family at dimension dim."""
    return {ALPHA: dim, BETA: dim - 1, GAMMA: dim - 1, KAPPA: dim - 2, PM: 2}[kind]


@dataclass(frozen=True, order=True)
class Factor:
    """One party's local state.

    params: basis -> (u,); alpha/beta/gamma/kappa -> (index,); pm -> (a, b, s)
    with s = 0 for |a> + |b> and s = 1 for |a> - |b>.
    """

    kind: str
    dim: int
    params: tuple[int, ...]

    def __post_init__(self):
        k, d, p = self.kind, self.dim, self.params
        if k == BASIS:
            ok = len(p) == 1 and 0 <= p[0] < d
        elif k in FAMILY_KINDS:
            ok = len(p) == 1 and 0 <= p[0] < family_size(k, d)
        elif k == PM:
            ok = len(p) == 3 and p[0] != p[1] and 0 <= min(p[:2]) and max(p[:2]) < d and p[2] in (0, 1)
        else:
            raise ValueError(f"unknown factor kind {k!r}")
        if not ok:
            raise ValueError(f"invalid {k} factor params {p} at dimension {d}")

    @classmethod
    def basis(cls, u: int, dim: int) -> Factor:
        return cls(BASIS, dim, (u,))

    @classmethod
    def alpha(cls, i: int, dim: int) -> Factor:
        return cls(ALPHA, dim, (i,))

    @classmethod
    def beta(cls, j: int, dim: int) -> Factor:
        return cls(BETA, dim, (j,))

    @classmethod
    def gamma(cls, m: int, dim: int) -> Factor:
        return cls(GAMMA, dim, (m,))

    @classmethod
    def kappa(cls, l: int, dim: int) -> Factor:
        return cls(KAPPA, dim, (l,))

    @classmethod
    def plus_minus(cls, a: int, b: int, sign: int, dim: int) -> Factor:
        """sign is '+' / '-' or +1 / -1."""
        s = {"+": 0, "-": 1, 1: 0, -1: 1}[sign]
        return cls(PM, dim, (a, b, s))

    @property
    def support(self) -> tuple[int, ...]:
        return _support(self.kind, self.dim, self.params[:2] if self.kind == PM else self.params[:1])

    @property
    def amplitudes(self) -> tuple[tuple[int, int], ...]:
        """Per support index, the amplitude as (num, den) meaning w_den**num."""
        k, d, p = self.kind, self.dim, self.params
        if k == BASIS:
            return ((0, 1),)
        if k == ALPHA:
            return tuple(((p[0] * u) % d, d) for u in range(d))
        if k in (BETA, GAMMA):
            return tuple(((p[0] * u) % (d - 1), d - 1) for u in range(d - 1))
        if k == KAPPA:
            return tuple(((p[0] * u) % (d - 2), d - 2) for u in range(d - 2))
        return ((0, 1), (1, 2) if p[2] else (0, 1))

    def exponents(self, order: int) -> dict[int, int]:
        """Map support index -> exponent of w_order."""
        out = {}
        for u, (num, den) in zip(self.support, self.amplitudes):
            if order % den:
                raise ValueError(f"order {order} does not contain w_{den}")
            out[u] = (num * (order // den)) % order
        return out

    @property
    def order(self) -> int:
        return common_order(den for _, den in self.amplitudes)

    def vector(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        for u, (num, den) in zip(self.support, self.amplitudes):
            v[u] = np.exp(2j * np.pi * num / den)
        return v

    def label(self) -> str:
        k, p = self.kind, self.params
        if k == BASIS:
            return f"|{p[0]}>"
        if k == PM:
            return f"|{p[0]}{'-' if p[2] else '+'}{p[1]}>"
        sym = {ALPHA: "a", BETA: "b", GAMMA: "g", KAPPA: "k"}[k]
        return f"|{sym}{p[0]}>"


@lru_cache(maxsize=None)
def _support(kind: str, d: int, params: tuple[int, ...]) -> tuple[int, ...]:
    if kind == BASIS:
        return (params[0],)
    if kind == ALPHA:
        return tuple(range(d))
    if kind == BETA:
        return tuple(range(d - 1))
    if kind == GAMMA:
        return tuple(range(1, d))
    if kind == KAPPA:
        return tuple(range(1, d - 1))
    return tuple(params[:2])


@lru_cache(maxsize=1 << 16)
def factor_inner(f: Factor, g: Factor) -> Cyclotomic:
    """<f|g> computed exactly (antilinear in f)."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    order = common_order((f.order, g.order))
    ef, eg = f.exponents(order), g.exponents(order)
    return Cyclotomic.from_exponents((eg[u] - ef[u] for u in ef if u in eg), order)


@dataclass(frozen=True)
class ProductState:
    factors: tuple[Factor, ...]
    block_id: str = ""
    indices: tuple[tuple[str, int], ...] = ()

    @property
    def n(self) -> int:
        return len(self.factors)

    def vector(self, parties: Sequence[int] | None = None) -> np.ndarray:
        """Dense amplitude vector over the listed parties (all by default)."""
        if parties is None:
            parties = range(self.n)
        v = np.ones(1, dtype=complex)
        for k in parties:
            v = np.kron(v, self.factors[k].vector())
        return v

    def label(self) -> str:
        return "".join(f.label() for f in self.factors)


def state_inner(u: ProductState, v: ProductState, parties: Iterable[int] | None = None) -> Cyclotomic:
    """Product of the local inner products over the given parties (all by default).

    An empty party set yields the scalar 1.
    """
    if u.n != v.n:
        raise ValueError("states have different party counts")
    parties = range(u.n) if parties is None else parties
    out = Cyclotomic.one()
    for k in parties:
        out = out * factor_inner(u.factors[k], v.factors[k])
        if out.is_zero():
            return out
    return out


@dataclass(frozen=True)
class Slot:
    """Pattern entry for one party of a block.

    A fixed basis vector has kind 'basis' and fixed=(u,). A family entry either
    iterates over `var` or pins its index in fixed=(i,). A 'pm' entry has
    fixed=(a, b) and iterates its sign over `var`.
    """

    kind: str
    fixed: tuple[int, ...] = ()
    var: str | None = None

    def values(self, dim: int) -> range | tuple[int, ...]:
        if self.var is None:
            return (None,)
        return range(family_size(self.kind, dim))

    def factor(self, dim: int, value) -> Factor:
        if self.kind == BASIS:
            return Factor(BASIS, dim, self.fixed)
        if self.kind == PM:
            return Factor(PM, dim, (self.fixed[0], self.fixed[1], value if value is not None else self.fixed[2]))
        return Factor(self.kind, dim, (value if value is not None else self.fixed[0],))

    def support(self, dim: int) -> frozenset[int]:
        if self.kind == BASIS:
            return frozenset(self.fixed)
        if self.kind == PM:
            return frozenset(self.fixed[:2])
        return frozenset(_support(self.kind, dim, (0,)))


@dataclass(frozen=True)
class Block:
    """A family of product states sharing one support pattern."""

    id: str
    dims: Dims
    pattern: tuple[Slot, ...]

    def __post_init__(self):
        if len(self.pattern) != self.dims.n:
            raise ValueError(f"block {self.id}: pattern has {len(self.pattern)} entries for {self.dims.n} parties")
        names = [s.var for s in self.pattern if s.var]
        if len(set(names)) != len(names):
            raise ValueError(f"block {self.id}: repeated iteration variable")

    @cached_property
    def supports(self) -> tuple[frozenset[int], ...]:
        return tuple(s.support(d) for s, d in zip(self.pattern, self.dims))

    @property
    def index_ranges(self) -> dict[str, int]:
        return {s.var: family_size(s.kind, d) for s, d in zip(self.pattern, self.dims) if s.var}

    @property
    def size(self) -> int:
        return int(np.prod(list(self.index_ranges.values()), dtype=np.int64))

    @cached_property
    def states(self) -> tuple[ProductState, ...]:
        slots = list(zip(self.pattern, self.dims))
        out = []
        for values in itertools.product(*(s.values(d) for s, d in slots)):
            factors = tuple(s.factor(d, v) for (s, d), v in zip(slots, values))
            idx = tuple((s.var, v) for (s, _), v in zip(slots, values) if s.var)
            out.append(ProductState(factors, self.id, idx))
        return tuple(out)

    def signature(self) -> tuple:
        """Pattern with iteration-variable names erased."""
        return tuple((s.kind, s.fixed, s.var is not None) for s in self.pattern)

    def describe(self) -> str:
        parts = []
        for s in self.pattern:
            if s.kind == BASIS:
                parts.append(f"|{s.fixed[0]}>")
            elif s.kind == PM:
                parts.append(f"|{s.fixed[0]}+-{s.fixed[1]}>")
            else:
                idx = s.var if s.var else str(s.fixed[0])
                parts.append(f"|{s.kind}_{idx}>")
        return "".join(parts)


_HAT = re.compile(r"^Hhat(\^[OE])?_\{(\d+),(\d+)\}$")


@dataclass(frozen=True)
class OPSInstance:
    dims: Dims
    blocks: tuple[Block, ...]
    family: str = "custom"
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        ids = [b.id for b in self.blocks]
        if len(set(ids)) != len(ids):
            raise ValueError("block ids must be unique")
        for b in self.blocks:
            if b.dims != self.dims:
                raise ValueError(f"block {b.id} has dims {b.dims.d}, instance has {self.dims.d}")

    @property
    def n(self) -> int:
        return self.dims.n

    @cached_property
    def _by_id(self) -> dict[str, Block]:
        return {b.id: b for b in self.blocks}

    @cached_property
    def block_ids(self) -> tuple[str, ...]:
        return tuple(b.id for b in self.blocks)

    @cached_property
    def states(self) -> tuple[ProductState, ...]:
        return tuple(s for b in self.blocks for s in b.states)

    def count(self) -> int:
        return sum(b.size for b in self.blocks)

    def block(self, ref: str) -> Block:
        ids = self.resolve(ref)
        if len(ids) != 1:
            raise KeyError(f"{ref!r} names {len(ids)} blocks, expected one")
        return self._by_id[ids[0]]

    def resolve(self, ref: str) -> list[str]:
        """Block ids named by a reference.

        Accepts a block id, the 'S_' spelling of the small-dimension sets
        (S_7 for H_7, S_{2,3} for H_{2,3}), and 'Hhat^O_{r,t}' / 'Hhat^E_{r,t}'
        for the union over p of the H_{pr,t} blocks.
        """
        if ref in self._by_id:
            return [ref]
        if ref.startswith("S_") and "H_" + ref[2:] in self._by_id:
            return ["H_" + ref[2:]]
        m = _HAT.match(ref)
        if m:
            sup = m.group(1) or ""
            r, t = m.group(2), m.group(3)
            pat = re.compile(rf"^H{re.escape(sup)}_\{{(\d+){r},{t}\}}$")
            out = [b for b in self.block_ids if pat.match(b)]
            if out:
                return out
        raise KeyError(f"unknown block reference {ref!r}")

    def resolve_all(self, refs: Iterable[str]) -> list[str]:
        seen, out = set(), []
        for ref in refs:
            for b in self.resolve(ref):
                if b not in seen:
                    seen.add(b)
                    out.append(b)
        return out

    def subset(self, refs: Iterable[str]) -> OPSInstance:
        keep = set(self.resolve_all(refs))
        return OPSInstance(self.dims, tuple(b for b in self.blocks if b.id in keep), self.family, dict(self.meta))


def permute_parties(ops: OPSInstance, perm: Sequence[int]) -> OPSInstance:
    """Relabel parties: old party k becomes new party perm[k] (0-based).

    Block ids are kept; iteration variable names are carried along unchanged.
    """
    n = ops.n
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of {n} parties: {perm}")
    new_d = [0] * n
    for k, pk in enumerate(perm):
        new_d[pk] = ops.dims[k]
    dims = Dims(tuple(new_d))
    blocks = []
    for b in ops.blocks:
        pattern = [None] * n
        for k, pk in enumerate(perm):
            pattern[pk] = b.pattern[k]
        blocks.append(Block(b.id, dims, tuple(pattern)))
    return OPSInstance(dims, tuple(blocks), ops.family, dict(ops.meta))


def factor_tables(ops: OPSInstance):
    """Per party: integer factor ids for every state and the exact local
    orthogonality table between distinct factors.

    Returns (ids, ortho) with ids of shape (N, n) and ortho[k] a boolean
    matrix whose [a, b] entry says <f_a|f_b> == 0 exactly at party k.
    """
    states = ops.states
    ids = np.zeros((len(states), ops.n), dtype=np.int64)
    ortho = []
    for k in range(ops.n):
        table: dict[Factor, int] = {}
        for s_idx, s in enumerate(states):
            ids[s_idx, k] = table.setdefault(s.factors[k], len(table))
        facs = list(table)
        m = np.zeros((len(facs), len(facs)), dtype=bool)
        for a, fa in enumerate(facs):
            for b in range(a, len(facs)):
                m[a, b] = m[b, a] = factor_inner(fa, facs[b]).is_zero()
        ortho.append(m)
    return ids, ortho


@dataclass
class OrthogonalityReport:
    n_states: int
    n_pairs: int
    failures: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_orthogonality(ops: OPSInstance, max_failures: int = 20) -> OrthogonalityReport:
    """Exact check that all distinct states of the instance are orthogonal.

    A product of cyclotomic integers vanishes iff one factor does, so a pair is
    orthogonal iff some party carries exactly orthogonal local factors.
    """
    ids, ortho = factor_tables(ops)
    N = len(ids)
    failures = []
    chunk = max(1, 2_000_000 // max(N, 1))
    for lo in range(0, N, chunk):
        hi = min(N, lo + chunk)
        orth = np.zeros((hi - lo, N), dtype=bool)
        for k in range(ops.n):
            orth |= ortho[k][ids[lo:hi, k][:, None], ids[None, :, k]]
        rows, cols = np.nonzero(~orth)
        for i, j in zip(rows + lo, cols):
            if i < j and len(failures) < max_failures:
                failures.append((int(i), int(j)))
    return OrthogonalityReport(N, N * (N - 1) // 2, failures)

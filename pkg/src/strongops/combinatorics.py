"""Projection-set calculus for deciding when every orthogonality-preserving
measurement on a party group X must be trivial.

Everything here depends only on the per-party computational supports of the
blocks, never on amplitudes. Blocks are referred to by id; `chosen` restricts
attention to a subset of the instance's blocks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .states import Block, OPSInstance

DEFAULT_MAX_UNION = 3


@dataclass(frozen=True)
class PartySubset:
    """A non-empty set of 0-based party indices out of n."""

    parties: tuple[int, ...]
    n: int

    def __post_init__(self):
        ps = tuple(sorted(set(int(k) for k in self.parties)))
        object.__setattr__(self, "parties", ps)
        if not ps:
            raise ValueError("party subset must be non-empty")
        if ps[0] < 0 or ps[-1] >= self.n:
            raise ValueError(f"parties {ps} out of range for n = {self.n}")

    @classmethod
    def one_based(cls, parties: Iterable[int], n: int) -> PartySubset:
        return cls(tuple(k - 1 for k in parties), n)

    def complement(self) -> PartySubset | None:
        rest = tuple(k for k in range(self.n) if k not in self.parties)
        return PartySubset(rest, self.n) if rest else None

    def label(self) -> str:
        return "X" + "".join(str(k + 1) for k in self.parties)

    def __iter__(self):
        return iter(self.parties)

    def __len__(self):
        return len(self.parties)


def as_subset(X, n: int) -> PartySubset:
    return X if isinstance(X, PartySubset) else PartySubset(tuple(X), n)


@dataclass(frozen=True)
class ProjectionSet:
    """Cartesian product of per-party index sets, listed in party order."""

    parties: tuple[int, ...]
    supports: tuple[frozenset[int], ...]

    @cached_property
    def tuples(self) -> frozenset[tuple[int, ...]]:
        return frozenset(itertools.product(*(sorted(s) for s in self.supports)))

    def __len__(self):
        return int(np.prod([len(s) for s in self.supports], dtype=np.int64))

    def __contains__(self, point) -> bool:
        return all(x in s for x, s in zip(point, self.supports))

    def intersects(self, other: ProjectionSet) -> bool:
        return all(a & b for a, b in zip(self.supports, other.supports))

    def intersection(self, other: ProjectionSet) -> ProjectionSet:
        return ProjectionSet(self.parties, tuple(a & b for a, b in zip(self.supports, other.supports)))

    def issubset(self, other: ProjectionSet) -> bool:
        if len(self) == 0:
            return True
        return all(a <= b for a, b in zip(self.supports, other.supports))


@lru_cache(maxsize=1 << 16)
def _projection(block: Block, parties: tuple[int, ...]) -> ProjectionSet:
    return ProjectionSet(parties, tuple(block.supports[k] for k in parties))


def projection_set(block: Block, X) -> ProjectionSet:
    parties = tuple(X.parties) if isinstance(X, PartySubset) else tuple(sorted(X))
    return _projection(block, parties)


def basis_tuples(ops: OPSInstance, X) -> list[tuple[int, ...]]:
    """Computational basis of party group X in lexicographic order."""
    X = as_subset(X, ops.n)
    return list(itertools.product(*(range(ops.dims[k]) for k in X)))


class Projections:
    """Cached X / complement projections of a chosen block subset."""

    def __init__(self, ops: OPSInstance, X, chosen: Iterable[str] | None = None):
        self.ops = ops
        self.X = as_subset(X, ops.n)
        Xbar = self.X.complement()
        if Xbar is None:
            raise ValueError("X must be a proper subset of the parties")
        self.Xbar = Xbar
        self.chosen = ops.block_ids if chosen is None else tuple(ops.resolve_all(chosen))
        self.px = {b: projection_set(ops.block(b), self.X) for b in self.chosen}
        self.pxbar = {b: projection_set(ops.block(b), self.Xbar) for b in self.chosen}
        self.order = {b: i for i, b in enumerate(self.chosen)}

    @cached_property
    def basis(self) -> list[tuple[int, ...]]:
        return basis_tuples(self.ops, self.X)

    @cached_property
    def _x_index(self) -> dict[tuple[int, ...], int]:
        return {x: i for i, x in enumerate(self.basis)}

    @cached_property
    def _masks(self):
        """(A, B): A[t, x] = x in S_t^X, B[t, y] = y in S_t^Xbar (y flattened)."""
        ops = self.ops
        A = np.zeros((len(self.chosen), len(self.basis)), dtype=bool)
        bar_dims = [ops.dims[k] for k in self.Xbar]
        B = np.zeros((len(self.chosen), int(np.prod(bar_dims))), dtype=bool)
        for i, b in enumerate(self.chosen):
            for x in self.px[b].tuples:
                A[i, self._x_index[x]] = True
            ind = np.ones(1, dtype=bool)
            for s, dk in zip(self.pxbar[b].supports, bar_dims):
                v = np.zeros(dk, dtype=bool)
                v[list(s)] = True
                ind = np.logical_and.outer(ind, v).ravel()
            B[i] = ind
        return A, B

    def sort(self, ids: Iterable[str]) -> list[str]:
        return sorted(ids, key=self.order.__getitem__)

    # --- PI sets -----------------------------------------------------------

    def is_pi_set(self, r: str, T: Sequence[str]) -> bool:
        if not T:
            raise ValueError("a PI set must be non-empty")
        if r in T:
            raise ValueError(f"block {r} cannot belong to its own PI set")
        covered = set().union(*(self.px[t].tuples for t in T))
        if not self.px[r].tuples <= covered:
            return False
        return all(frozenset.intersection(*(self.pxbar[t].supports[i] for t in T)) for i in range(len(self.Xbar)))

    def _candidates(self, r: str) -> list[str]:
        return [t for t in self.chosen if t != r and self.px[t].intersects(self.px[r])]

    def iter_pi_sets(self, r: str, max_union: int = DEFAULT_MAX_UNION):
        """PI sets of r of size <= max_union, smallest first, then in block order.

        Only blocks whose X-projection meets that of r are considered; any PI
        set stays one after dropping the others.
        """
        cand = self._candidates(r)
        for size in range(1, max_union + 1):
            for T in itertools.combinations(cand, size):
                if self.is_pi_set(r, T):
                    yield list(T)

    def find_pi_set(self, r: str, max_union: int = DEFAULT_MAX_UNION) -> list[str] | None:
        return next(self.iter_pi_sets(r, max_union), None)

    def _cover(self, r: str) -> np.ndarray:
        """cover[y] is True when the blocks holding complement point y cover S_r^X."""
        A, B = self._masks
        i = self.order[r]
        keep = np.ones(len(self.chosen), dtype=bool)
        keep[i] = False
        need = A[i]
        # covered[x, y]: some kept block holds both x and y
        covered = (A[keep].T.astype(np.int64) @ B[keep].astype(np.int64)) > 0
        return covered[need].all(axis=0)

    def maximal_pi_set(self, r: str, through: str | None = None) -> list[str] | None:
        """A PI set of r found exhaustively (no size bound), or None if none exists.

        With `through`, the PI set must contain that block. The result is
        pruned greedily so that dropping any member breaks it.
        """
        _, B = self._masks
        ok = self._cover(r)
        if through is not None:
            ok = ok & B[self.order[through]]
        ys = np.flatnonzero(ok)
        if ys.size == 0:
            return None
        y = ys[0]
        T = [t for t in self._candidates(r) if B[self.order[t], y]]
        for t in list(reversed(T)):
            if t == through or len(T) == 1:
                continue
            trial = [u for u in T if u != t]
            if self.is_pi_set(r, trial):
                T = trial
        return T

    def pi_set(self, r: str, max_union: int = DEFAULT_MAX_UNION) -> list[str] | None:
        """Smallest PI set within max_union, else an exhaustively found one."""
        return self.find_pi_set(r, max_union) or self.maximal_pi_set(r)

    # --- UPI ---------------------------------------------------------------

    def upi_candidates(self, r: str) -> list[str]:
        return [t for t in self.chosen if t != r and len(self.px[r].intersection(self.px[t])) == 1]

    def find_upi(self, r: str) -> tuple[str, list[str]] | None:
        """(witness t, PI set containing t) with |S_r^X & S_t^X| = 1, or None."""
        for t in self.upi_candidates(r):
            T = self.maximal_pi_set(r, through=t)
            if T is not None:
                return t, T
        return None

    # --- set sequence ------------------------------------------------------

    def build_sequence(self, chosen: Iterable[str] | None = None) -> list[list[str]] | None:
        """Layered sequence: level 1 holds every block with a UPI set, each next
        level every unassigned block meeting the previous level on X."""
        pool = self.sort(self.chosen if chosen is None else chosen)
        first = [b for b in pool if self.find_upi(b) is not None]
        if not first:
            return None
        levels = [first]
        left = [b for b in pool if b not in set(first)]
        while left:
            nxt = [b for b in left if any(self.px[b].intersects(self.px[a]) for a in levels[-1])]
            if not nxt:
                return None
            levels.append(nxt)
            left = [b for b in left if b not in set(nxt)]
        return levels

    # --- condition (iii) ---------------------------------------------------

    def witness_holds(self, b: str, rx: str, rp: str) -> bool:
        """S_rx^X & S_b^X contains S_b^X & S_rp^X, the latter non-empty."""
        inner = self.px[b].intersection(self.px[rp])
        if len(inner) == 0:
            return False
        return inner.issubset(self.px[rx].intersection(self.px[b]))

    def find_witness(self, b: str, previous: Sequence[str]) -> tuple[str, str, list[str]] | None:
        """(r_x, r', PI set of b holding r') for a block b of a later level."""
        for rp in self._candidates(b):
            for rx in previous:
                if self.witness_holds(b, rx, rp):
                    T = self.maximal_pi_set(b, through=rp)
                    if T is not None:
                        return rx, rp, T
        return None

    # --- condition (i) -----------------------------------------------------

    def tail_cover(self, ordering: Sequence[tuple[int, ...]] | None = None):
        """Evaluate condition (i).

        Returns (ok, full_cover, first_bad) where full_cover says the covering
        set equals the whole basis for every basis element (order-free case)
        and first_bad is the first failing position in `ordering`.
        """
        basis = self.basis
        if ordering is None:
            ordering = basis
        else:
            ordering = [tuple(x) for x in ordering]
            if sorted(ordering) != sorted(basis) or len(set(ordering)) != len(basis):
                raise ValueError("ordering must be a permutation of the X basis")
        full = frozenset(basis)
        cover_of = {}
        for x in basis:
            holders = [v for v in self.chosen if x in self.px[v]]
            reach = set()
            for s in self.chosen:
                if any(self.pxbar[s].intersects(self.pxbar[v]) for v in holders):
                    reach |= self.px[s].tuples
            cover_of[x] = frozenset(reach)
        full_cover = all(c == full for c in cover_of.values())
        first_bad = None
        for pos, x in enumerate(ordering[:-1]):
            if not frozenset(ordering[pos:]) <= cover_of[x]:
                first_bad = x
                break
        return first_bad is None, full_cover, first_bad

    # --- condition (iv) ----------------------------------------------------

    def components(self, chosen: Iterable[str] | None = None) -> list[list[str]]:
        pool = self.sort(self.chosen if chosen is None else chosen)
        parent = {b: b for b in pool}

        def find(b):
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            return b

        for a, b in itertools.combinations(pool, 2):
            if self.px[a].intersects(self.px[b]):
                parent[find(a)] = find(b)
        groups: dict[str, list[str]] = {}
        for b in pool:
            groups.setdefault(find(b), []).append(b)
        return list(groups.values())

    def spanning_tree(self) -> tuple[list[str], dict[str, int | None]]:
        """Breadth-first spanning tree of the intersection graph.

        Returns the visit order and, per block, the position of its parent in
        that order (None for the root and for unreachable blocks).
        """
        order = [self.chosen[0]]
        parents: dict[str, int | None] = {self.chosen[0]: None}
        head = 0
        while head < len(order):
            a = order[head]
            for b in self.chosen:
                if b not in parents and self.px[a].intersects(self.px[b]):
                    parents[b] = head
                    order.append(b)
            head += 1
        return order, parents

    def covers_basis(self, ids: Iterable[str]) -> bool:
        return set().union(*(self.px[b].tuples for b in ids)) == set(self.basis)


# --- functional surface ------------------------------------------------------


def is_pi_set(r: str, T: Iterable[str], X, ops: OPSInstance, chosen=None) -> bool:
    view = Projections(ops, X, chosen)
    return view.is_pi_set(ops.resolve(r)[0], ops.resolve_all(T))


def find_pi_set(r: str, X, ops: OPSInstance, max_union: int = DEFAULT_MAX_UNION, chosen=None) -> list[str] | None:
    return Projections(ops, X, chosen).find_pi_set(ops.resolve(r)[0], max_union)


def has_upi(r: str, X, ops: OPSInstance, chosen=None) -> str | None:
    found = Projections(ops, X, chosen).find_upi(ops.resolve(r)[0])
    return found[0] if found else None


def build_sequence(chosen: Iterable[str], X, ops: OPSInstance) -> list[list[str]] | None:
    return Projections(ops, X, chosen).build_sequence()


def check_condition_i(chosen: Iterable[str], X, ops: OPSInstance, ordering=None) -> bool:
    return Projections(ops, X, chosen).tail_cover(ordering)[0]


def check_connected(chosen: Iterable[str], X, ops: OPSInstance) -> bool:
    return len(Projections(ops, X, chosen).components()) == 1


# --- full check ----------------------------------------------------------------


@dataclass
class ConditionResult:
    ok: bool
    detail: str = ""


@dataclass
class ZgyReport:
    """Outcome of the four-condition check on one (chosen subset, X)."""

    X: tuple[int, ...]
    chosen: list[str]
    mode: str
    conditions: dict[str, ConditionResult]
    pi_sets: dict[str, list[str]] = field(default_factory=dict)
    sequence: list[list[str]] | None = None
    witnesses: dict[str, tuple[str, str]] = field(default_factory=dict)
    order_independent: bool = False
    covers_basis: bool = False
    route: str = "direct"

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.conditions.values())

    @property
    def label(self) -> str:
        return "X" + "".join(str(k + 1) for k in self.X)

    def first_failure(self) -> str | None:
        for name, c in self.conditions.items():
            if not c.ok:
                return f"condition ({name}): {c.detail}"
        return None

    def to_certificate(self, family: str, n: int, view: Projections):
        """Package search results as a replayable certificate."""
        from .certificates import Certificate, ChainLink

        order, parents = view.spanning_tree()
        chain = [ChainLink(b, parents[b]) for b in order]
        return Certificate(
            family, self.X, list(self.chosen), dict(self.pi_sets), [list(g) for g in self.sequence or []],
            condition_iii=dict(self.witnesses), chain=chain, n=n, notes="found by search",
        )


def _condition_i(view: Projections, ordering=None) -> tuple[ConditionResult, bool]:
    ok, full, bad = view.tail_cover(ordering)
    if ok:
        detail = "covering set is the whole basis for every i" if full else "tail sets covered in the given order"
    else:
        detail = f"tail set not covered at basis tuple {bad}"
    return ConditionResult(ok, detail), full


def _search(view: Projections, max_union: int) -> ZgyReport:
    conds: dict[str, ConditionResult] = {}
    cond_i, full = _condition_i(view)
    conds["i"] = cond_i

    pis = {}
    missing = None
    for b in view.chosen:
        T = view.pi_set(b, max_union)
        if T is None and missing is None:
            missing = b
        pis[b] = T
    conds["ii"] = ConditionResult(missing is None, "every block has a PI set" if missing is None else f"no PI set for {missing}")

    seq = view.build_sequence()
    witnesses = {}
    if seq is None:
        conds["iii"] = ConditionResult(False, "no set sequence exists")
    else:
        bad = None
        for x in range(1, len(seq)):
            for b in seq[x]:
                found = view.find_witness(b, seq[x - 1])
                if found is None:
                    bad = bad or b
                    continue
                rx, rp, T = found
                witnesses[b] = (rx, rp)
                if rp not in (pis.get(b) or []):
                    pis[b] = T
        conds["iii"] = ConditionResult(bad is None, f"{len(seq)} level(s)" if bad is None else f"no witness for {bad}")

    comps = view.components()
    conds["iv"] = ConditionResult(len(comps) == 1, "connected" if len(comps) == 1 else f"{len(comps)} components, e.g. {comps[1][0]} apart from {comps[0][0]}")
    return ZgyReport(view.X.parties, list(view.chosen), "search", conds, {b: T for b, T in pis.items() if T},
                     seq, witnesses, full, view.covers_basis(view.chosen))


def _expand(ops: OPSInstance, ref) -> list[str]:
    """Ids named by a reference; a list of references names their union."""
    if isinstance(ref, (list, tuple)):
        return [b for r in ref for b in _expand(ops, r)]
    try:
        return ops.resolve(ref)
    except KeyError as exc:
        raise ValueError(f"certificate references unknown block {ref!r}") from exc


def _replay(view: Projections, cert) -> ZgyReport:
    ops = view.ops
    conds: dict[str, ConditionResult] = {}
    cond_i, full = _condition_i(view)
    conds["i"] = cond_i
    chosen = set(view.chosen)

    # (ii) declared PI sets
    pis: dict[str, list[str]] = {}
    for key, refs in cert.pi_map.items():
        T = [t for ref in refs for t in _expand(ops, ref)]
        for b in _expand(ops, key):
            pis[b] = T
    bad = None
    for b in view.chosen:
        T = pis.get(b)
        if not T:
            bad = bad or f"no PI set declared for {b}"
        elif not set(T) <= chosen or b in T:
            bad = bad or f"PI set of {b} leaves the chosen subset or contains {b}"
        elif not view.is_pi_set(b, T):
            bad = bad or f"declared PI set of {b} fails"
    conds["ii"] = ConditionResult(bad is None, bad or f"{len(view.chosen)} declared PI sets hold")

    # (iii) sequence and witnesses
    seq = [view.sort({b for ref in level for b in _expand(ops, ref)}) for level in cert.sequence]
    flat = [b for level in seq for b in level]
    problems = []
    if len(flat) != len(set(flat)) or set(flat) != chosen:
        problems.append("levels are not a partition of the chosen blocks")
    upi_of = {}
    for key, ref in cert.upi_witnesses.items():
        for b in _expand(ops, key):
            upi_of[b] = _expand(ops, ref)
    first = seq[0] if seq else []
    for b in first:
        cands = upi_of.get(b) or pis.get(b, [])
        if not any(t in pis.get(b, []) and len(view.px[b].intersection(view.px[t])) == 1 for t in cands):
            if view.find_upi(b) is None:
                problems.append(f"{b} is in the first level but has no UPI set")
                break
    for level in seq[1:]:
        hit = next((b for b in level if view.find_upi(b) is not None), None)
        if hit:
            problems.append(f"{hit} has a UPI set but is not in the first level")
            break
    witnesses = {}
    wit = {}
    for key, (rx, rp) in cert.condition_iii.items():
        for b in _expand(ops, key):
            wit[b] = (_expand(ops, rx), _expand(ops, rp))
    for x in range(1, len(seq)):
        for b in seq[x]:
            if not any(view.px[b].intersects(view.px[a]) for a in seq[x - 1]):
                problems.append(f"{b} meets no block of level {x}")
            if b not in wit:
                problems.append(f"missing condition (iii) witness for {b}")
                continue
            rxs, rps = wit[b]
            pair = next(((rx, rp) for rx in rxs for rp in rps
                         if rx in seq[x - 1] and rp in pis.get(b, []) and view.witness_holds(b, rx, rp)), None)
            if pair is None:
                problems.append(f"condition (iii) witness for {b} fails")
            else:
                witnesses[b] = pair
    conds["iii"] = ConditionResult(not problems, problems[0] if problems else f"{len(seq)} level(s) replayed")

    # (iv) connectivity, plus the certificate's chain when given
    comps = view.components()
    problems = [] if len(comps) == 1 else [f"{len(comps)} components"]
    if cert.chain:
        groups = [_expand(ops, link.ref) for link in cert.chain]
        for link, members in zip(cert.chain, groups):
            if link.parent is None:
                continue
            if not any(view.px[a].intersects(view.px[b]) for a in members for b in groups[link.parent]):
                problems.append(f"chain link {link.ref} does not meet {cert.chain[link.parent].ref}")
        if not view.covers_basis([b for g in groups for b in g]):
            problems.append("chain does not cover the basis")
    conds["iv"] = ConditionResult(not problems, problems[0] if problems else "connected")
    return ZgyReport(view.X.parties, list(view.chosen), "certificate", conds, pis, seq, witnesses, full,
                     view.covers_basis(view.chosen))


def check_zgy(chosen, X, ops: OPSInstance, cert=None, max_union: int = DEFAULT_MAX_UNION) -> ZgyReport:
    """Run conditions (i)-(iv); replay `cert` when given, otherwise search."""
    if cert is not None:
        X = cert.bipartition if X is None else X
        if tuple(as_subset(X, ops.n).parties) != tuple(cert.bipartition):
            raise ValueError(f"certificate is for {cert.label}, not X = {X}")
        chosen = [b for ref in cert.chosen for b in _expand(ops, ref)] if chosen is None else chosen
        return _replay(Projections(ops, X, chosen), cert)
    return _search(Projections(ops, X, chosen), max_union)


# --- symmetry discharge and all-pairs verification -----------------------------


class MissingRouteError(LookupError):
    """A pair has neither a certificate nor a symmetry image of one."""


@dataclass(frozen=True)
class Symmetry:
    """Party permutation (old party k -> perm[k]) with per-party basis relabelings.

    relabel[j] maps local indices of the source party onto party j.
    """

    perm: tuple[int, ...]
    relabel: tuple[tuple[int, ...], ...] | None = None

    def map_supports(self, supports: Sequence[frozenset[int]]) -> tuple[frozenset[int], ...]:
        n = len(self.perm)
        inv = [0] * n
        for k, j in enumerate(self.perm):
            inv[j] = k
        out = []
        for j in range(n):
            s = supports[inv[j]]
            out.append(frozenset(self.relabel[j][x] for x in s) if self.relabel else s)
        return tuple(out)


def block_map(ops: OPSInstance, sym: Symmetry) -> dict[str, str] | None:
    """Block id -> block id induced by sym on supports, or None if not an automorphism."""
    target = {tuple(b.supports): b.id for b in ops.blocks}
    out = {}
    for b in ops.blocks:
        img = target.get(sym.map_supports(b.supports))
        if img is None:
            return None
        out[b.id] = img
    return out if len(set(out.values())) == len(out) else None


def _dihedral(n: int):
    for s in range(n):
        yield tuple((k + s) % n for k in range(n))
    for s in range(n):
        yield tuple((s - k) % n for k in range(n))


def _relabelings(ops: OPSInstance, perm: tuple[int, ...], limit: int = 200_000):
    """Per-party relabelings compatible with each party's family of supports."""
    inv = {j: k for k, j in enumerate(perm)}
    options = []
    for j in range(ops.n):
        k = inv[j]
        if ops.dims[k] != ops.dims[j]:
            return
        src = {b.supports[k] for b in ops.blocks}
        dst = {b.supports[j] for b in ops.blocks}
        options.append([s for s in itertools.permutations(range(ops.dims[j]))
                        if {frozenset(s[x] for x in S) for S in src} == dst])
    if np.prod([len(o) for o in options], dtype=float) > limit:
        return
    yield from itertools.product(*options)


def find_symmetry(ops: OPSInstance, src_X, dst_X, relabel: bool = True) -> tuple[Symmetry, dict[str, str]] | None:
    """A support automorphism carrying party group src_X onto dst_X.

    Dihedral party permutations are tried first; for n <= 5 every permutation
    is tried, with per-party basis relabelings when `relabel` is set.
    """
    src, dst = set(src_X), set(dst_X)
    perms = list(dict.fromkeys(_dihedral(ops.n)))
    if ops.n <= 5:
        perms += [p for p in itertools.permutations(range(ops.n)) if p not in set(perms)]
    for perm in perms:
        if {perm[k] for k in src} != dst:
            continue
        sym = Symmetry(perm)
        bm = block_map(ops, sym)
        if bm is not None:
            return sym, bm
    if relabel and ops.n <= 5:
        for perm in perms:
            if {perm[k] for k in src} != dst:
                continue
            for rel in _relabelings(ops, perm):
                sym = Symmetry(perm, rel)
                bm = block_map(ops, sym)
                if bm is not None:
                    return sym, bm
    return None


def map_certificate(cert, ops: OPSInstance, sym: Symmetry, bm: dict[str, str]):
    """Image of a certificate under a symmetry; references become id lists."""
    from .certificates import Certificate, ChainLink

    def ids(ref):
        return [bm[b] for b in _expand(ops, ref)]

    pi = {}
    for key, refs in cert.pi_map.items():
        T = [t for r in refs for t in ids(r)]
        for b in ids(key):
            pi[b] = T
    wit = {}
    for key, (rx, rp) in cert.condition_iii.items():
        for b in ids(key):
            wit[b] = (ids(rx), ids(rp))
    upi = {}
    for key, ref in cert.upi_witnesses.items():
        for b in ids(key):
            upi[b] = ids(ref)
    mapped = Certificate(
        cert.family,
        tuple(sorted(sym.perm[k] for k in cert.bipartition)),
        [b for r in cert.chosen for b in ids(r)],
        pi,
        [[b for r in level for b in ids(r)] for level in cert.sequence],
        upi_witnesses=upi,
        condition_iii=wit,
        chain=[ChainLink(ids(link.ref), link.parent) for link in cert.chain],
        n=cert.n, min_dim=cert.min_dim, max_dim=cert.max_dim,
        notes=f"image of {cert.label} under party map {tuple(k + 1 for k in sym.perm)}",
    )
    return mapped


@dataclass
class PairReport:
    pair: tuple[int, int]
    report: ZgyReport | None
    route: str
    source: str = ""

    @property
    def passed(self) -> bool:
        return self.report is not None and self.report.passed


def _pairs(n: int):
    return list(itertools.combinations(range(n), 2))


def verify_strong_nonlocality(ops: OPSInstance, mode: str = "certificates", certificates=None,
                              max_union: int = DEFAULT_MAX_UNION, pairs=None) -> list[PairReport]:
    """Check every merged pair {k, l}.

    In certificate mode a pair is replayed from a matching certificate, or from
    the image of one under a support automorphism; the image is re-verified
    from scratch. Search mode ignores certificates.
    """
    pairs = _pairs(ops.n) if pairs is None else [tuple(sorted(p)) for p in pairs]
    if mode == "search":
        return [PairReport(p, check_zgy(None, p, ops, max_union=max_union), "search") for p in pairs]
    if mode != "certificates":
        raise ValueError(f"unknown mode {mode!r}")
    if certificates is None:
        from .certificates import shipped_certificates

        certificates = shipped_certificates()
    if not isinstance(certificates, dict):
        certificates = {c.label: c for c in certificates}
    usable = [(name, c) for name, c in certificates.items() if c.applies_to(ops)]
    out = []
    missing = []
    for p in pairs:
        direct = next(((name, c) for name, c in usable if tuple(c.bipartition) == p), None)
        if direct:
            out.append(PairReport(p, check_zgy(None, p, ops, direct[1]), "certificate", direct[0]))
            continue
        routes = ((name, c, relabel) for relabel in (False, True) for name, c in usable)
        for name, c, relabel in routes:
            found = find_symmetry(ops, c.bipartition, p, relabel=relabel)
            if found is None:
                continue
            sym, bm = found
            mapped = map_certificate(c, ops, sym, bm)
            out.append(PairReport(p, check_zgy(None, p, ops, mapped), "symmetry", f"{name} via {mapped.notes}"))
            break
        else:
            missing.append(p)
    if missing:
        labels = ", ".join(f"X{a + 1}{b + 1}" for a, b in missing)
        raise MissingRouteError(f"no certificate or symmetry route for {labels}")
    return out

"""Brute-force check that orthogonality preservation forces a measurement
element on a party group X to be a multiple of the identity.

For every pair of states whose complement parts are not orthogonal the element
E must satisfy <a|E|b> = 0 on the X parts. E is Hermitian and is written in d_X**2
real coordinates:

    x[p*d + p]  = E[p, p]
    x[p*d + q]  = Re E[p, q]      (p < q)
    x[q*d + p]  = Im E[p, q]      (p < q)

Positivity is not imposed, so a non-trivial solution space only means the
linear constraints alone do not force triviality.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cyclotomic import ResourceLimitError
from .states import OPSInstance, factor_tables

DEFAULT_DIM_CAP = 4096
DEFAULT_TOL = 1e-9
DEFAULT_MARGIN = 10.0
IDENTITY_TOL = 1e-12

TRIVIAL, NONTRIVIAL, INCONCLUSIVE = "Trivial", "NontrivialSpace", "Inconclusive"


def _subset(X, n: int) -> tuple[int, ...]:
    X = tuple(sorted(set(int(k) for k in X)))
    if not X or X[0] < 0 or X[-1] >= n:
        raise ValueError(f"bad party subset {X} for n = {n}")
    if len(X) == n:
        raise ValueError("X must be a proper subset of the parties")
    return X


@dataclass
class ConstraintSystem:
    """Constraint rows for one party group, generated lazily from state pairs.

    `pairs` lists (i, j), i < j, of states whose complement parts overlap;
    each contributes the real and imaginary parts of <a_i|E|a_j> = 0.
    """

    X: tuple[int, ...]
    dim: int
    pairs: np.ndarray
    xvecs: np.ndarray
    xindex: np.ndarray
    labels: list[str]
    exact_parts: list = field(default_factory=list, repr=False)
    order: int = 1

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_coords(self) -> int:
        return self.dim * self.dim

    def coefficients(self, lo: int, hi: int) -> np.ndarray:
        """Complex coefficient vectors (over the real coordinates) of pairs lo:hi."""
        d = self.dim
        a = self.xvecs[self.xindex[self.pairs[lo:hi, 0]]]
        b = self.xvecs[self.xindex[self.pairs[lo:hi, 1]]]
        M = np.conj(a)[:, :, None] * b[:, None, :]
        Mt = np.swapaxes(M, 1, 2)
        upper = np.triu(np.ones((d, d), dtype=bool), 1)
        C = np.where(upper, M + Mt, np.where(upper.T, 1j * (Mt - M), M))
        return C.reshape(hi - lo, d * d)

    def iter_rows(self, chunk: int = 4096):
        """Yield (real rows, generating pair per row) in deterministic order."""
        for lo in range(0, self.n_pairs, chunk):
            hi = min(self.n_pairs, lo + chunk)
            C = self.coefficients(lo, hi)
            im_needed = np.abs(C.imag).max(axis=1) > 1e-14
            rows = np.concatenate([C.real, C.imag[im_needed]])
            prov = np.concatenate([self.pairs[lo:hi], self.pairs[lo:hi][im_needed]])
            yield rows, prov

    def matrix(self) -> np.ndarray:
        parts = [rows for rows, _ in self.iter_rows()]
        return np.concatenate(parts) if parts else np.zeros((0, self.n_coords))

    def provenance(self) -> list[tuple[str, str]]:
        return [(self.labels[i], self.labels[j]) for _, prov in self.iter_rows() for i, j in prov]


def assemble_constraints(ops: OPSInstance, X, chosen=None, dim_cap: int = DEFAULT_DIM_CAP) -> ConstraintSystem:
    """Collect the state pairs that constrain E on X; gating is exact."""
    if chosen is not None:
        ops = ops.subset(chosen)
    X = _subset(X, ops.n)
    dim = math.prod(ops.dims[k] for k in X)
    if dim > dim_cap:
        raise ResourceLimitError(f"d_X = {dim} exceeds cap {dim_cap}")
    states = ops.states
    ids, ortho = factor_tables(ops)
    Xbar = [k for k in range(ops.n) if k not in X]

    # pairs whose complement parts are not exactly orthogonal
    N = len(states)
    pair_parts = []
    chunk = max(1, 2_000_000 // max(N, 1))
    for lo in range(0, N, chunk):
        hi = min(N, lo + chunk)
        orth = np.zeros((hi - lo, N), dtype=bool)
        for k in Xbar:
            orth |= ortho[k][ids[lo:hi, k][:, None], ids[None, :, k]]
        i, j = np.nonzero(~orth)
        i = i + lo
        keep = i < j
        pair_parts.append(np.stack([i[keep], j[keep]], axis=1))
    pairs = np.concatenate(pair_parts) if pair_parts else np.zeros((0, 2), dtype=np.int64)

    # numeric X parts, one per distinct factor combination
    combos, xindex = np.unique(ids[:, list(X)], axis=0, return_inverse=True)
    xindex = np.asarray(xindex).reshape(-1)
    first = np.zeros(len(combos), dtype=np.int64)
    first[xindex[::-1]] = np.arange(N)[::-1]
    xvecs = np.zeros((len(combos), dim), dtype=complex)
    exact_parts = []
    for c, s_idx in enumerate(first):
        facs = [states[s_idx].factors[k] for k in X]
        v = np.ones(1, dtype=complex)
        for f in facs:
            v = np.kron(v, f.vector())
        xvecs[c] = v
        exact_parts.append(facs)
    return ConstraintSystem(X, dim, pairs, xvecs, xindex, [s.label() for s in states], exact_parts,
                            ops.dims.global_order)


def to_hermitian(x: np.ndarray, d: int) -> np.ndarray:
    """Hermitian matrix from its real coordinate vector."""
    X = x.reshape(d, d)
    up = np.triu(X, 1)
    lo = np.tril(X, -1).T
    E = np.diag(np.diag(X)).astype(complex)
    E += up + 1j * lo
    E += (up - 1j * lo).T
    return E


@dataclass
class TrivialityReport:
    X: tuple[int, ...]
    dim: int
    n_rows: int
    solution_dim: int
    spectral_gap: float
    verdict: str
    residual_of_identity: float
    singular_values: np.ndarray = field(repr=False)
    basis: list[np.ndarray] = field(default_factory=list, repr=False)
    exact_nullity: int | None = None
    exact_prime: int | None = None
    seconds: float = 0.0

    @property
    def trivial(self) -> bool:
        return self.verdict == TRIVIAL

    @property
    def label(self) -> str:
        return "X" + "".join(str(k + 1) for k in self.X)

    def summary(self) -> dict:
        out = {
            "X": [k + 1 for k in self.X],
            "d_X": self.dim,
            "rows": self.n_rows,
            "solution_dim": self.solution_dim,
            "spectral_gap": None if math.isinf(self.spectral_gap) else float(self.spectral_gap),
            "verdict": self.verdict,
            "residual_of_identity": float(self.residual_of_identity),
            "seconds": round(self.seconds, 4),
        }
        if self.exact_nullity is not None:
            out["exact_nullity_mod_p"] = self.exact_nullity
            out["exact_prime"] = self.exact_prime
        return out


def solve_solution_space(cs: ConstraintSystem, tol: float = DEFAULT_TOL, margin: float = DEFAULT_MARGIN,
                         exact: bool = False, want_basis: bool = True) -> TrivialityReport:
    """Dimension of the Hermitian solution space, via a chunked QR and an SVD.

    Singular values below tol * sigma_max count as zero. If the smallest kept
    value is within `margin` of the largest discarded one the verdict is
    Inconclusive.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    start = time.perf_counter()
    nc = cs.n_coords
    ident = np.eye(cs.dim).reshape(-1)
    R = np.zeros((0, nc))
    n_rows = 0
    residual = 0.0
    for rows, _ in cs.iter_rows():
        n_rows += len(rows)
        residual = max(residual, float(np.abs(rows @ ident).max(initial=0.0)))
        R = np.linalg.qr(np.concatenate([R, rows]), mode="r")
    _, sigma, vt = np.linalg.svd(R) if len(R) else (None, np.zeros(0), np.eye(nc))
    sig = np.zeros(nc)
    sig[: len(sigma)] = sigma
    smax = sig[0] if nc else 0.0
    if smax == 0.0:
        null = nc
    else:
        null = int(np.sum(sig < tol * smax))
    kept = nc - null
    if kept == 0 or null == 0:
        gap = math.inf
    else:
        gap = sig[kept - 1] / sig[kept] if sig[kept] > 0 else math.inf
    if gap < margin:
        verdict = INCONCLUSIVE
    elif null == 1 and residual <= IDENTITY_TOL:
        verdict = TRIVIAL
    else:
        verdict = NONTRIVIAL
    basis = []
    if want_basis and null <= 64:
        if len(vt) < nc:
            # rows < coords: complete the null space from the full SVD
            _, _, vt = np.linalg.svd(np.concatenate([R, np.zeros((nc - len(R), nc))]))
        basis = [to_hermitian(v, cs.dim) for v in vt[kept:]]
    report = TrivialityReport(cs.X, cs.dim, n_rows, null, gap, verdict, residual, sig, basis)
    if exact:
        report.exact_nullity, report.exact_prime = exact_nullity(cs)
    report.seconds = time.perf_counter() - start
    return report


# --- exact rank modulo a prime ---------------------------------------------------


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def _prime_factors(m: int) -> list[int]:
    out, q = [], 2
    while q * q <= m:
        if m % q == 0:
            out.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


def prime_with_root(order: int, floor: int = 1 << 30) -> tuple[int, int]:
    """A prime p = 1 (mod order) below 2**31 and a primitive order-th root mod p."""
    k = -(-floor // order)
    while True:
        p = k * order + 1
        if p >= 1 << 31:
            raise ResourceLimitError(f"no suitable prime below 2**31 for order {order}")
        if _is_prime(p):
            break
        k += 1
    qs = _prime_factors(order)
    for h in range(2, p):
        g = pow(h, (p - 1) // order, p)
        if all(pow(g, order // q, p) != 1 for q in qs):
            return p, g
    raise AssertionError("unreachable")


def _mod_rows(cs: ConstraintSystem, p: int, g: int, chunk: int = 2048):
    """Complex-unknown rows <a|E|b> and <b|E|a>, E arbitrary, mapped to GF(p)."""
    L = cs.order
    powers = np.array([pow(g, e, p) for e in range(L)], dtype=np.int64)
    vec_exp = []
    for facs in cs.exact_parts:
        # exponent of w_L per X-basis index, or -1 off support
        e = np.zeros(1, dtype=np.int64)
        for f in facs:
            local = np.full(f.dim, -1, dtype=np.int64)
            for u, x in f.exponents(L).items():
                local[u] = x
            e = np.where((e[:, None] < 0) | (local[None, :] < 0), -1, (e[:, None] + local[None, :]) % L).reshape(-1)
        vec_exp.append(e)
    vec_exp = np.array(vec_exp)
    d2 = cs.dim * cs.dim
    for lo in range(0, cs.n_pairs, chunk):
        hi = min(cs.n_pairs, lo + chunk)
        for a_col, b_col in ((0, 1), (1, 0)):
            ea = vec_exp[cs.xindex[cs.pairs[lo:hi, a_col]]]
            eb = vec_exp[cs.xindex[cs.pairs[lo:hi, b_col]]]
            # conj(w^x) w^y = w^(y - x)
            e = (eb[:, None, :] - ea[:, :, None]) % L
            zero = (ea[:, :, None] < 0) | (eb[:, None, :] < 0)
            yield np.where(zero, 0, powers[e]).reshape(hi - lo, d2)


def exact_nullity(cs: ConstraintSystem) -> tuple[int, int]:
    """Nullity of the complex constraint system over GF(p).

    The solution space over the complex matrices is closed under adjoints, so
    its complex dimension equals the real dimension of the Hermitian
    solutions. Reducing modulo p can only lower the rank, so a nullity of 1
    proves triviality.
    """
    p, g = prime_with_root(cs.order)
    ncols = cs.dim * cs.dim
    stop = ncols - 1  # the identity always solves the system
    pivots: list[int] = []
    basis = np.zeros((0, ncols), dtype=np.int64)
    for C in _mod_rows(cs, p, g):
        for idx, c in enumerate(pivots):
            f = C[:, c]
            nz = f != 0
            if nz.any():
                C[nz] = (C[nz] - f[nz, None] * basis[idx]) % p
        while len(pivots) < stop:
            live = np.flatnonzero(C.any(axis=1))
            if live.size == 0:
                break
            row = C[live[0]]
            c = int(np.flatnonzero(row)[0])
            row = row * pow(int(row[c]), p - 2, p) % p
            pivots.append(c)
            basis = np.concatenate([basis, row[None, :]])
            f = C[:, c]
            nz = f != 0
            C[nz] = (C[nz] - f[nz, None] * row) % p
        if len(pivots) >= stop:
            break
    return ncols - len(pivots), p


# --- pairs and the full definition ------------------------------------------------


@dataclass
class PairTriviality:
    pair: tuple[int, int]
    joint: TrivialityReport
    singles: dict[int, TrivialityReport]

    @property
    def trivial(self) -> bool:
        return self.joint.trivial


def verify_pair_triviality(ops: OPSInstance, k: int, l: int, chosen=None, **solve_kw) -> PairTriviality:
    """Solve on {k, l} and on each of {k}, {l} (0-based parties).

    A trivial joint element restricts to trivial single-party ones, so a
    trivial pair with a non-trivial single party signals a bug.
    """
    if k == l:
        raise ValueError("pair needs two distinct parties")
    k, l = sorted((k, l))
    joint = solve_solution_space(assemble_constraints(ops, (k, l), chosen), **solve_kw)
    singles = {m: solve_solution_space(assemble_constraints(ops, (m,), chosen), **solve_kw) for m in (k, l)}
    if joint.trivial and not all(s.trivial for s in singles.values()):
        raise AssertionError(f"pair X{k + 1}{l + 1} trivial but a single party is not")
    return PairTriviality((k, l), joint, singles)


@dataclass
class Definition1Summary:
    results: list[PairTriviality]

    @property
    def passed(self) -> bool:
        return all(r.trivial for r in self.results)

    def rows(self) -> list[dict]:
        return [dict(pair=[r.pair[0] + 1, r.pair[1] + 1], **r.joint.summary()) for r in self.results]


def verify_definition1(ops: OPSInstance, threads: int = 1, pairs=None, **solve_kw) -> Definition1Summary:
    """Pair triviality for every merged pair of parties."""
    pairs = [(k, l) for k in range(ops.n) for l in range(k + 1, ops.n)] if pairs is None else pairs
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda kl: verify_pair_triviality(ops, *kl, **solve_kw), pairs))
    else:
        results = [verify_pair_triviality(ops, k, l, **solve_kw) for k, l in pairs]
    return Definition1Summary(results)

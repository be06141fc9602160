"""Exact arithmetic in the cyclotomic integers Z[w_L], w_L = exp(2*pi*i/L).

Values are stored as integer coefficient vectors of length L over the powers
w_L^0 .. w_L^(L-1) and kept reduced modulo the L-th cyclotomic polynomial, so
the representation is canonical and a value is zero iff every coefficient is.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache, reduce

DEFAULT_ORDER_CAP = 10**6


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded."""


def _check_order(order: int, cap: int = DEFAULT_ORDER_CAP) -> None:
    if order < 1:
        raise ValueError(f"cyclotomic order must be positive, got {order}")
    if order > cap:
        raise ResourceLimitError(f"cyclotomic order {order} exceeds cap {cap}")


def _poly_divmod_monic(num: list[int], den: tuple[int, ...]) -> tuple[list[int], list[int]]:
    # Coefficient lists are low -> high degree; den must be monic.
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for shift in range(len(num) - 1 - dd, -1, -1):
        c = num[shift + dd]
        if c:
            quot[shift] = c
            for k, dk in enumerate(den):
                num[shift + k] -= c * dk
    rem = num[:dd] if dd else [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the order-th cyclotomic polynomial.

    Computed as (x^L - 1) divided by every Phi_d with d a proper divisor of L.
    """
    _check_order(order)
    poly = [-1] + [0] * (order - 1) + [1]
    for d in range(1, order):
        if order % d == 0:
            poly, rem = _poly_divmod_monic(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def _reduce(coeffs: list[int], order: int) -> tuple[int, ...]:
    phi = cyclotomic_polynomial(order)
    _, rem = _poly_divmod_monic(coeffs, phi)
    out = [0] * order
    out[: len(rem)] = rem
    return tuple(out)


class Cyclotomic:
    """An element of Z[w_L] in canonical (reduced) form.

    >>> w3 = Cyclotomic.root(1, 3)
    >>> (Cyclotomic.one(3) + w3 + w3 * w3).is_zero()
    True
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs, *, cap: int = DEFAULT_ORDER_CAP):
        _check_order(order, cap)
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != order:
            raise ValueError(f"expected {order} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", _reduce(coeffs, order))

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic values are immutable")

    # constructors

    @classmethod
    def from_int(cls, value: int, order: int = 1) -> Cyclotomic:
        coeffs = [0] * order
        coeffs[0] = value
        return cls(order, coeffs)

    @classmethod
    def zero(cls, order: int = 1) -> Cyclotomic:
        return cls.from_int(0, order)

    @classmethod
    def one(cls, order: int = 1) -> Cyclotomic:
        return cls.from_int(1, order)

    @classmethod
    def root(cls, exponent: int, order: int) -> Cyclotomic:
        """w_order ** exponent."""
        coeffs = [0] * order
        coeffs[exponent % order] = 1
        return cls(order, coeffs)

    @classmethod
    def from_exponents(cls, exponents, order: int) -> Cyclotomic:
        """Sum of w_order**e over an iterable of integer exponents (multiset)."""
        coeffs = [0] * order
        for e in exponents:
            coeffs[e % order] += 1
        return cls(order, coeffs)

    # structure

    def embed(self, order: int) -> Cyclotomic:
        """Re-express in Z[w_order]; order must be a multiple of self.order."""
        if order % self.order:
            raise ValueError(f"cannot embed order {self.order} into {order}")
        step = order // self.order
        coeffs = [0] * order
        for j, c in enumerate(self.coeffs):
            coeffs[j * step] = c
        return Cyclotomic(order, coeffs)

    def _common(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if isinstance(other, int):
            other = Cyclotomic.from_int(other, self.order)
        if not isinstance(other, Cyclotomic):
            return NotImplemented, NotImplemented
        if other.order == self.order:
            return self, other
        order = math.lcm(self.order, other.order)
        _check_order(order)
        return self.embed(order), other.embed(order)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized_trace(self) -> Fraction:
        """Tr(x) / [Q(w_L):Q]. The same for every field Q(w_L) holding x."""
        L = self.order
        total = Fraction(0)
        for j, c in enumerate(self.coeffs):
            if c:
                m = L // math.gcd(j, L)
                total += Fraction(c * _mobius(m), _totient(m))
        return total

    # arithmetic

    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyclotomic(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -int(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        L = a.order
        out = [0] * L
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        out[(i + j) % L] += x * y
        return Cyclotomic(L, out)

    __rmul__ = __mul__

    def conj(self) -> Cyclotomic:
        L = self.order
        out = [0] * L
        for j, c in enumerate(self.coeffs):
            out[(-j) % L] += c
        return Cyclotomic(L, out)

    def __eq__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        # must agree across orders, so hash exact field-independent invariants
        return hash((self.normalized_trace(), (self * self.conj()).normalized_trace()))

    def __complex__(self):
        L = self.order
        return complex(sum(c * cmath.exp(2j * cmath.pi * j / L) for j, c in enumerate(self.coeffs) if c))

    def to_complex(self) -> complex:
        return complex(self)

    def __repr__(self):
        terms = [f"{c}*w{self.order}^{j}" for j, c in enumerate(self.coeffs) if c]
        return f"Cyclotomic({' + '.join(terms) or '0'})"


@lru_cache(maxsize=None)
def _totient(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


@lru_cache(maxsize=None)
def _mobius(m: int) -> int:
    out, p = 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def cyclo_is_zero(x: Cyclotomic) -> bool:
    return x.is_zero()


def cyclo_arith(a: Cyclotomic, b: Cyclotomic | None, op: str) -> Cyclotomic:
    """Dispatch 'add', 'mul' or 'conj' (b ignored for conj)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    raise ValueError(f"unknown cyclotomic op {op!r}")


def common_order(orders) -> int:
    return reduce(math.lcm, orders, 1)

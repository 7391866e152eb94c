"""Exact arithmetic in prime and prime-power fields.

Elements of GF(p^h) are coefficient vectors of polynomials reduced modulo a
monic irreducible of degree h. A ``FiniteField`` can itself serve as the
coefficient field of another one, which gives the cubic towers GF(q^3)/GF(q)
used by the Singer construction.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Any, Protocol, TypeAlias

import numpy as np
import numpy.typing as npt

from src.models.errors import (
    DivisionByZeroError,
    FieldMismatchError,
    InvalidParameterError,
    NotPrimePowerError,
    ReducibleModulusError,
)

logger = logging.getLogger(__name__)

# int for prime coefficient fields, FieldElement for towers
Coeff: TypeAlias = Any


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Return the distinct prime factors of ``n`` in increasing order."""
    factors: list[int] = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    return factors


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` as ``p**h``.

    Raises:
        NotPrimePowerError: If ``q`` is not a prime power.
    """
    if q < 2:
        raise NotPrimePowerError(q)
    factors = prime_factors(q)
    if len(factors) != 1:
        raise NotPrimePowerError(q)
    p = factors[0]
    h = 0
    while q > 1:
        q //= p
        h += 1
    return p, h


class CoefficientField(Protocol):
    """Operations a field must offer to serve as polynomial coefficients."""

    @property
    def order(self) -> int: ...

    @property
    def characteristic(self) -> int: ...

    @property
    def zero(self) -> Coeff: ...

    @property
    def one(self) -> Coeff: ...

    def elements(self) -> Sequence[Coeff]: ...

    def add(self, a: Coeff, b: Coeff) -> Coeff: ...

    def sub(self, a: Coeff, b: Coeff) -> Coeff: ...

    def mul(self, a: Coeff, b: Coeff) -> Coeff: ...

    def neg(self, a: Coeff) -> Coeff: ...

    def inv(self, a: Coeff) -> Coeff: ...

    def index(self, a: Coeff) -> int: ...


class PrimeField:
    """Integers modulo a prime, used as the ground coefficient field."""

    def __init__(self, p: int) -> None:
        if not is_prime(p):
            raise InvalidParameterError(f"characteristic {p} is not prime")
        self.p = p

    @property
    def order(self) -> int:
        return self.p

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> Sequence[int]:
        return range(self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DivisionByZeroError("inverse of zero")
        return pow(a, -1, self.p)

    def index(self, a: int) -> int:
        return a

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


# ── Polynomial helpers over a coefficient field (low -> high coefficients) ──


def _poly_trim(base: CoefficientField, poly: list[Coeff]) -> list[Coeff]:
    while poly and poly[-1] == base.zero:
        poly.pop()
    return poly


def _poly_mul(base: CoefficientField, a: Sequence[Coeff], b: Sequence[Coeff]) -> list[Coeff]:
    out: list[Coeff] = [base.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == base.zero:
            continue
        for j, bj in enumerate(b):
            out[i + j] = base.add(out[i + j], base.mul(ai, bj))
    return out


def _poly_rem(base: CoefficientField, a: Sequence[Coeff], monic: Sequence[Coeff]) -> list[Coeff]:
    """Remainder of ``a`` divided by the monic polynomial ``monic``."""
    rem = _poly_trim(base, list(a))
    deg = len(monic) - 1
    while len(rem) - 1 >= deg:
        lead = rem[-1]
        shift = len(rem) - 1 - deg
        for i, c in enumerate(monic):
            rem[shift + i] = base.sub(rem[shift + i], base.mul(lead, c))
        _poly_trim(base, rem)
    return rem


def _monic_polys(base: CoefficientField, degree: int) -> Iterable[tuple[Coeff, ...]]:
    """Monic polynomials of ``degree`` (low -> high) in search order.

    The order compares coefficient vectors with the highest non-leading
    coefficient most significant, so x^3 + x + 1 precedes x^3 + x^2 + 1.
    """
    for high_first in product(base.elements(), repeat=degree):
        yield (*reversed(high_first), base.one)


def is_irreducible(base: CoefficientField, modulus: Sequence[Coeff]) -> bool:
    """Trial division by every monic polynomial of degree at most h/2."""
    h = len(modulus) - 1
    for d in range(1, h // 2 + 1):
        for divisor in _monic_polys(base, d):
            if not _poly_rem(base, modulus, divisor):
                return False
    return True


def first_irreducible(base: CoefficientField, degree: int) -> tuple[Coeff, ...]:
    for candidate in _monic_polys(base, degree):
        if is_irreducible(base, candidate):
            return candidate
    raise AssertionError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


@dataclass(frozen=True, slots=True, eq=False)
class FieldElement:
    """An element of a ``FiniteField``: reduced coefficients, low degree first."""

    field: FiniteField
    coeffs: tuple[Coeff, ...]

    def _check(self, other: object) -> FieldElement:
        if not isinstance(other, FieldElement):
            raise FieldMismatchError(f"cannot combine field element with {type(other).__name__}")
        if other.field is not self.field:
            raise FieldMismatchError(f"elements of {self.field!r} and {other.field!r}")
        return other

    def __add__(self, other: object) -> FieldElement:
        return self.field.add(self, self._check(other))

    def __sub__(self, other: object) -> FieldElement:
        return self.field.sub(self, self._check(other))

    def __mul__(self, other: object) -> FieldElement:
        return self.field.mul(self, self._check(other))

    def __truediv__(self, other: object) -> FieldElement:
        return self.field.mul(self, self.field.inv(self._check(other)))

    def __pow__(self, exponent: int) -> FieldElement:
        return self.field.pow(self, exponent)

    def __neg__(self) -> FieldElement:
        return self.field.neg(self)

    def __bool__(self) -> bool:
        return any(c != self.field.base.zero for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return other.field is self.field and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __int__(self) -> int:
        return self.field.index(self)

    def __repr__(self) -> str:
        return f"FieldElement({self.field.order}, {self.field.index(self)})"


class FiniteField:
    """GF(r^h) as ``base[x] / (modulus)`` for a coefficient field of order r.

    Args:
        base: Coefficient field (a ``PrimeField`` or another ``FiniteField``).
        modulus: Monic irreducible polynomial, low degree first.
    """

    def __init__(self, base: CoefficientField, modulus: Sequence[Coeff]) -> None:
        if len(modulus) < 2 or modulus[-1] != base.one:
            raise InvalidParameterError("modulus must be monic of degree at least 1")
        self.base = base
        self.modulus: tuple[Coeff, ...] = tuple(modulus)
        self.h = len(modulus) - 1
        self._order = base.order**self.h

    # ── CoefficientField protocol ──

    @property
    def order(self) -> int:
        return self._order

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @cached_property
    def zero(self) -> FieldElement:
        return FieldElement(self, (self.base.zero,) * self.h)

    @cached_property
    def one(self) -> FieldElement:
        return self.embed(self.base.one)

    def elements(self) -> list[FieldElement]:
        """All elements in canonical order (lowest-degree coefficient most significant)."""
        return self._elements

    @cached_property
    def _elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in product(self.base.elements(), repeat=self.h)]

    @cached_property
    def _index(self) -> dict[tuple[Coeff, ...], int]:
        return {e.coeffs: i for i, e in enumerate(self._elements)}

    def index(self, a: FieldElement) -> int:
        """Position of ``a`` in the canonical enumeration."""
        return self._index[a.coeffs]

    def __getitem__(self, i: int) -> FieldElement:
        return self._elements[i]

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return FieldElement(self, tuple(self.base.add(x, y) for x, y in zip(a.coeffs, b.coeffs, strict=True)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return FieldElement(self, tuple(self.base.sub(x, y) for x, y in zip(a.coeffs, b.coeffs, strict=True)))

    def neg(self, a: FieldElement) -> FieldElement:
        return FieldElement(self, tuple(self.base.neg(x) for x in a.coeffs))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self._from_poly(_poly_rem(self.base, _poly_mul(self.base, a.coeffs, b.coeffs), self.modulus))

    def inv(self, a: FieldElement) -> FieldElement:
        if not a:
            raise DivisionByZeroError("inverse of zero")
        return self.pow(a, self._order - 2)

    def pow(self, a: FieldElement, exponent: int) -> FieldElement:
        """Raise ``a`` to any integer power; exponents reduce mod q-1 for a != 0."""
        if not a:
            if exponent == 0:
                return self.one
            if exponent < 0:
                raise DivisionByZeroError("negative power of zero")
            return self.zero
        e = exponent % (self._order - 1)
        result = self.one
        square = a
        while e:
            if e & 1:
                result = self.mul(result, square)
            square = self.mul(square, square)
            e >>= 1
        return result

    # ── Construction helpers ──

    def _from_poly(self, poly: Sequence[Coeff]) -> FieldElement:
        padded = list(poly) + [self.base.zero] * (self.h - len(poly))
        return FieldElement(self, tuple(padded))

    def element(self, coeffs: Sequence[Coeff]) -> FieldElement:
        """Build an element from coefficients (low degree first), reducing if needed."""
        return self._from_poly(_poly_rem(self.base, list(coeffs), self.modulus))

    def embed(self, c: Coeff) -> FieldElement:
        """Embed a coefficient-field element as a constant."""
        return self._from_poly([c])

    @cached_property
    def x(self) -> FieldElement:
        """The class of the indeterminate."""
        return self.element([self.base.zero, self.base.one])

    def scale(self, c: Coeff, a: FieldElement) -> FieldElement:
        return FieldElement(self, tuple(self.base.mul(c, x) for x in a.coeffs))

    def span(self, gens: Sequence[FieldElement]) -> frozenset[FieldElement]:
        """All linear combinations of ``gens`` over the coefficient field."""
        out: set[FieldElement] = set()
        for combo in product(self.base.elements(), repeat=len(gens)):
            acc = self.zero
            for c, g in zip(combo, gens, strict=True):
                acc = self.add(acc, self.scale(c, g))
            out.add(acc)
        return frozenset(out)

    def in_span(self, e: FieldElement, gens: Sequence[FieldElement]) -> bool:
        return e in self.span(gens)

    def multiplicative_order(self, a: FieldElement) -> int:
        if not a:
            raise DivisionByZeroError("zero has no multiplicative order")
        order = self._order - 1
        for r in prime_factors(order):
            while order % r == 0 and self.pow(a, order // r) == self.one:
                order //= r
        return order

    def is_primitive(self, a: FieldElement) -> bool:
        if not a:
            return False
        n = self._order - 1
        return all(self.pow(a, n // r) != self.one for r in prime_factors(n))

    def primitive_element(self) -> FieldElement:
        """First nonzero element in canonical order with multiplicative order q-1."""
        return self._primitive

    @cached_property
    def _primitive(self) -> FieldElement:
        for candidate in self._elements:
            if self.is_primitive(candidate):
                return candidate
        raise AssertionError("multiplicative group is cyclic")  # pragma: no cover

    def primitive_elements(self) -> list[FieldElement]:
        return [e for e in self._elements if self.is_primitive(e)]

    def tables(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
        """Dense addition and multiplication tables over canonical indices."""
        return self._tables

    @cached_property
    def _tables(self) -> tuple[npt.NDArray[np.int64], npt.NDArray[np.int64]]:
        q = self._order
        add = np.empty((q, q), dtype=np.int64)
        mul = np.empty((q, q), dtype=np.int64)
        elems = self._elements
        for i, a in enumerate(elems):
            for j in range(i, q):
                b = elems[j]
                add[i, j] = add[j, i] = self.index(self.add(a, b))
                mul[i, j] = mul[j, i] = self.index(self.mul(a, b))
        return add, mul

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.characteristic,
            "h": self.h,
            "q": self._order,
            "base_order": self.base.order,
            "modulus": [self.base.index(c) for c in self.modulus],
        }

    def __repr__(self) -> str:
        return f"GF({self._order})"


def field_create(p: int, h: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Create GF(p^h).

    Args:
        p: Characteristic; must be prime.
        h: Extension degree, at least 1.
        modulus: Optional monic modulus of degree h (low degree first). When
            omitted the first irreducible in search order is used.

    Raises:
        InvalidParameterError: If ``p`` is not prime, ``h < 1`` or the modulus
            is not monic of degree h.
        ReducibleModulusError: If the supplied modulus is reducible.
    """
    if h < 1:
        raise InvalidParameterError(f"extension degree must be >= 1, got {h}")
    base = PrimeField(p)
    if modulus is None:
        poly = first_irreducible(base, h)
    else:
        poly = tuple(c % p for c in modulus)
        if len(poly) != h + 1 or poly[-1] != 1:
            raise InvalidParameterError(f"modulus must be monic of degree {h}")
        if not is_irreducible(base, poly):
            raise ReducibleModulusError(f"modulus {list(poly)} is reducible over GF({p})")
    field = FiniteField(base, poly)
    logger.debug("Created field", extra={"q": field.order})
    return field


@lru_cache(maxsize=64)
def galois_field(q: int) -> FiniteField:
    """Shared GF(q) with the default modulus.

    Raises:
        NotPrimePowerError: If ``q`` is not a prime power.
    """
    p, h = prime_power(q)
    return field_create(p, h)


def cubic_extension(field: FiniteField) -> FiniteField:
    """GF(q^3) as ``field[x]`` modulo the first irreducible cubic over ``field``."""
    return FiniteField(field, first_irreducible(field, 3))

"""Exact arithmetic in real quadratic fields Q(sqrt(d)).

Elements are kept on the {1, sqrt(d)} basis with rational coordinates.
Integrality is a predicate over the maximal order's basis {1, omega},
where omega = sqrt(d) for d = 2, 3 (mod 4) and omega = (1 + sqrt(d))/2
for d = 1 (mod 4).  No floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)

Scalar = Union[int, Fraction]


class QuadFieldError(ValueError):
    """Domain error in field construction or element use."""


def is_squarefree(d: int) -> bool:
    """Squarefreeness by trial division up to the cube root.

    After stripping primes p <= d**(1/3) the cofactor has at most two
    prime factors, so it fails to be squarefree only if it is a perfect
    square bigger than 1.
    """
    if d < 1:
        return False
    n = d
    p = 2
    while p * p * p <= d:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return False
        p += 1
    r = isqrt(n)
    return r <= 1 or r * r != n


@dataclass(frozen=True, slots=True)
class FieldDesc:
    """The field Q(sqrt(d)) for a squarefree integer d >= 2."""

    d: int

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or isinstance(self.d, bool):
            raise QuadFieldError(f"d must be an integer, got {self.d!r}")
        if self.d < 2:
            raise QuadFieldError(f"d must be >= 2, got {self.d}")
        if not is_squarefree(self.d):
            raise QuadFieldError(f"d must be squarefree, got {self.d}")

    @property
    def half_basis(self) -> bool:
        """True when the ring of integers is Z[(1 + sqrt(d))/2]."""
        return self.d % 4 == 1

    @property
    def basis_kind(self) -> str:
        return "HALF" if self.half_basis else "SQRT"

    def one(self) -> FieldElem:
        return FieldElem(self, _ONE, _ZERO)

    def sqrt_d(self) -> FieldElem:
        return FieldElem(self, _ZERO, _ONE)

    def omega(self) -> FieldElem:
        """Second generator of the integral basis {1, omega}."""
        if self.half_basis:
            return FieldElem(self, _HALF, _HALF)
        return FieldElem(self, _ZERO, _ONE)

    def element(self, a: Scalar, b: Scalar = 0) -> FieldElem:
        return FieldElem(self, Fraction(a), Fraction(b))

    def from_basis_coords(self, u: int, v: int) -> FieldElem:
        """The integral element u + v*omega."""
        if self.half_basis:
            return FieldElem(self, u + Fraction(v, 2), Fraction(v, 2))
        return FieldElem(self, Fraction(u), Fraction(v))


@dataclass(frozen=True, slots=True)
class FieldElem:
    """a + b*sqrt(d) with exact rational coordinates a, b."""

    field: FieldDesc
    a: Fraction
    b: Fraction

    # -- ring structure ------------------------------------------------

    def _coerce(self, other) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise QuadFieldError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, Fraction(other), _ZERO)
        return None

    def __add__(self, other) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, o.a - self.a, o.b - self.b)

    def __neg__(self) -> FieldElem:
        return FieldElem(self.field, -self.a, -self.b)

    def __mul__(self, other) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(
            self.field,
            self.a * o.a + self.field.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElem(self.field, self.a / n, -self.b / n)

    def __truediv__(self, other) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __pow__(self, n: int) -> FieldElem:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    # -- field invariants ----------------------------------------------

    def conj(self) -> FieldElem:
        """Galois conjugate a - b*sqrt(d)."""
        return FieldElem(self.field, self.a, -self.b)

    def trace(self) -> Fraction:
        return 2 * self.a

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def real_sign(self) -> int:
        """Sign under the embedding sending sqrt(d) to the positive root."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # mixed signs: the larger square wins (equality needs d square)
        return sa if self.a * self.a > self.field.d * self.b * self.b else sb

    def is_totally_positive(self) -> bool:
        """Positive under both real embeddings."""
        return self.a > 0 and self.a * self.a > self.field.d * self.b * self.b

    def is_integral(self) -> bool:
        """Membership in the ring of integers."""
        if self.field.half_basis:
            ta, tb = 2 * self.a, 2 * self.b
            return (
                ta.denominator == 1
                and tb.denominator == 1
                and (ta.numerator - tb.numerator) % 2 == 0
            )
        return self.a.denominator == 1 and self.b.denominator == 1

    def basis_coords(self) -> tuple[int, int]:
        """Coordinates (u, v) with self = u + v*omega; integral elements only."""
        if not self.is_integral():
            raise QuadFieldError(f"{self} is not integral")
        if self.field.half_basis:
            v = int(2 * self.b)
            return int(self.a - self.b), v
        return int(self.a), int(self.b)

    # -- rendering -------------------------------------------------------

    def __str__(self) -> str:
        d = self.field.d
        if not self.b:
            return str(self.a)
        root = f"sqrt({d})" if abs(self.b) == 1 else f"{abs(self.b)}*sqrt({d})"
        if not self.a:
            return root if self.b > 0 else f"-{root}"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {root}"

    def __repr__(self) -> str:
        return f"FieldElem({self.field.d}: {self})"


@dataclass(frozen=True, slots=True)
class PrimitivePair:
    """Coprime integers (p, q), p > 0, labelling p + q*sqrt(d) up to
    positive rational scaling."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p <= 0 or gcd(self.p, self.q) != 1:
            raise QuadFieldError(f"not a primitive pair: ({self.p}, {self.q})")


def primitive_normalize(x: FieldElem) -> PrimitivePair:
    """Canonical label of the ray of positive rational multiples of x."""
    if not x.is_totally_positive():
        raise QuadFieldError(f"{x} is not totally positive")
    da, db = x.a.denominator, x.b.denominator
    scale = da * db // gcd(da, db)
    p = x.a.numerator * (scale // da)
    q = x.b.numerator * (scale // db)
    g = gcd(p, q)
    return PrimitivePair(p // g, q // g)


def slope(x: FieldElem) -> Fraction:
    """b/a, the coordinate of x's ray inside (-1/sqrt(d), 1/sqrt(d))."""
    if not x.is_totally_positive():
        raise QuadFieldError(f"{x} is not totally positive")
    return x.b / x.a

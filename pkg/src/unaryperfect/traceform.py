"""Trace forms attached to field elements, with exact Gauss reduction.

A totally positive x in Q(sqrt(d)) defines the positive definite binary
quadratic form y -> Tr(x * y^2) on the ring of integers, written over the
basis {1, omega}.  Rational forms are scaled to integers, reduced by
Gauss's algorithm with an exact round-to-nearest step, and the minimum
plus all minimal vectors are read off the reduced form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .quadfield import FieldDesc, FieldElem, QuadFieldError

_REDUCE_CAP = 10**6


class NotPositiveDefiniteError(ValueError):
    """The form (or the element behind it) is not positive definite."""


class ReductionCapError(RuntimeError):
    """Gauss reduction failed to terminate within the step cap."""


@dataclass(frozen=True, slots=True)
class BinaryQF:
    """A*u^2 + B*u*v + C*v^2 with rational coefficients, positive definite."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        object.__setattr__(self, "C", Fraction(self.C))
        if self.A <= 0 or self.disc() <= 0:
            raise NotPositiveDefiniteError(
                f"({self.A}, {self.B}, {self.C}) is not positive definite"
            )

    def disc(self) -> Fraction:
        return 4 * self.A * self.C - self.B * self.B

    def value(self, u: int, v: int) -> Fraction:
        return self.A * u * u + self.B * u * v + self.C * v * v

    def is_reduced(self) -> bool:
        return abs(self.B) <= self.A <= self.C

    def __str__(self) -> str:
        return f"({self.A}, {self.B}, {self.C})"


@dataclass(frozen=True, slots=True)
class UnimodularMap:
    """Column-convention GL2(Z) change of basis: new basis j is column j."""

    u00: int
    u01: int
    u10: int
    u11: int

    def det(self) -> int:
        return self.u00 * self.u11 - self.u01 * self.u10

    def apply(self, u: int, v: int) -> tuple[int, int]:
        """Old coordinates of the vector with new coordinates (u, v)."""
        return self.u00 * u + self.u01 * v, self.u10 * u + self.u11 * v


def trace_form(x: FieldElem) -> BinaryQF:
    """The form (u, v) -> Tr(x * (u + v*omega)^2) over x's field."""
    if not x.is_totally_positive():
        raise NotPositiveDefiniteError(f"{x} is not totally positive")
    w = x.field.omega()
    return BinaryQF((x).trace(), 2 * (x * w).trace(), (x * w * w).trace())


# -- integer kernel ------------------------------------------------------
#
# The walk evaluates thousands of forms per field, so the inner loop runs
# on plain ints.  Rational inputs are scaled through these by the caller.


def _trace_form_ints(d: int, half: bool, p: int, q: int) -> tuple[int, int, int]:
    """Trace form of the integer element p + q*sqrt(d), as ints."""
    if half:
        # omega = (1 + sqrt(d))/2; d = 1 (mod 4) keeps everything integral
        return 2 * p, 2 * (p + q * d), p + q * d + p * (d - 1) // 2
    return 2 * p, 4 * q * d, 2 * p * d


def _round_nearest_even(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties to even."""
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q % 2):
        q += 1
    return q


def _reduce_ints(
    A: int, B: int, C: int
) -> tuple[tuple[int, int, int], tuple[int, int, int, int]]:
    """Gauss-reduce a positive definite integer form.

    Returns the reduced triple and the basis change (u00, u01, u10, u11):
    columns are the reduced basis written in the original basis.  A is
    cut at least in half at every swap, so termination is immediate; the
    cap only guards against a malformed input slipping past validation.
    """
    u00, u01, u10, u11 = 1, 0, 0, 1
    for _ in range(_REDUCE_CAP):
        if abs(B) <= A <= C:
            return (A, B, C), (u00, u01, u10, u11)
        t = _round_nearest_even(B, 2 * A)
        if t:
            B, C = B - 2 * A * t, A * t * t - B * t + C
            u01 -= t * u00
            u11 -= t * u10
        if A > C:
            A, B, C = C, -B, A
            u00, u01 = u01, -u00
            u10, u11 = u11, -u10
    raise ReductionCapError(f"no reduced form within {_REDUCE_CAP} steps")


def _min_vectors_ints(
    A: int, B: int, C: int
) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Minimum and minimal vectors (up to sign) of a reduced integer form.

    For a reduced form the minimum is A, and disc >= 3*A*C squeezes the
    search box for value <= A down to |u|, |v| <= 1.
    """
    disc = 4 * A * C - B * B
    ub = isqrt(4 * C * A // disc)
    vb = isqrt(4 * A * A // disc)
    best = A
    vecs = []
    for v in range(0, vb + 1):
        for u in range(-ub, ub + 1):
            if v == 0 and u <= 0:
                continue
            if A * u * u + B * u * v + C * v * v == best:
                vecs.append((u, v))
    return best, tuple(vecs)


# -- rational wrappers -----------------------------------------------------


def _scaled_ints(form: BinaryQF) -> tuple[int, int, int, int]:
    L = lcm(form.A.denominator, form.B.denominator, form.C.denominator)
    return (
        int(form.A * L),
        int(form.B * L),
        int(form.C * L),
        L,
    )


def gauss_reduce(form: BinaryQF) -> tuple[BinaryQF, UnimodularMap]:
    """Reduced representative of form's GL2(Z) class, with the basis change."""
    Ai, Bi, Ci, L = _scaled_ints(form)
    (Ar, Br, Cr), (u00, u01, u10, u11) = _reduce_ints(Ai, Bi, Ci)
    reduced = BinaryQF(Fraction(Ar, L), Fraction(Br, L), Fraction(Cr, L))
    return reduced, UnimodularMap(u00, u01, u10, u11)


@dataclass(frozen=True, slots=True)
class MinData:
    """Minimum of a trace form together with every vector attaining it."""

    mu: Fraction
    vectors: frozenset[FieldElem]


def _vector_set(field: FieldDesc, coords) -> frozenset[FieldElem]:
    out = []
    for u, v in coords:
        y = field.from_basis_coords(u, v)
        out.append(y)
        out.append(-y)
    return frozenset(out)


def min_data(x: FieldElem) -> MinData:
    """Minimum of Tr(x * y^2) over nonzero integral y, with its vectors."""
    form = trace_form(x)
    Ai, Bi, Ci, L = _scaled_ints(form)
    (Ar, Br, Cr), (u00, u01, u10, u11) = _reduce_ints(Ai, Bi, Ci)
    m, vecs = _min_vectors_ints(Ar, Br, Cr)
    back = [(u00 * u + u01 * v, u10 * u + u11 * v) for u, v in vecs]
    return MinData(Fraction(m, L), _vector_set(x.field, back))


def certified_box(x: FieldElem) -> tuple[int, int]:
    """Box bounds (ub, vb) that provably contain all minimal vectors of x.

    Uses the witness value m0 = min over (1,0), (0,1), (1,1), (1,-1); any
    vector of value <= m0 has disc * u^2 <= 4*C*m0 and disc * v^2 <= 4*A*m0.
    """
    form = trace_form(x)
    A, B, C, _ = _scaled_ints(form)
    disc = 4 * A * C - B * B
    m0 = min(A, C, A + B + C, A - B + C)
    ub = isqrt(4 * C * m0 // disc)
    vb = isqrt(4 * A * m0 // disc)
    return max(ub, 1), max(vb, 1)


def brute_force_min(x: FieldElem, box: tuple[int, int] | None = None) -> MinData:
    """Independent minimum by direct search over a certified box.

    Never calls the reduction path, so it cross-checks min_data.  An
    explicit box overrides the certified one at the caller's risk.
    """
    form = trace_form(x)
    Ai, Bi, Ci, L = _scaled_ints(form)
    ub, vb = certified_box(x) if box is None else box
    best: int | None = None
    vecs: list[tuple[int, int]] = []
    for v in range(0, vb + 1):
        for u in range(-ub, ub + 1):
            if v == 0 and u <= 0:
                continue
            val = Ai * u * u + Bi * u * v + Ci * v * v
            if best is None or val < best:
                best = val
                vecs = [(u, v)]
            elif val == best:
                vecs.append((u, v))
    if best is None:
        raise QuadFieldError("empty search box")
    return MinData(Fraction(best, L), _vector_set(x.field, vecs))

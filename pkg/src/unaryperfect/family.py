"""Closed-form families of perfect forms with known class counts.

Writing d = n^2 + r with -n < r <= n, four classical near-square shapes
of d force a single class.  Beyond those, when the fundamental unit
alpha + beta*sqrt(d) has beta = m(m+2) for odd m, the residue of alpha
mod beta^2 pins the count at 2 or 3; the three-class case comes with an
explicit two-parameter family (m, k, delta) and exact predictions for
the forms, their minima, and their minimal vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .quadfield import FieldDesc, FieldElem, QuadFieldError, is_squarefree
from .units import FundamentalUnit, fundamental_unit

TAG_T1 = "T1"
TAG_T2 = "T2"
TAG_T3 = "T3"
TAG_T4 = "T4"
TAG_RD2 = "RD2"
TAG_FAM3 = "FAM3"
TAG_NONE = "UNCLASSIFIED"

_PREDICTED_COUNT = {
    TAG_T1: 1,
    TAG_T2: 1,
    TAG_T3: 1,
    TAG_T4: 1,
    TAG_RD2: 2,
    TAG_FAM3: 3,
    TAG_NONE: None,
}


class HypothesisError(ValueError):
    """The field or decomposition falls outside a constructor's hypotheses."""


class InvariantError(RuntimeError):
    """An identity that holds for all valid inputs failed; signals a bug."""


@dataclass(frozen=True, slots=True)
class NRDecomp:
    """d = n^2 + r with -n < r <= n; unique, n the nearest root."""

    n: int
    r: int


def nr_decompose(d: int) -> NRDecomp:
    if d < 2:
        raise QuadFieldError(f"d must be >= 2, got {d}")
    n = isqrt(d)
    r = d - n * n
    if r > n:
        n += 1
        r = d - n * n
    return NRDecomp(n, r)


def classify_T(d: int) -> str | None:
    """Tag of the near-square shape of d forcing one class, if any.

    T1: d = n^2+1, n odd.  T2: d = n^2-1, n even.  T3: d = n^2+4, n odd.
    T4: d = n^2-4, n > 3 odd.  The four are mutually exclusive.
    """
    n = isqrt(d - 1)
    if n * n + 1 == d and n % 2 == 1:
        return TAG_T1
    n = isqrt(d + 1)
    if n * n - 1 == d and n % 2 == 0:
        return TAG_T2
    if d >= 5:
        n = isqrt(d - 4)
        if n * n + 4 == d and n % 2 == 1:
            return TAG_T3
    n = isqrt(d + 4)
    if n * n - 4 == d and n % 2 == 1 and n > 3:
        return TAG_T4
    return None


@dataclass(frozen=True, slots=True)
class DClass:
    """Classification of d: a tag plus recovered parameters when known."""

    tag: str
    m: int | None = None
    k: int | None = None
    delta: int | None = None

    @property
    def predicted_class_count(self) -> int | None:
        return _PREDICTED_COUNT[self.tag]


def classify_unit_congruence(field: FieldDesc, unit: FundamentalUnit) -> DClass:
    """Classification read off the fundamental unit alpha + beta*sqrt(d).

    Applies when beta + 1 is the square of an even number >= 4, writing
    beta = m(m+2) with m odd >= 3, and the d = n^2 + r decomposition has
    r != +-1.  alpha = +-1 mod beta^2 pins two classes; alpha equal to
    +-((m-1)/2*(m+2)^2 + 1) mod beta^2 pins three and recovers (k, delta).
    Anything else is left unclassified rather than guessed.
    """
    if field.half_basis:
        raise HypothesisError("unit congruence classes need d = 2, 3 (mod 4)")
    alpha, beta = unit.value.a, unit.value.b
    if alpha.denominator != 1 or beta.denominator != 1:
        raise InvariantError("fundamental unit is not integral")
    alpha, beta = int(alpha), int(beta)
    root = isqrt(beta + 1)
    if root * root != beta + 1 or root % 2 or root < 4:
        return DClass(TAG_NONE)
    m = root - 1
    if nr_decompose(field.d).r in (1, -1):
        return DClass(TAG_NONE)
    bb = beta * beta
    res = alpha % bb
    if res in (1, bb - 1):
        return DClass(TAG_RD2, m=m)
    c = (m - 1) // 2 * (m + 2) ** 2 + 1
    if res == c % bb:
        return DClass(TAG_FAM3, m=m, k=(alpha - c) // bb, delta=1)
    if res == -c % bb:
        return DClass(TAG_FAM3, m=m, k=(alpha + c) // bb, delta=-1)
    return DClass(TAG_NONE)


def classify(field: FieldDesc, unit: FundamentalUnit) -> DClass:
    """Full classification: near-square shapes first, unit congruence next."""
    tag = classify_T(field.d)
    if tag is not None:
        return DClass(tag)
    if field.half_basis:
        return DClass(TAG_NONE)
    return classify_unit_congruence(field, unit)


# -- explicit class representatives ---------------------------------------


def construct_a1_a2(field: FieldDesc) -> tuple[FieldElem, FieldElem]:
    """The conjugate pair of perfect forms present for every valid d.

    a1 = 1/2 + ((2n^2 + r - 1)/(4n(n^2 + r)))*sqrt(d), a2 its conjugate;
    needs d = 2, 3 (mod 4) and r != +-1.
    """
    if field.half_basis:
        raise HypothesisError("constructors need d = 2, 3 (mod 4)")
    dec = nr_decompose(field.d)
    n, r = dec.n, dec.r
    if r in (1, -1):
        raise HypothesisError(f"d = {field.d} has r = {r}; constructors need r != +-1")
    a1 = FieldElem(
        field,
        Fraction(1, 2),
        Fraction(2 * n * n + r - 1, 4 * n * (n * n + r)),
    )
    return a1, a1.conj()


def construct_a3(unit: FundamentalUnit) -> FieldElem:
    """The third representative: the fundamental unit itself.

    Only meaningful in the three-class case, where the unit norm is
    forced to +1; a norm of -1 here means an upstream bug.
    """
    if unit.norm_sign != 1:
        raise InvariantError("three-class case requires a norm +1 unit")
    return unit.value


def predicted_minimal_set(
    which: str, field: FieldDesc, unit: FundamentalUnit | None = None
) -> frozenset[FieldElem]:
    """Closed-form minimal vectors of a1, a2, or a3.

    a1 gets {+-1, +-(n - sqrt(d))}, enlarged by +-(n - 1 - sqrt(d)) on
    the boundary r = -(n-1); a2 is the conjugate set; a3 (unit needed)
    gets {+-(n - sqrt(d)), +-conj(unit)*(n + sqrt(d))}.
    """
    dec = nr_decompose(field.d)
    n, r = dec.n, dec.r
    root = field.sqrt_d()
    if which in ("a1", "a2"):
        if field.half_basis or r in (1, -1):
            raise HypothesisError("predicted sets need d = 2, 3 (mod 4), r != +-1")
        vecs = [field.one(), n - root]
        if r == -(n - 1):
            vecs.append(n - 1 - root)
        if which == "a2":
            vecs = [y.conj() for y in vecs]
    elif which == "a3":
        if unit is None:
            raise HypothesisError("a3 prediction needs the fundamental unit")
        if unit.norm_sign != 1:
            raise InvariantError("three-class case requires a norm +1 unit")
        vecs = [n - root, unit.value.conj() * (n + root)]
    else:
        raise ValueError(f"unknown representative {which!r}")
    return frozenset([y for v in vecs for y in (v, -v)])


# -- the (m, k, delta) family ----------------------------------------------


@dataclass(frozen=True, slots=True)
class FamilyParams:
    """One candidate member of the three-class family."""

    m: int
    k: int
    delta: int
    l: int
    d: int
    alpha: int
    beta: int


def candidate_params(m: int, k: int, delta: int) -> FamilyParams:
    """Closed-form (l, d, alpha, beta) for the member at (m, k, delta).

    beta = m(m+2); l = k*beta + delta*(m+1)/2; d = l^2 - 2*delta*k*(m+1) - 1;
    alpha = k*beta^2 + delta*((m-1)/2*(m+2)^2 + 1).  The Pell identity
    alpha^2 - d*beta^2 = 1 holds for every (m, k, delta), d square or not.
    """
    if m < 3 or m % 2 == 0:
        raise HypothesisError(f"m must be odd >= 3, got {m}")
    if k < 0 or (k == 0 and delta != 1):
        raise HypothesisError(f"k must be >= {1 if delta != 1 else 0}, got {k}")
    if delta not in (1, -1):
        raise HypothesisError(f"delta must be +-1, got {delta}")
    beta = m * (m + 2)
    l = k * beta + delta * (m + 1) // 2
    d = l * l - 2 * delta * k * (m + 1) - 1
    alpha = k * beta * beta + delta * ((m - 1) // 2 * (m + 2) ** 2 + 1)
    params = FamilyParams(m, k, delta, l, d, alpha, beta)
    if alpha * alpha - d * beta * beta != 1:
        raise InvariantError(f"Pell identity failed at {params}")
    return params


def predicted_a3_minimum(params: FamilyParams) -> int:
    """mu of the unit form: 2*(k*((m+1)^2 + 1) + delta*(m+1)/2)."""
    m, k = params.m, params.k
    return 2 * (k * ((m + 1) ** 2 + 1) + params.delta * (m + 1) // 2)


@dataclass(frozen=True, slots=True)
class RejectedCandidate:
    params: FamilyParams
    reason: str


@dataclass(frozen=True, slots=True)
class FamilyScan:
    accepted: tuple[FamilyParams, ...]
    rejected: tuple[RejectedCandidate, ...]


def generate_family(m_max: int, k_max: int, d_cap: int) -> FamilyScan:
    """All verified family members with d <= d_cap, plus the rejects.

    Candidates run lexicographically over odd m in [3, m_max], k up to
    k_max, delta = +1 then -1 (delta = -1 starts at k = 1).  A candidate
    is accepted only if d lands in range, is squarefree, is 2 or 3 mod 4,
    has r != +-1, and alpha + beta*sqrt(d) is the fundamental unit; a
    Pell solution need not be fundamental, so this is checked, not assumed.
    """
    accepted: list[FamilyParams] = []
    rejected: list[RejectedCandidate] = []

    def reject(params: FamilyParams, reason: str) -> None:
        rejected.append(RejectedCandidate(params, reason))

    for m in range(3, m_max + 1, 2):
        for k in range(0, k_max + 1):
            for delta in (1, -1):
                if k == 0 and delta == -1:
                    continue
                params = candidate_params(m, k, delta)
                d = params.d
                if d < 2:
                    reject(params, "d below 2")
                    continue
                if d > d_cap:
                    reject(params, "d above cap")
                    continue
                if not is_squarefree(d):
                    reject(params, "d not squarefree")
                    continue
                if d % 4 == 1:
                    reject(params, "d = 1 (mod 4)")
                    continue
                if nr_decompose(d).r in (1, -1):
                    reject(params, "r = +-1")
                    continue
                field = FieldDesc(d)
                unit = fundamental_unit(field)
                if unit.value != field.element(params.alpha, params.beta):
                    reject(params, "unit not fundamental")
                    continue
                accepted.append(params)
    return FamilyScan(tuple(accepted), tuple(rejected))

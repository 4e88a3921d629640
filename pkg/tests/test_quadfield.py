"""Exact field arithmetic: algebra laws, integrality, canonical ray labels."""

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from unaryperfect.quadfield import (
    FieldDesc,
    FieldElem,
    PrimitivePair,
    QuadFieldError,
    is_squarefree,
    primitive_normalize,
    slope,
)

SQUAREFREE = [d for d in range(2, 300) if is_squarefree(d)]

fields = st.sampled_from([FieldDesc(d) for d in SQUAREFREE])
coords = st.fractions(min_value=-40, max_value=40, max_denominator=24)


@st.composite
def elems(draw, n=1, nonzero=False):
    """n elements of one shared field."""
    field = draw(fields)
    out = []
    for _ in range(n):
        x = FieldElem(field, draw(coords), draw(coords))
        if nonzero:
            assume(x)
        out.append(x)
    return out[0] if n == 1 else tuple(out)


def test_squarefree_against_naive():
    for n in range(1, 2000):
        naive = all(n % (p * p) for p in range(2, math.isqrt(n) + 1))
        assert is_squarefree(n) == naive, n
    assert not is_squarefree(0)
    assert not is_squarefree(-4)


@pytest.mark.parametrize("bad", [1, 0, -5, 4, 12, 18, 999999999999999998 << 2])
def test_field_rejects_bad_d(bad):
    with pytest.raises(QuadFieldError):
        FieldDesc(bad)


def test_field_rejects_non_int():
    with pytest.raises(QuadFieldError):
        FieldDesc(True)
    with pytest.raises(QuadFieldError):
        FieldDesc("7")


def test_basis_kind():
    assert FieldDesc(2).basis_kind == "SQRT"
    assert FieldDesc(7).basis_kind == "SQRT"
    assert FieldDesc(5).basis_kind == "HALF"
    assert FieldDesc(13).half_basis
    assert not FieldDesc(1007).half_basis


def test_omega():
    assert FieldDesc(7).omega() == FieldDesc(7).sqrt_d()
    w = FieldDesc(5).omega()
    assert (w.a, w.b) == (Fraction(1, 2), Fraction(1, 2))
    # omega satisfies x^2 - x - (d-1)/4 = 0 on the half basis
    assert w * w == w + 1


@given(elems(3))
def test_ring_laws(xyz):
    x, y, z = xyz
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x - y + y == x
    assert x + (-x) == 0 * x


@given(elems(2))
def test_conjugation_is_a_ring_map(xy):
    x, y = xy
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x


@given(elems(2))
def test_trace_and_norm(xy):
    x, y = xy
    assert x.trace() == x.a * 2 == (x + x.conj()).a
    assert x.norm() == (x * x.conj()).a
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()


@given(elems(nonzero=True))
def test_inverse(x):
    one = x.field.one()
    assert x * x.inverse() == one
    assert x / x == one
    assert x ** (-2) == (x.inverse()) ** 2


@given(elems(), st.integers(min_value=0, max_value=8))
def test_pow_matches_repeated_product(x, n):
    expected = x.field.one()
    for _ in range(n):
        expected = expected * x
    assert x**n == expected


def test_zero_inverse_raises():
    z = FieldDesc(7).element(0)
    with pytest.raises(ZeroDivisionError):
        z.inverse()


def test_cross_field_arithmetic_rejected():
    with pytest.raises(QuadFieldError):
        FieldDesc(2).one() + FieldDesc(3).one()


@given(elems())
def test_real_sign_matches_float_embedding(x):
    approx = float(x.a) + float(x.b) * math.sqrt(x.field.d)
    assume(abs(approx) > 1e-6)
    assert x.real_sign() == (1 if approx > 0 else -1)


@given(elems(nonzero=True))
def test_nonzero_elements_have_a_sign(x):
    # sqrt(d) is irrational, so a + b*sqrt(d) = 0 forces a = b = 0
    assert x.real_sign() != 0
    assert (-x).real_sign() == -x.real_sign()


@given(elems())
def test_totally_positive_means_both_embeddings(x):
    both = x.real_sign() > 0 and x.conj().real_sign() > 0
    assert x.is_totally_positive() == both


@given(fields, st.integers(-30, 30), st.integers(-30, 30))
def test_basis_coords_round_trip(field, u, v):
    y = field.from_basis_coords(u, v)
    assert y.is_integral()
    assert y.basis_coords() == (u, v)


@given(fields, st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_integral_elements_form_a_ring(field, u1, v1, u2, v2):
    x = field.from_basis_coords(u1, v1)
    y = field.from_basis_coords(u2, v2)
    assert (x + y).is_integral()
    assert (x * y).is_integral()
    assert x.trace().denominator == 1
    assert x.norm().denominator == 1


def test_integrality_boundary_cases():
    F5 = FieldDesc(5)
    assert F5.element(Fraction(1, 2), Fraction(1, 2)).is_integral()
    assert not F5.element(Fraction(1, 2), Fraction(1, 4)).is_integral()
    assert not F5.element(Fraction(1, 2)).is_integral()  # parity mismatch
    F7 = FieldDesc(7)
    assert F7.element(3, -2).is_integral()
    assert not F7.element(Fraction(1, 2), Fraction(1, 2)).is_integral()


def test_basis_coords_requires_integrality():
    with pytest.raises(QuadFieldError):
        FieldDesc(7).element(Fraction(1, 3)).basis_coords()


def test_primitive_normalize_frozen():
    F7 = FieldDesc(7)
    a1 = F7.element(Fraction(1, 2), Fraction(5, 28))
    assert primitive_normalize(a1) == PrimitivePair(14, 5)
    assert slope(a1) == Fraction(5, 14)
    F2 = FieldDesc(2)
    assert primitive_normalize(F2.element(3, -2)) == PrimitivePair(3, -2)
    assert primitive_normalize(F2.element(6, -4)) == PrimitivePair(3, -2)


@st.composite
def tp_elems(draw):
    """Totally positive by construction: |b|*sqrt(d) kept below a."""
    field = draw(fields)
    a = draw(st.fractions(min_value=1, max_value=40, max_denominator=12))
    t = draw(st.fractions(min_value=Fraction(-9, 10), max_value=Fraction(9, 10), max_denominator=10))
    b = t * a / (math.isqrt(field.d) + 1)
    return FieldElem(field, a, b)


@given(tp_elems(), st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20))
def test_primitive_label_is_scale_invariant(x, lam):
    pair = primitive_normalize(x)
    assert primitive_normalize(lam * x) == pair
    # the label reconstructs the ray
    rep = x.field.element(pair.p, pair.q)
    assert slope(rep) == slope(x)
    assert math.gcd(pair.p, pair.q) == 1 and pair.p > 0


def test_primitive_pair_validation():
    for p, q in [(0, 1), (-3, 1), (2, 4), (6, 3)]:
        with pytest.raises(QuadFieldError):
            PrimitivePair(p, q)
    PrimitivePair(1, 0)
    PrimitivePair(14, -5)


def test_normalize_requires_totally_positive():
    F = FieldDesc(7)
    with pytest.raises(QuadFieldError):
        primitive_normalize(F.element(1, 1))  # 1 + sqrt(7) has negative conjugate
    with pytest.raises(QuadFieldError):
        slope(F.element(-2))


@given(tp_elems())
def test_slope_lies_in_the_cone(x):
    assert x.is_totally_positive()
    s = slope(x)
    assert s * s * x.field.d < 1


def test_rendering():
    F = FieldDesc(7)
    assert str(F.element(1, 1)) == "1 + sqrt(7)"
    assert str(F.element(0, -1)) == "-sqrt(7)"
    assert str(F.element(Fraction(-3, 2))) == "-3/2"
    assert str(F.element(0, 5)) == "5*sqrt(7)"
    assert str(FieldDesc(5).element(Fraction(1, 2), Fraction(-1, 2))) == "1/2 - 1/2*sqrt(5)"
    assert repr(F.element(2, -1)) == "FieldElem(7: 2 - sqrt(7))"

"""Polynomial layer: construction, arithmetic, exact division, calculus."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthotoric import EXACT, FLOAT, InexactDivision, Polynomial
from orthotoric.poly import arith


def test_leading_zeros_stripped():
    p = Polynomial([0, 0, 3, 2])
    assert p.coeffs == (Fraction(3), Fraction(2))
    assert p.degree == 1


def test_zero_polynomial_degree():
    assert Polynomial([0, 0]).is_zero()
    assert Polynomial.zero().degree == -1
    assert Polynomial.zero().coeffs == ()
    assert Polynomial.zero(FLOAT).mode == FLOAT


def test_unknown_mode_rejected():
    with pytest.raises(ValueError, match="unknown mode"):
        Polynomial([1], mode="symbolic")


def test_exact_mode_rejects_odd_types():
    with pytest.raises(TypeError):
        Polynomial([1j])


def test_exact_floats_converted_exactly():
    # 0.5 has an exact binary expansion, so no information is lost.
    assert Polynomial([0.5]).coeffs == (Fraction(1, 2),)


def test_string_coefficients():
    assert Polynomial(["2/3", 1]).coeffs == (Fraction(2, 3), Fraction(1))


def test_immutable():
    p = Polynomial([1, 2])
    with pytest.raises(AttributeError):
        p.coeffs = (Fraction(5),)


@pytest.mark.parametrize(
    "roots,mults,expect",
    [
        ([2], None, (1, -2)),
        ([1, -1], None, (1, 0, -1)),
        ([3], [2], (1, -6, 9)),
        ([0, 1], [1, 2], (1, -2, 1, 0)),
    ],
)
def test_from_roots(roots, mults, expect):
    p = Polynomial.from_roots(roots, mults)
    assert p.coeffs == tuple(Fraction(c) for c in expect)


def test_from_roots_length_mismatch():
    with pytest.raises(ValueError):
        Polynomial.from_roots([1, 2], [1])
    with pytest.raises(ValueError):
        Polynomial.from_roots([1], [-1])


def test_call_matches_numpy():
    coeffs = [2.0, -3.0, 0.5, 7.0]
    p = Polynomial(coeffs, FLOAT)
    for t in np.linspace(-2, 2, 9):
        assert p(t) == pytest.approx(np.polyval(coeffs, t), rel=1e-14)


@pytest.mark.parametrize("order", [0, 1, 2, 3, 5])
def test_eval_and_derivatives_vs_polyder(order):
    coeffs = [1.0, -4.0, 3.36, 0.25, -1.0]
    p = Polynomial(coeffs, FLOAT)
    t = 0.7
    vals = p.eval_and_derivatives(t, order)
    assert len(vals) == order + 1
    for k, v in enumerate(vals):
        expect = np.polyval(np.polyder(np.array(coeffs), k) if k else coeffs, t)
        assert v == pytest.approx(float(expect), rel=1e-12, abs=1e-12)


def test_eval_and_derivatives_negative_order():
    with pytest.raises(ValueError):
        Polynomial([1]).eval_and_derivatives(0.0, -1)


def test_mixed_mode_arithmetic_rejected():
    with pytest.raises(ValueError, match="mixed-mode"):
        Polynomial([1]) + Polynomial([1.0], FLOAT)


def test_scalar_multiple():
    p = Polynomial([1, -2]) * 3
    assert p.coeffs == (Fraction(3), Fraction(-6))
    assert (2 * Polynomial([1.0], FLOAT)).coeffs == (2.0,)


def test_divide_exact_recovers_factor():
    a = Polynomial.from_roots([1, 2, 3])
    b = Polynomial.from_roots([2])
    q = a.divide_exact(b)
    assert q == Polynomial.from_roots([1, 3])


def test_divide_exact_remainder_raises():
    with pytest.raises(InexactDivision):
        Polynomial([1, 0, 1]).divide_exact(Polynomial([1, -1]))


def test_divide_exact_degree_too_low():
    with pytest.raises(InexactDivision, match="degree"):
        Polynomial([1, 1]).divide_exact(Polynomial([1, 0, 0]))


def test_divide_by_zero():
    with pytest.raises(ZeroDivisionError):
        Polynomial([1]).divide_exact(Polynomial.zero())


def test_divide_exact_float_tolerates_roundoff():
    a = Polynomial.from_roots([0.2, 0.8, 1.9], mode=FLOAT)
    b = Polynomial.from_roots([0.8], mode=FLOAT)
    q = a.divide_exact(b)
    expect = Polynomial.from_roots([0.2, 1.9], mode=FLOAT)
    assert np.allclose(q.coeffs, expect.coeffs, atol=1e-12)


def test_divide_exact_float_rejects_genuine_remainder():
    a = Polynomial([1.0, 0.0, 1.0], FLOAT)
    with pytest.raises(InexactDivision):
        a.divide_exact(Polynomial([1.0, -1.0], FLOAT))


def test_derivative_antiderivative_roundtrip():
    p = Polynomial([3, "1/2", -2, 7])
    assert p.antiderivative(constant=5).derivative() == p
    assert p.antiderivative().coeffs[-1] == 0


def test_derivative_higher_order():
    p = Polynomial([1, 0, 0, 0])  # t^3
    assert p.derivative(2) == Polynomial([6, 0])
    assert p.derivative(4).is_zero()


def test_to_float_and_json_roundtrip():
    p = Polynomial(["1/3", 2])
    f = p.to_float()
    assert f.mode == FLOAT
    assert f.coeffs[0] == pytest.approx(1 / 3)
    assert Polynomial.from_json(p.to_json()) == p
    assert Polynomial.from_json(f.to_json(), FLOAT) == f


def test_arith_dispatch():
    a, b = Polynomial([1, 1]), Polynomial([1, -1])
    assert arith(a, b, "mul") == Polynomial([1, 0, -1])
    assert arith(a * b, b, "divide_exact") == a
    with pytest.raises(ValueError):
        arith(a, b, "pow")


small_rationals = st.fractions(
    min_value=-4, max_value=4, max_denominator=6
)
polys = st.lists(small_rationals, min_size=1, max_size=5).map(Polynomial)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a - b) + b == a


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_product_division_roundtrip(a, b):
    if b.is_zero():
        return
    assert (a * b).divide_exact(b) == a


@settings(max_examples=40, deadline=None)
@given(polys, small_rationals)
def test_evaluation_is_ring_homomorphism(a, t):
    square = a * a
    assert square(t) == a(t) * a(t)

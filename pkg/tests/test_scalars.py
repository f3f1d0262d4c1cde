import math
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from gmpy2 import mpfr, mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from ritz import (
    MAX_PI_PRECISION,
    NegativeOperand,
    PrecisionUnsupported,
    as_rational,
    default_tolerance,
    overlap_element,
    pi_const,
    precision,
    sqrt_pf,
    to_float,
)
from ritz.study import format_significant

rationals = st.fractions(
    min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**6
)


def exact_fraction(value: mpmath.mpf) -> mpq:
    """Exact rational content of an mpmath float (independent witness)."""
    sign, man, exp, _ = value._mpf_
    return mpq(-int(man) if sign else int(man)) * mpq(2) ** int(exp)


def test_as_rational_forms():
    assert as_rational("3/7") == mpq(3, 7)
    assert as_rational("0.5") == mpq(1, 2)
    assert as_rational(Fraction(2, 6)) == mpq(1, 3)
    assert as_rational(0.25) == mpq(1, 4)
    assert as_rational(mpfr("0.1", 53)).denominator == 2**55
    with pytest.raises(TypeError):
        as_rational(object())


def test_to_float_exact_division():
    assert to_float(mpq(1, 30), 53) == mpfr(1, 53) / 30
    assert to_float(0, 53) == 0
    assert to_float(mpq(1, 30), 53).precision == 53


def test_to_float_is_correctly_rounded():
    # Round-trip bound: a correctly rounded value sits within half an ulp.
    x = to_float(overlap_element(10, 10), 113)
    exact = mpq(2, 21 * 22 * 23)
    assert abs(as_rational(x) - exact) <= exact / 2**113
    # Independent witness: mpmath's division at the same precision must
    # produce bit-identical content.
    with mpmath.workprec(113):
        want = mpmath.mpf(2) / 10626
    assert as_rational(x) == exact_fraction(want)


def test_precision_context_rounds_at_p():
    with precision(256):
        x = mpfr(1) / 3
    assert x.precision == 256
    with pytest.raises(ValueError):
        precision(52)
    with pytest.raises(TypeError):
        precision("256")


def test_sqrt_examples():
    assert sqrt_pf(mpfr("0.25")) == mpfr("0.5")
    assert sqrt_pf(mpfr(1)) == 1
    root7 = sqrt_pf(to_float(7, 113))
    assert root7.precision == 113
    assert format_significant(root7, 20) == "2.6457513110645905905"
    # |result^2 - x| <= 2 ulp at the operand's precision
    with precision(113):
        assert abs(root7 * root7 - 7) <= mpfr(7) * 4 / 2**113


def test_sqrt_newton_oracle():
    # Exact-rational Newton iteration, independent of MPFR's square root.
    approx = mpq(5, 2)
    for _ in range(8):
        approx = (approx + 7 / approx) / 2
    # 8 doublings from a 1e-1 start leave error far below 2^-113.
    assert abs(as_rational(sqrt_pf(to_float(7, 113))) - approx) < mpq(1, 2**110)


def test_sqrt_negative_raises():
    with pytest.raises(NegativeOperand):
        sqrt_pf(mpfr(-1))
    with pytest.raises(NegativeOperand):
        sqrt_pf(mpfr("nan"))


def test_pi_const_examples():
    assert pi_const(53) == mpfr(math.pi)
    # Two independent backends recompute the constant from scratch.
    with mpmath.workprec(113):
        assert as_rational(pi_const(113)) == exact_fraction(+mpmath.pi)
    assert pi_const(MAX_PI_PRECISION) == gmpy2.const_pi(precision=MAX_PI_PRECISION)
    assert pi_const(113) == gmpy2.const_pi(precision=113)


def test_pi_const_bounds():
    with pytest.raises(PrecisionUnsupported):
        pi_const(MAX_PI_PRECISION + 1)
    with pytest.raises(ValueError):
        pi_const(52)


def test_pi_squared_half_matches_reference_limit():
    with precision(113):
        pi = pi_const(113)
        val = pi * pi / 2
    assert format_significant(val, 10) == "4.934802200"
    with mpmath.workprec(150):
        want = mpmath.nstr(mpmath.pi**2 / 2, 25)
    assert format_significant(val, 21) == want[:22]


def test_default_tolerance():
    assert default_tolerance(256) == mpfr(2) ** -128
    assert default_tolerance(113) == gmpy2.exp2(mpfr(-113) / 2)


@given(a=rationals, b=rationals)
def test_rational_add_mul_roundtrip(a, b):
    qa, qb = as_rational(a), as_rational(b)
    assert (qa + qb) - qb == qa
    if qb != 0:
        assert (qa * qb) / qb == qa


@given(a=rationals, b=rationals)
def test_to_float_monotone(a, b):
    qa, qb = as_rational(a), as_rational(b)
    if qa > qb:
        qa, qb = qb, qa
    if qa < qb:
        assert to_float(qa, 53) <= to_float(qb, 53)


@settings(deadline=None)
@given(
    mantissa=st.floats(min_value=1.0, max_value=2.0, allow_nan=False),
    exponent=st.integers(min_value=-100, max_value=100),
)
def test_sqrt_relative_error_bound(mantissa, exponent):
    p = 113
    x = to_float(as_rational(mantissa) * mpq(2) ** exponent, p)
    r = sqrt_pf(x)
    with precision(p):
        rel = abs(r * r - x) / x
    assert rel <= 4 * mpfr(2) ** (1 - p)

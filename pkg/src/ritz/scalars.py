"""Exact rationals and precision-tagged binary floats.

Matrix assembly throughout the package is exact (GMP rationals via
``gmpy2.mpq``); eigensolves run on MPFR binary floats (``gmpy2.mpfr``) whose
significand width is chosen per call.  Inside a ``precision(p)`` block every
floating-point operation is correctly rounded to ``p`` bits with ties to
even, so results are reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpfr, mpq

from .exceptions import NegativeOperand, PrecisionUnsupported

#: Narrowest supported significand (IEEE-754 double width).
MIN_PRECISION = 53

#: Widest precision ``pi_const`` can serve from its stored literal.
MAX_PI_PRECISION = 640

#: Default working precision for eigensolves.
DEFAULT_PRECISION = 256

#: Public aliases for the two scalar kinds used across the package.
Rational = mpq
PFloat = mpfr

# 219 fractional digits; ~90 bits of margin beyond the 640-bit cap, so the
# rounding of the literal always agrees with the rounding of the constant.
_PI_LITERAL = (
    "3."
    "14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
    "82148086513282306647093844609550582231725359408128"
    "48111745028410270193852110555964462294895493038196"
    "4428810975665933446"
)
_PI_EXACT = mpq(Fraction(_PI_LITERAL))


def check_precision(p: int) -> int:
    """Validate a significand width in bits, returning it unchanged."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"precision must be an int, got {type(p).__name__}")
    if p < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {p}")
    return p


def precision(p: int) -> gmpy2.context:
    """Context manager setting the working precision to ``p`` bits.

    Rounding is to nearest with ties to even.  Blocks nest; the previous
    context is restored on exit.
    """
    check_precision(p)
    return gmpy2.context(precision=p)


def as_rational(value) -> mpq:
    """Coerce a value to an exact rational.

    Accepts integers, ``Fraction``, ``mpq``, binary floats (``float`` or
    ``mpfr``, converted exactly), and strings such as ``"3/7"`` or ``"0.5"``
    (decimals parse as scaled integers, so they stay exact).
    """
    if isinstance(value, mpq):
        return value
    if isinstance(value, (int, Fraction)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(Fraction(value))
    if isinstance(value, (float, mpfr)):
        return mpq(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def to_float(value, p: int) -> mpfr:
    """Round an exact rational (or any coercible value) to ``p`` bits."""
    check_precision(p)
    return mpfr(as_rational(value), p)


def sqrt_pf(x) -> mpfr:
    """Square root, correctly rounded at the operand's own precision.

    Non-``mpfr`` operands are taken at the 53-bit baseline.
    """
    if not isinstance(x, mpfr):
        x = mpfr(x, MIN_PRECISION)
    if gmpy2.is_nan(x):
        raise NegativeOperand("square root of NaN")
    if x < 0:
        raise NegativeOperand(f"square root of negative value {x}")
    with gmpy2.context(precision=x.precision):
        return gmpy2.sqrt(x)


def pi_const(p: int) -> mpfr:
    """The circle constant, correctly rounded to ``p`` bits.

    Served from a stored 219-digit literal; precisions beyond
    ``MAX_PI_PRECISION`` raise ``PrecisionUnsupported``.
    """
    check_precision(p)
    if p > MAX_PI_PRECISION:
        raise PrecisionUnsupported(
            f"pi literal supports at most {MAX_PI_PRECISION} bits, got {p}"
        )
    return mpfr(_PI_EXACT, p)


def default_tolerance(p: int) -> mpfr:
    """Default residual tolerance at precision ``p``: ``2**(-p/2)``.

    Splits the precision budget between factorization and iteration error.
    """
    check_precision(p)
    with gmpy2.context(precision=MIN_PRECISION):
        return gmpy2.exp2(mpfr(-p) / 2)

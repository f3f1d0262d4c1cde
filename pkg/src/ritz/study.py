"""Convergence studies across basis sizes.

A report holds full-precision Ritz values per basis size; rounding happens
only at formatting time.  The significant-digit formatter truncates toward
zero (it never rounds up), so a displayed value carries exactly the leading
digits of the computed one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from gmpy2 import mpfr, mpq, mpz

from .exceptions import RitzError, StateCountMismatch
from . import scalars
from .eigen import Route, solve_generalized
from .model import ProblemSpec, ReferenceSpectrum, build_matrices
from .scalars import as_rational, default_tolerance


@dataclass(frozen=True)
class ConvergenceReport:
    """First ``states`` Ritz values for each basis size in a range."""

    lam: mpq
    states: int
    precision: int
    route: Route
    rows: tuple[tuple[int, tuple[mpfr, ...]], ...]


class MonotonicityViolation(NamedTuple):
    """A tracked Ritz value that increased between consecutive basis sizes."""

    state: int
    n_prev: int
    n_next: int
    increase: mpfr


@dataclass(frozen=True)
class GapTable:
    """Per-row gaps W_m(N) - E_m against a reference spectrum."""

    reference: ReferenceSpectrum
    rows: tuple[tuple[int, tuple[mpfr, ...]], ...]

    @property
    def min_gap(self) -> mpfr:
        return min(g for _, gaps in self.rows for g in gaps)


def run_convergence(
    lam,
    n_min: int,
    n_max: int,
    states: int,
    precision: int = scalars.DEFAULT_PRECISION,
    route: Route = Route.LDLT,
) -> ConvergenceReport:
    """Solve the model problem independently at every basis size in a range.

    Requires ``1 <= states <= n_min <= n_max``.  Rows are computed with no
    warm starts, in ascending order of basis size; solver errors propagate
    annotated with the failing size.
    """
    if not 1 <= states <= n_min <= n_max:
        raise ValueError(
            f"need 1 <= states <= n_min <= n_max, got states={states}, "
            f"n_min={n_min}, n_max={n_max}"
        )
    lamq = as_rational(lam)
    rows = []
    for n in range(n_min, n_max + 1):
        h, s = build_matrices(ProblemSpec(lamq, n))
        try:
            sol = solve_generalized(h, s, route=route, precision=precision)
        except RitzError as exc:
            raise type(exc)(f"basis size {n}: {exc}") from exc
        rows.append((n, tuple(sol.ritz_values[:states])))
    return ConvergenceReport(lamq, states, precision, route, tuple(rows))


def check_monotone(report: ConvergenceReport) -> list[MonotonicityViolation]:
    """Violations of the nonincreasing-in-N property, within tol(p).

    Empty iff every tracked Ritz value satisfies
    W_m(N+1) <= W_m(N) + 2**(-p/2) between consecutive rows.
    """
    tol = default_tolerance(report.precision)
    out: list[MonotonicityViolation] = []
    for (n_prev, w_prev), (n_next, w_next) in zip(report.rows, report.rows[1:]):
        for m in range(report.states):
            increase = w_next[m] - w_prev[m]
            if increase > tol:
                out.append(MonotonicityViolation(m + 1, n_prev, n_next, increase))
    return out


def compare_to_reference(report: ConvergenceReport, ref: ReferenceSpectrum) -> GapTable:
    """Gaps W_m(N) - E_m per row; every gap should be >= 0 (upper bounds).

    Raises ``StateCountMismatch`` when the reference covers fewer states
    than the report tracks.
    """
    if len(ref.values) < report.states:
        raise StateCountMismatch(
            f"reference has {len(ref.values)} states, report tracks {report.states}"
        )
    with scalars.precision(report.precision):
        rows = tuple(
            (n, tuple(w[m] - ref.values[m] for m in range(report.states)))
            for n, w in report.rows
        )
    return GapTable(ref, rows)


_GUARD_DIGITS = 6


def format_significant(x, digits: int = 10) -> str:
    """Fixed-notation decimal with exactly ``digits`` significant digits.

    Truncates toward zero after first rounding (ties to even) at
    ``digits + 6`` places, so sub-guard computation noise below a clean
    boundary cannot drag the display down (5 - 1e-30 prints as
    5.000000000, not 4.999999999).  The conversion is exact integer
    arithmetic on the value's rational form; trailing zeros are genuine.
    """
    if digits < 1:
        raise ValueError(f"digits must be >= 1, got {digits}")
    q = as_rational(x)
    if q == 0:
        return "0." + "0" * (digits - 1) if digits > 1 else "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    # Decimal exponent e with 10^e <= q < 10^(e+1), found exactly.
    num, den = q.numerator, q.denominator
    e = int(mpz(num).num_digits(10) - mpz(den).num_digits(10))
    while mpq(10) ** e > q:
        e -= 1
    while mpq(10) ** (e + 1) <= q:
        e += 1
    # Round half-even at digits + guard, then truncate the decimal string.
    wide = digits + _GUARD_DIGITS
    shifted = q * mpq(10) ** (wide - 1 - e)
    floor = int(shifted)
    frac = shifted - floor
    half = mpq(1, 2)
    if frac > half or (frac == half and floor % 2 == 1):
        floor += 1
    mant = str(floor)
    if len(mant) > wide:  # rounding carried into a new leading digit
        e += 1
        mant = mant[:wide]
    mant = mant[:digits]
    if e >= digits - 1:
        return sign + mant + "0" * (e - digits + 1)
    if e >= 0:
        return sign + mant[: e + 1] + "." + mant[e + 1:]
    return sign + "0." + "0" * (-e - 1) + mant


def format_scientific(x, digits: int = 3) -> str:
    """Compact scientific notation for diagnostics output."""
    if not isinstance(x, mpfr):
        x = mpfr(as_rational(x), 53)
    if x == 0:
        return "0"
    mant, exp, _ = x.digits(10, digits + 1)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+03d}"


def to_csv(report: ConvergenceReport, digits: int = 10) -> str:
    """CSV table: header ``N,E1,...,Ek``, one row per basis size."""
    header = "N," + ",".join(f"E{m + 1}" for m in range(report.states))
    lines = [header]
    for n, values in report.rows:
        lines.append(str(n) + "," + ",".join(format_significant(w, digits) for w in values))
    return "\n".join(lines) + "\n"


def to_text(report: ConvergenceReport, digits: int = 10) -> str:
    """Aligned plain-text table of the report."""
    cols = ["N"] + [f"E{m + 1}" for m in range(report.states)]
    body = [
        [str(n)] + [format_significant(w, digits) for w in values]
        for n, values in report.rows
    ]
    widths = [max(len(row[c]) for row in [cols] + body) for c in range(len(cols))]
    lines = ["  ".join(name.rjust(w) for name, w in zip(cols, widths))]
    for row in body:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def report_json_dict(report: ConvergenceReport, digits: int = 10) -> dict:
    """JSON-ready dict; values are strings so emission round-trips bytewise."""
    return {
        "lambda": str(report.lam),
        "precision": report.precision,
        "route": report.route.value,
        "states": report.states,
        "rows": [
            {"n": n, "values": [format_significant(w, digits) for w in values]}
            for n, values in report.rows
        ],
    }


def stable_precision(
    lam,
    n_max: int,
    states: int,
    digits: int = 10,
    route: Route = Route.LDLT,
    start: int = 64,
    limit: int = 1024,
    n_min: int | None = None,
) -> int:
    """Smallest tried precision whose digits agree with the double-check run.

    Doubles the working precision until runs at (p, 2p) both succeed and
    print identically at the requested significant digits, then returns p.
    A precision too narrow to solve at all counts as unstable.  Raises
    ``RitzError`` if the cap is reached first.
    """
    p = max(start, scalars.MIN_PRECISION)
    lo = n_min if n_min is not None else max(states, n_max)
    results: dict[int, list | None] = {}

    def formatted(bits):
        if bits not in results:
            try:
                rep = run_convergence(lam, lo, n_max, states, precision=bits, route=route)
            except RitzError:
                results[bits] = None
            else:
                results[bits] = [
                    [format_significant(w, digits) for w in values] for _, values in rep.rows
                ]
        return results[bits]

    while 2 * p <= limit:
        current, doubled = formatted(p), formatted(2 * p)
        if current is not None and current == doubled:
            return p
        p *= 2
    raise RitzError(f"digits did not stabilize at or below {limit} bits")

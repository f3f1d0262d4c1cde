"""Bundled model problem: a particle on [0, 1] with a linear potential.

The operator is -(1/2) d^2/dx^2 + lam*x with Dirichlet ends psi(0) =
psi(1) = 0, expanded in the non-orthogonal polynomial family
f_i(x) = x^i (1 - x), i >= 1, which satisfies the boundary conditions
termwise.  Overlap and Hamiltonian matrix elements have closed rational
forms; a Gauss-Legendre quadrature oracle provides an independent numerical
check of both, and reference spectra are available for lam = 0 (analytic)
and lam = 1 (tabulated 10-digit values).
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr, mpq

from .exceptions import InsufficientNodes, UnsupportedLambda
from . import scalars
from .matrix import sym_from_upper
from .scalars import as_rational, pi_const, to_float

BASIS_FAMILY = "polynomial-dirichlet"

# Converged 10-digit reference values for the first four states at lam = 1,
# frozen from a precision-escalated run (64 -> 512 bits agree on all digits).
_REFERENCE_LAMBDA1 = ("5.432607855", "20.23986304", "44.91360966", "79.45707400")


@dataclass(frozen=True)
class ProblemSpec:
    """Potential strength and basis size of one variational run."""

    lam: mpq
    basis_size: int

    def __post_init__(self):
        object.__setattr__(self, "lam", as_rational(self.lam))
        if not isinstance(self.basis_size, int) or self.basis_size < 1:
            raise ValueError(f"basis size must be a positive integer, got {self.basis_size}")


@dataclass(frozen=True)
class ReferenceSpectrum:
    """Reference eigenvalues with their provenance ("analytic" or "table")."""

    lam: mpq
    values: tuple[mpfr, ...]
    provenance: str


def overlap_element(i: int, j: int) -> mpq:
    """<f_i | f_j> = 2 / ((i+j+1)(i+j+2)(i+j+3)), exactly."""
    _check_indices(i, j)
    n = i + j
    return mpq(2, (n + 1) * (n + 2) * (n + 3))


def hamiltonian_element(i: int, j: int, lam) -> mpq:
    """<f_i | -(1/2) d^2/dx^2 + lam*x | f_j>, exactly.

    Equals ij/((i+j)(i+j+1)(i+j-1)) + 2*lam/((i+j+2)(i+j+3)(i+j+4)).
    """
    _check_indices(i, j)
    n = i + j
    kinetic = mpq(i * j, n * (n + 1) * (n - 1))
    potential = 2 * as_rational(lam) / ((n + 2) * (n + 3) * (n + 4))
    return kinetic + potential


def _check_indices(i: int, j: int) -> None:
    if i < 1 or j < 1:
        raise ValueError(f"basis indices are 1-based, got ({i}, {j})")


def build_matrices(spec: ProblemSpec) -> tuple[np.ndarray, np.ndarray]:
    """Exact (H, S) pair for the given potential strength and basis size."""
    n = spec.basis_size
    lam = spec.lam
    h = sym_from_upper(n, lambda i, j: hamiltonian_element(i, j, lam))
    s = sym_from_upper(n, overlap_element)
    return h, s


def basis_coefficients(i: int) -> list[int]:
    """Integer coefficients of f_i(x) = x^i - x^(i+1), lowest power first."""
    if i < 1:
        raise ValueError(f"basis index must be >= 1, got {i}")
    coeffs = [0] * (i + 2)
    coeffs[i] = 1
    coeffs[i + 1] = -1
    return coeffs


def polynomial_derivative(coeffs: list[int]) -> list[int]:
    """Coefficient list of the derivative (exact integer manipulation)."""
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def polynomial_value(coeffs, x):
    """Horner evaluation; exact for rational x, correctly rounded for floats."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def gauss_legendre_unit(count: int, precision_bits: int) -> tuple[list[mpfr], list[mpfr]]:
    """Gauss-Legendre nodes and weights on [0, 1] at the requested precision.

    Exact (up to rounding) for polynomials of degree <= 2*count - 1.  Nodes
    are refined by Newton iteration on the Legendre recurrence with guard
    bits, then rounded down to the requested precision.
    """
    import math

    scalars.check_precision(precision_bits)
    if count < 1:
        raise ValueError(f"node count must be >= 1, got {count}")
    guard = precision_bits + 16
    nodes: list[mpfr] = [mpfr(0, precision_bits)] * count
    weights: list[mpfr] = [mpfr(0, precision_bits)] * count
    def legendre_pair(z):
        # P_count(z) and P_(count-1)(z) by the three-term recurrence.
        p_prev, p_curr = mpfr(1), z
        for order in range(2, count + 1):
            p_prev, p_curr = p_curr, ((2 * order - 1) * z * p_curr
                                      - (order - 1) * p_prev) / order
        return p_curr, p_prev

    with scalars.precision(guard):
        eps = gmpy2.exp2(mpfr(8 - guard))
        half = (count + 1) // 2
        for k in range(half):
            z = mpfr(math.cos(math.pi * (k + 0.75) / (count + 0.5)))
            for _ in range(80):
                p_curr, p_prev = legendre_pair(z)
                deriv = count * (z * p_curr - p_prev) / (z * z - 1)
                dz = p_curr / deriv
                z = z - dz
                if abs(dz) <= eps * max(abs(z), mpfr(1)):
                    break
            p_curr, p_prev = legendre_pair(z)
            deriv = count * (z * p_curr - p_prev) / (z * z - 1)
            w = 2 / ((1 - z * z) * deriv * deriv)
            lo = (1 - z) / 2   # map [-1, 1] -> [0, 1]; cos guess starts near +1
            hi = (1 + z) / 2
            nodes[k] = mpfr(lo, precision_bits)
            nodes[count - 1 - k] = mpfr(hi, precision_bits)
            weights[k] = weights[count - 1 - k] = mpfr(w / 2, precision_bits)
    return nodes, weights


def _min_nodes(i: int, j: int) -> int:
    # Highest integrand degree is i + j + 4; count nodes with a safety of one.
    return (i + j + 5) // 2 + 1


def quadrature_overlap_element(i: int, j: int, nodes: int, precision_bits: int = 113) -> mpfr:
    """Integral of f_i * f_j on [0, 1] by Gauss-Legendre quadrature."""
    _check_indices(i, j)
    if nodes < _min_nodes(i, j):
        raise InsufficientNodes(
            f"need at least {_min_nodes(i, j)} nodes for indices ({i}, {j}), got {nodes}"
        )
    xs, ws = gauss_legendre_unit(nodes, precision_bits)
    fi = basis_coefficients(i)
    fj = basis_coefficients(j)
    with scalars.precision(precision_bits):
        acc = mpfr(0)
        for x, w in zip(xs, ws):
            acc += w * polynomial_value(fi, x) * polynomial_value(fj, x)
    return acc


def quadrature_hamiltonian_element(
    i: int, j: int, lam, nodes: int, precision_bits: int = 113
) -> mpfr:
    """Integral of f_i * (-(1/2) f_j'' + lam*x*f_j) by Gauss-Legendre quadrature.

    The second derivative comes from the closed-form polynomial coefficients
    of f_j, and the integrand is used as written (no integration by parts),
    so the oracle stays independent of the symmetrized closed form.
    """
    _check_indices(i, j)
    if nodes < _min_nodes(i, j):
        raise InsufficientNodes(
            f"need at least {_min_nodes(i, j)} nodes for indices ({i}, {j}), got {nodes}"
        )
    xs, ws = gauss_legendre_unit(nodes, precision_bits)
    fi = basis_coefficients(i)
    fj = basis_coefficients(j)
    fj2 = polynomial_derivative(polynomial_derivative(fj))
    lam_f = to_float(lam, precision_bits)
    with scalars.precision(precision_bits):
        half = mpfr(1) / 2
        acc = mpfr(0)
        for x, w in zip(xs, ws):
            action = -half * polynomial_value(fj2, x) + lam_f * x * polynomial_value(fj, x)
            acc += w * polynomial_value(fi, x) * action
    return acc


def exact_reference(lam, count: int, precision_bits: int) -> ReferenceSpectrum:
    """Reference spectrum for the model problem.

    lam = 0: analytic levels n^2 pi^2 / 2 of the bare box (Dirichlet ends,
    unit width).  lam = 1: tabulated 10-digit converged values, first four
    states only.  Other strengths raise ``UnsupportedLambda``.
    """
    lamq = as_rational(lam)
    scalars.check_precision(precision_bits)
    if lamq == 0:
        with scalars.precision(precision_bits):
            pi = pi_const(precision_bits)
            values = tuple(pi * pi * (n * n) / 2 for n in range(1, count + 1))
        return ReferenceSpectrum(lamq, values, "analytic")
    if lamq == 1:
        if count > len(_REFERENCE_LAMBDA1):
            raise ValueError(
                f"only {len(_REFERENCE_LAMBDA1)} reference states stored for lam=1"
            )
        values = tuple(mpfr(s, precision_bits) for s in _REFERENCE_LAMBDA1[:count])
        return ReferenceSpectrum(lamq, values, "table")
    raise UnsupportedLambda(f"no reference spectrum for potential strength {lamq}")

"""Dense symmetric matrices over exact rationals or MPFR floats.

Matrices are plain ``numpy`` object arrays holding ``mpq`` (exact) or
``mpfr`` (precision-tagged) entries.  Constructors mirror the upper triangle
so symmetry is exact by construction.  Basis indices are 1-based at the API
boundary (``element(i, j)`` callbacks); storage is 0-based internally.

The exact LDL^T factorization doubles as a positive-definiteness
certificate: over the rationals it is computed without rounding, and the
matrix is positive definite iff every pivot is positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpfr, mpq

from .exceptions import DimensionMismatch, ZeroPivot
from . import scalars
from .scalars import as_rational, to_float


def dimension(a: np.ndarray) -> int:
    """Side length of a square matrix; raises ``DimensionMismatch`` otherwise."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    return a.shape[0]


def is_symmetric(a: np.ndarray) -> bool:
    """Exact elementwise symmetry test (no tolerance)."""
    n = dimension(a)
    return all(a[i, j] == a[j, i] for i in range(n) for j in range(i + 1, n))


def require_symmetric(a: np.ndarray) -> None:
    if not is_symmetric(a):
        raise ValueError("matrix is not symmetric")


def sym_from_upper(n: int, element) -> np.ndarray:
    """Build an exactly symmetric matrix from a 1-based upper-triangle rule.

    ``element(i, j)`` is evaluated once per pair with ``1 <= i <= j <= n``
    and mirrored, so ``a[i, j] == a[j, i]`` holds exactly.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    a = np.empty((n, n), dtype=object)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            v = element(i, j)
            a[i - 1, j - 1] = v
            a[j - 1, i - 1] = v
    return a


def rational_matrix(rows) -> np.ndarray:
    """Object array of exact rationals from any nested sequence."""
    a = np.array([[as_rational(x) for x in row] for row in rows], dtype=object)
    if a.ndim != 2:
        raise DimensionMismatch("expected a rectangular nested sequence")
    return a


def float_matrix(a, p: int) -> np.ndarray:
    """Entrywise correctly rounded copy at ``p`` bits."""
    rows = [[to_float(x, p) for x in row] for row in np.asarray(a, dtype=object)]
    return np.array(rows, dtype=object)


def identity_float(n: int, p: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=object)
    one, zero = mpfr(1, p), mpfr(0, p)
    for i in range(n):
        for j in range(n):
            a[i, j] = one if i == j else zero
    return a


def _float_precision(*arrays) -> int | None:
    """Largest mpfr precision present in the operands, or None if all exact."""
    best = None
    for a in arrays:
        for x in np.asarray(a, dtype=object).flat:
            if isinstance(x, mpfr):
                best = x.precision if best is None else max(best, x.precision)
    return best


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product: exact over rationals, correctly rounded per step over floats."""
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply shapes {a.shape} and {b.shape}")
    p = _float_precision(a, b)
    if p is None:
        return a @ b
    with scalars.precision(p):
        return a @ b


def matvec(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    if a.ndim != 2 or v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise DimensionMismatch(f"cannot apply shape {a.shape} to vector of length {v.shape}")
    p = _float_precision(a, v)
    if p is None:
        return a @ v
    with scalars.precision(p):
        return a @ v


def transpose_conjugate(a: np.ndarray) -> np.ndarray:
    """Adjoint; equals the plain transpose for the real scalars used here."""
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {a.shape}")
    return a.T.copy()


@dataclass(frozen=True)
class LdltFactors:
    """Exact factorization A = L diag(d) L^T with L unit lower triangular."""

    lower: np.ndarray
    diagonal: tuple[mpq, ...]

    def reconstruct(self) -> np.ndarray:
        """L diag(d) L^T, computed exactly."""
        n = len(self.diagonal)
        d = np.zeros((n, n), dtype=object)
        for k, dk in enumerate(self.diagonal):
            d[k, k] = dk
        return self.lower @ d @ self.lower.T

    def determinant(self) -> mpq:
        det = mpq(1)
        for dk in self.diagonal:
            det *= dk
        return det

    @property
    def is_positive(self) -> bool:
        return all(dk > 0 for dk in self.diagonal)


def ldlt(a: np.ndarray) -> LdltFactors:
    """Exact rational LDL^T without pivoting.

    Fails with ``ZeroPivot(k)`` (1-based) iff the k-th leading minor is
    singular; for a positive definite matrix all pivots come out positive,
    which is the exact certificate used throughout the package.
    """
    n = dimension(a)
    require_symmetric(a)
    # Work on the lower triangle of a rational copy.
    m = [[as_rational(a[i, j]) for j in range(i + 1)] for i in range(n)]
    lower = np.zeros((n, n), dtype=object)
    for i in range(n):
        lower[i, i] = mpq(1)
        for j in range(i):
            lower[i, j] = mpq(0)
    diag: list[mpq] = []
    for k in range(n):
        dk = m[k][k]
        if dk == 0:
            raise ZeroPivot(k + 1)
        diag.append(dk)
        for i in range(k + 1, n):
            f = m[i][k] / dk
            lower[i, k] = f
            for j in range(k + 1, i + 1):
                m[i][j] -= f * m[j][k]
    return LdltFactors(lower, tuple(diag))


def gram_determinant(a: np.ndarray) -> mpq:
    """Exact determinant of a symmetric rational matrix.

    Computed by fraction-free-style Gaussian elimination with row pivoting,
    so singular and indefinite inputs are handled; for positive definite
    inputs it equals the product of the LDL^T pivots.
    """
    n = dimension(a)
    require_symmetric(a)
    m = [[as_rational(a[i, j]) for j in range(n)] for i in range(n)]
    det = mpq(1)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot_row is None:
            return mpq(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        pivot = m[k][k]
        det *= pivot
        for r in range(k + 1, n):
            if m[r][k] == 0:
                continue
            f = m[r][k] / pivot
            for c in range(k + 1, n):
                m[r][c] -= f * m[k][c]
    return det


def is_positive_definite(a: np.ndarray) -> bool:
    """True iff all exact LDL^T pivots are positive."""
    try:
        return ldlt(a).is_positive
    except ZeroPivot:
        # A singular leading minor rules out positive definiteness.
        return False


def invert_unit_lower(lower: np.ndarray) -> np.ndarray:
    """Exact inverse of a unit lower-triangular rational matrix."""
    n = dimension(lower)
    inv = np.zeros((n, n), dtype=object)
    for j in range(n):
        inv[j, j] = mpq(1)
        for i in range(n):
            if i != j:
                inv[i, j] = mpq(0)
    for j in range(n):
        for i in range(j + 1, n):
            s = mpq(0)
            for k in range(j, i):
                if lower[i, k] != 0 and inv[k, j] != 0:
                    s += as_rational(lower[i, k]) * inv[k, j]
            inv[i, j] = -s
    return inv

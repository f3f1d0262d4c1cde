"""Symmetric eigensolver and the reduction routes for the pencil (H, S).

The generalized problem H C = S C W with S symmetric positive definite is
reduced to a standard symmetric diagonalization along one of three routes:

* ``Route.INVSQRT`` -- symmetric orthogonalization: diagonalize
  S^(-1/2) H S^(-1/2) and back-transform C = S^(-1/2) U.
* ``Route.LDLT`` -- exact rational congruence: with S = L D L^T computed
  without rounding, diagonalize D^(-1/2) L^(-1) H L^(-T) D^(-1/2); all
  floating-point error is confined to the final symmetric eigensolve.
* ``Route.NONSYM`` -- treat S^(-1)H as a general matrix and extract its
  eigenpairs with a shifted power/deflation iteration.  Numerically the
  weakest of the three; kept for comparison and excluded from large-basis
  studies.

Every route returns ascending Ritz values and S-orthonormal coefficient
columns (C^T S C = I), with each column's largest-magnitude entry made
positive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import gmpy2
import numpy as np
from gmpy2 import mpfr

from .exceptions import (
    DimensionMismatch,
    NoConvergence,
    NotPositiveDefinite,
    SingularOverlap,
    ZeroNorm,
    ZeroPivot,
)
from . import scalars
from .matrix import (
    _float_precision,
    dimension,
    float_matrix,
    identity_float,
    invert_unit_lower,
    ldlt,
    require_symmetric,
)
from .scalars import DEFAULT_PRECISION, as_rational, default_tolerance, sqrt_pf, to_float


class Route(enum.Enum):
    """Reduction route for the generalized problem."""

    INVSQRT = "invsqrt"
    LDLT = "ldlt"
    NONSYM = "nonsym"


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and orthonormal eigenvector columns."""

    values: tuple[mpfr, ...]
    vectors: np.ndarray


@dataclass(frozen=True)
class RitzSolution:
    """Solution of H C = S C W: ascending Ritz values and S-orthonormal C."""

    ritz_values: tuple[mpfr, ...]
    coefficients: np.ndarray
    route: Route
    precision: int


@dataclass(frozen=True)
class ResidualDiagnostics:
    """Max-norm residuals of the defining identities of a solution.

    ``pencil``: max |H C - S C diag(W)|;
    ``orthonormality``: max |C^T S C - I|;
    ``diagonality``: max |C^T H C - diag(W)|.
    """

    pencil: object
    orthonormality: object
    diagonality: object


class _NullContext:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _require_float(a: np.ndarray, what: str) -> int:
    p = _float_precision(a)
    if p is None:
        raise TypeError(f"{what} must hold mpfr entries; convert with float_matrix()")
    return p


def _max_abs(a: np.ndarray):
    return max(abs(x) for x in a.flat)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _fix_column_signs(a: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry positive (lowest index wins ties)."""
    n, m = a.shape
    for c in range(m):
        best = 0
        for r in range(1, n):
            if abs(a[r, c]) > abs(a[best, c]):
                best = r
        if a[best, c] < 0:
            a[:, c] = -a[:, c]
    return a


def jacobi_eigensym(a: np.ndarray, tol=None, max_sweeps: int = 30) -> Spectrum:
    """Cyclic-by-row Jacobi diagonalization of a symmetric float matrix.

    Sweeps rotate away off-diagonal entries until their Frobenius norm drops
    below ``tol`` times the matrix norm (default ``2**(-p/2)`` at the
    operands' precision ``p``).  Early sweeps skip entries below a threshold;
    from the fifth sweep on, entries too small to move the diagonal are
    zeroed outright.

    Returns eigenpairs sorted ascending with sign-fixed columns; raises
    ``NoConvergence`` once ``max_sweeps`` full sweeps have run.
    """
    n = dimension(a)
    require_symmetric(a)
    p = _require_float(a, "jacobi_eigensym input")
    with scalars.precision(p):
        work = np.array([[mpfr(a[i, j]) for j in range(n)] for i in range(n)], dtype=object)
        vecs = identity_float(n, p)
        tolv = default_tolerance(p) if tol is None else mpfr(tol)
        fro = gmpy2.sqrt(sum(x * x for x in work.flat))
        if fro == 0:
            values = tuple(sorted(work[k, k] for k in range(n)))
            return Spectrum(values, _freeze(vecs))
        target = tolv * fro
        sweeps = 0
        while True:
            off2 = sum(work[i, j] * work[i, j] for i in range(n) for j in range(i + 1, n))
            if gmpy2.sqrt(2 * off2) <= target:
                break
            if sweeps >= max_sweeps:
                raise NoConvergence(f"jacobi did not reach tolerance in {max_sweeps} sweeps")
            if sweeps < 3:
                off1 = sum(abs(work[i, j]) for i in range(n) for j in range(i + 1, n))
                thresh = mpfr("0.2") * off1 / (n * n)
            else:
                thresh = mpfr(0)
            for i in range(n - 1):
                for j in range(i + 1, n):
                    aij = work[i, j]
                    if abs(aij) <= thresh:
                        continue
                    aii, ajj = work[i, i], work[j, j]
                    if sweeps >= 4 and abs(aij) + abs(aii) == abs(aii) \
                            and abs(aij) + abs(ajj) == abs(ajj):
                        work[i, j] = work[j, i] = mpfr(0)
                        continue
                    theta = (ajj - aii) / (2 * aij)
                    t = 1 / (abs(theta) + gmpy2.sqrt(theta * theta + 1))
                    if theta < 0:
                        t = -t
                    c = 1 / gmpy2.sqrt(t * t + 1)
                    s = t * c
                    ci, cj = work[:, i].copy(), work[:, j].copy()
                    work[:, i] = ci * c - cj * s
                    work[:, j] = ci * s + cj * c
                    ri, rj = work[i, :].copy(), work[j, :].copy()
                    work[i, :] = ri * c - rj * s
                    work[j, :] = ri * s + rj * c
                    work[i, j] = work[j, i] = mpfr(0)
                    vi, vj = vecs[:, i].copy(), vecs[:, j].copy()
                    vecs[:, i] = vi * c - vj * s
                    vecs[:, j] = vi * s + vj * c
            sweeps += 1
        order = sorted(range(n), key=lambda k: work[k, k])
        values = tuple(work[k, k] for k in order)
        vectors = _fix_column_signs(vecs[:, order].copy())
    return Spectrum(values, _freeze(vectors))


def _spectral_map(a: np.ndarray, fn, tol):
    """V f(diag) V^T for a symmetric positive definite float matrix."""
    n = dimension(a)
    spectrum = jacobi_eigensym(a)
    p = _require_float(a, "matrix function input")
    with scalars.precision(p):
        vals = spectrum.values
        scale = max(abs(v) for v in vals)
        threshold = default_tolerance(p) * scale if tol is None else mpfr(tol)
        if min(vals) <= threshold:
            raise NotPositiveDefinite(
                f"smallest eigenvalue {min(vals)} is at or below threshold {threshold}"
            )
        mapped = [fn(v) for v in vals]
        v = spectrum.vectors
        out = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(i, n):
                acc = mpfr(0)
                for k in range(n):
                    acc += mapped[k] * v[i, k] * v[j, k]
                out[i, j] = out[j, i] = acc
    return out


def matrix_sqrt(a: np.ndarray, tol=None) -> np.ndarray:
    """Principal square root of a symmetric positive definite float matrix."""
    return _spectral_map(a, sqrt_pf, tol)


def matrix_inv_sqrt(a: np.ndarray, tol=None) -> np.ndarray:
    """Inverse square root: the symmetric orthogonalizer X with X S X = I."""
    return _spectral_map(a, lambda v: 1 / sqrt_pf(v), tol)


def _cluster_slices(values, rtol):
    """Group consecutive ascending values whose relative gap is below rtol."""
    groups = []
    start = 0
    for k in range(1, len(values)):
        gap = values[k] - values[k - 1]
        scale = max(abs(values[k]), abs(values[k - 1]))
        if gap > rtol * scale:
            groups.append((start, k))
            start = k
    groups.append((start, len(values)))
    return groups


def normalize_s(c: np.ndarray, s: np.ndarray, ritz_values=None, cluster_rtol=None) -> np.ndarray:
    """Scale columns of C to unit S-norm, so diag(C^T S C) = 1.

    When ``ritz_values`` accompany the columns, values within a relative
    ``cluster_rtol`` (default ``2**(-p/3)``) form a degenerate cluster whose
    columns are S-Gram-Schmidt orthogonalized in index order before scaling.
    Raises ``ZeroNorm`` on a column with nonpositive S-norm.
    """
    p = _require_float(c, "coefficient matrix")
    if c.ndim != 2 or s.shape[0] != c.shape[0]:
        raise DimensionMismatch(f"shapes {s.shape} and {c.shape} do not conform")
    with scalars.precision(p):
        sf = s if _float_precision(s) is not None else float_matrix(s, p)
        out = np.array([[mpfr(x) for x in row] for row in c], dtype=object)
        ncols = out.shape[1]
        if ritz_values is not None:
            if len(ritz_values) != ncols:
                raise DimensionMismatch("one Ritz value per column is required")
            if cluster_rtol is None:
                cluster_rtol = gmpy2.exp2(mpfr(-p) / 3)
            clusters = _cluster_slices(list(ritz_values), cluster_rtol)
        else:
            clusters = [(k, k + 1) for k in range(ncols)]
        for lo, hi in clusters:
            for k in range(lo, hi):
                v = out[:, k]
                for _ in range(2):  # second pass mops up rounding in the first
                    for m in range(lo, k):
                        u = out[:, m]
                        v = v - u * (u @ (sf @ v))
                nrm2 = v @ (sf @ v)
                if nrm2 <= 0:
                    raise ZeroNorm(f"column {k + 1} has nonpositive S-norm {nrm2}")
                out[:, k] = v / gmpy2.sqrt(nrm2)
    return out


def residuals(h: np.ndarray, s: np.ndarray, sol: RitzSolution) -> ResidualDiagnostics:
    """Max-norm residuals of H C = S C W, C^T S C = I and C^T H C = W.

    Arithmetic follows the scalar kind of the operands: with exact rational
    inputs throughout, the residuals are exact rationals; with floats they
    are computed at the operands' precision.
    """
    c = sol.coefficients
    w = list(sol.ritz_values)
    n = dimension(h)
    if s.shape != h.shape or c.shape[0] != n or len(w) != c.shape[1]:
        raise DimensionMismatch("inconsistent dimensions between H, S and the solution")
    p = _float_precision(h, s, c)
    ctx = scalars.precision(p) if p is not None else _NullContext()
    with ctx:
        wrow = np.array(w, dtype=object)[None, :]
        hc = h @ c
        sc = s @ c
        r_pencil = hc - sc * wrow
        ctsc = c.T @ sc
        cthc = c.T @ hc
        for i in range(len(w)):
            ctsc[i, i] = ctsc[i, i] - 1
            cthc[i, i] = cthc[i, i] - w[i]
        return ResidualDiagnostics(
            pencil=_max_abs(r_pencil),
            orthonormality=_max_abs(ctsc),
            diagonality=_max_abs(cthc),
        )


def unitarity_check(s: np.ndarray, c: np.ndarray):
    """max |(S^(1/2) C)^T (S^(1/2) C) - I|; small iff C is S-orthonormal."""
    p = _require_float(c, "coefficient matrix")
    with scalars.precision(p):
        sf = s if _float_precision(s) is not None else float_matrix(s, p)
        root = matrix_sqrt(sf)
        u = root @ c
        g = u.T @ u
        for i in range(g.shape[0]):
            g[i, i] = g[i, i] - 1
        return _max_abs(g)


def solve_generalized(
    h: np.ndarray,
    s: np.ndarray,
    route: Route = Route.LDLT,
    precision: int = DEFAULT_PRECISION,
) -> RitzSolution:
    """Solve H C = S C W for a symmetric pencil with positive definite S.

    ``h`` and ``s`` may hold exact rationals or floats (floats convert to
    rationals exactly, so positive definiteness is always certified by an
    exact LDL^T before anything is rounded).  The result satisfies the
    ascending-order, S-orthonormality and diagonality invariants at the
    requested precision.
    """
    p = scalars.check_precision(precision)
    n = dimension(h)
    if dimension(s) != n:
        raise DimensionMismatch(f"H is {h.shape} but S is {s.shape}")
    require_symmetric(h)
    require_symmetric(s)
    hq = np.array([[as_rational(x) for x in row] for row in h], dtype=object)
    sq = np.array([[as_rational(x) for x in row] for row in s], dtype=object)
    try:
        factors = ldlt(sq)
    except ZeroPivot as exc:
        raise SingularOverlap(f"overlap matrix is singular: {exc}") from exc
    if not factors.is_positive:
        raise SingularOverlap("overlap matrix is not positive definite")

    if route is Route.LDLT:
        values, c = _reduce_ldlt(hq, factors, p)
    elif route is Route.INVSQRT:
        values, c = _reduce_invsqrt(hq, sq, p)
    elif route is Route.NONSYM:
        values, c = _reduce_nonsym(hq, sq, p)
    else:
        raise ValueError(f"unknown route {route!r}")

    with scalars.precision(p):
        sf = float_matrix(sq, p)
        try:
            c = normalize_s(c, sf, ritz_values=values)
        except ZeroNorm as exc:
            # S-norms of the back-transformed columns cancel catastrophically
            # once kappa(S) overwhelms the working precision.
            raise SingularOverlap(
                f"coefficients cannot be S-normalized at {p} bits; raise the precision"
            ) from exc
        c = _fix_column_signs(c)
    return RitzSolution(tuple(values), _freeze(c), route, p)


def _reduce_invsqrt(hq, sq, p):
    with scalars.precision(p):
        sf = float_matrix(sq, p)
        hf = float_matrix(hq, p)
        try:
            x = matrix_inv_sqrt(sf)
        except NotPositiveDefinite as exc:
            raise SingularOverlap(
                f"overlap too ill-conditioned for the inverse-sqrt route at {p} bits"
            ) from exc
        t = x @ hf @ x
        sym = (t + t.T) / 2
        spec = jacobi_eigensym(sym)
        c = x @ spec.vectors
    return list(spec.values), c


def _reduce_ldlt(hq, factors, p):
    lower_inv = invert_unit_lower(factors.lower)
    core = lower_inv @ hq @ lower_inv.T  # exact congruence of H
    n = core.shape[0]
    with scalars.precision(p):
        e = [sqrt_pf(to_float(dk, p)) for dk in factors.diagonal]
        g = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = to_float(core[i, j], p) / (e[i] * e[j])
        spec = jacobi_eigensym(g)
        linv_f = float_matrix(lower_inv, p)
        scaled = spec.vectors / np.array(e, dtype=object)[:, None]
        c = linv_f.T @ scaled
    return list(spec.values), c


def _float_ldlt(sf, p):
    """Floating LDL^T of an SPD matrix; returns (unit lower, pivots)."""
    n = sf.shape[0]
    m = [[mpfr(sf[i, j]) for j in range(i + 1)] for i in range(n)]
    lower = identity_float(n, p)
    diag = []
    for k in range(n):
        dk = m[k][k]
        if dk <= 0:
            raise SingularOverlap(
                f"overlap not numerically positive definite at {p} bits (pivot {k + 1})"
            )
        diag.append(dk)
        for i in range(k + 1, n):
            f = m[i][k] / dk
            lower[i, k] = f
            for j in range(k + 1, i + 1):
                m[i][j] -= f * m[j][k]
    return lower, diag


def _ldlt_solve(lower, diag, b):
    """Solve (L D L^T) x = b by forward/back substitution."""
    n = len(diag)
    y = [mpfr(v) for v in b]
    for i in range(n):
        for k in range(i):
            y[i] -= lower[i, k] * y[k]
    for i in range(n):
        y[i] /= diag[i]
    for i in range(n - 1, -1, -1):
        for k in range(i + 1, n):
            y[i] -= lower[k, i] * y[k]
    return np.array(y, dtype=object)


def _reduce_nonsym(hq, sq, p):
    """Power/deflation extraction of the eigenpairs of S^(-1)H.

    A cheap low-precision pass estimates the spectrum; the full-precision
    pass then shifts each hunt to the midpoint between the next-lower
    estimate and the bottom of the spectrum, which keeps the target
    strictly dominant among the undeflated directions.
    """
    with scalars.precision(p):
        hf = float_matrix(hq, p)
        sf = float_matrix(sq, p)
        lower, diag = _float_ldlt(sf, p)
        n = hf.shape[0]
        # Explicit inverse application to the columns of H forms S^(-1)H once.
        cols = [_ldlt_solve(lower, diag, hf[:, j]) for j in range(n)]
        a = np.column_stack(cols)
    p_est = max(64, min(128, p))
    try:
        with scalars.precision(p_est):
            est, _ = _deflation_pass(
                float_matrix(a, p_est), float_matrix(hf, p_est), float_matrix(sf, p_est),
                p_est, estimates=None, rtol=gmpy2.exp2(mpfr(-28)), max_iter=4000,
                rough=True,
            )
    except NoConvergence:
        est = None
    with scalars.precision(p):
        try:
            values, vecs = _deflation_pass(a, hf, sf, p, estimates=est)
        except NoConvergence:
            if est is None:
                raise
            # Shift schedule built on bad estimates; retry unshifted.
            values, vecs = _deflation_pass(a, hf, sf, p, estimates=None)
        c = np.column_stack(vecs)
    return values, c


def _deflation_pass(a, hf, sf, p, estimates=None, rtol=None, max_iter=None, rough=False):
    """All eigenpairs of ``a`` (= S^(-1)H), found dominant-first with deflation
    in the S inner product, returned sorted ascending.

    Convergence is judged on the residual of the *deflated* operator (the
    image is re-orthogonalized before comparing), since errors inherited
    from earlier deflations put a floor under the raw residual.  When the
    residual plateaus, a ``rough`` pass accepts the current Rayleigh
    quotient outright (estimates only steer shifts); the full pass accepts
    only if the plateau sits below ``2**(-p/4)``, where the quadratic
    Rayleigh error is still far inside tolerance.
    """
    n = a.shape[0]
    if rtol is None:
        rtol = default_tolerance(p)
    if max_iter is None:
        max_iter = 40 * p + 500
    plateau_bound = gmpy2.sqrt(default_tolerance(p))
    anorm = max(sum(abs(x) for x in a[i, :]) for i in range(n))
    tiny = anorm * default_tolerance(p) if anorm > 0 else mpfr(0)
    est_sorted = sorted(estimates) if estimates is not None else None
    found_vals: list = []
    found_vecs: list = []

    def s_orth(v):
        for _ in range(2):
            for u in found_vecs:
                v = v - u * (u @ (sf @ v))
        return v

    for step in range(n):
        if est_sorted is not None:
            m = n - 1 - step  # index of the current target among ascending estimates
            sigma = (est_sorted[m - 1] + est_sorted[0]) / 2 if m >= 1 else mpfr(0)
        else:
            sigma = mpfr(0)
        converged = False
        rho = mpfr(0)
        v = None
        for attempt in range(3):
            v = None
            for seed in range(n):
                cand = np.array(
                    [mpfr(1) if r == (step + seed) % n else mpfr(0) for r in range(n)],
                    dtype=object,
                )
                cand = s_orth(cand)
                nrm2 = cand @ (sf @ cand)
                if nrm2 > 0 and gmpy2.sqrt(nrm2) > mpfr("1e-6"):
                    v = cand / gmpy2.sqrt(nrm2)
                    break
            if v is None:
                raise NoConvergence("could not seed a deflated start vector")
            best_resid = None
            since_improved = 0
            for _ in range(max_iter):
                pu = s_orth(a @ v)
                rho = (v @ (hf @ v)) / (v @ (sf @ v))
                denom = max(abs(rho), tiny)
                resid = _max_abs(pu - v * rho)
                if denom == 0 or resid <= rtol * denom:
                    converged = True
                    break
                if best_resid is None or resid < mpfr("0.7") * best_resid:
                    best_resid = resid if best_resid is None else min(resid, best_resid)
                    since_improved = 0
                else:
                    since_improved += 1
                    if since_improved >= 60:
                        # Residual floored; the Rayleigh error is quadratic in
                        # it, so a low plateau still certifies the value.
                        if rough or resid <= plateau_bound * denom:
                            converged = True
                        break
                w = pu - v * sigma if sigma != 0 else pu
                nrm2 = w @ (sf @ w)
                if nrm2 <= 0:
                    break  # iterate collapsed into the deflated span; reseed
                v = w / gmpy2.sqrt(nrm2)
            if converged:
                break
            sigma = sigma + mpfr("0.37") * (attempt + 1) * max(anorm, mpfr(1))
        if not converged:
            raise NoConvergence(f"power iteration stalled on eigenpair {step + 1} of {n}")
        nrm2 = v @ (sf @ v)
        if nrm2 <= 0:
            raise ZeroNorm("converged iterate has nonpositive S-norm")
        found_vals.append(rho)
        found_vecs.append(v / gmpy2.sqrt(nrm2))
    order = sorted(range(n), key=lambda k: found_vals[k])
    return [found_vals[k] for k in order], [found_vecs[k] for k in order]

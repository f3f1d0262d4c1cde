"""Walk through the two-state worked example end to end.

Builds the exact 2x2 overlap and Hamiltonian pair for the linear-potential
box at zero strength, certifies positive definiteness, solves the
generalized problem, and checks every defining identity: the Ritz values
are exactly 5 and 21, C^T S C = I, C^T H C = diag(W), the eigenvalues of S
and H alone are closed-form surds (and are NOT 1 and W - a common point of
confusion), and U = S^(1/2) C is orthogonal.
"""

from gmpy2 import mpq

from ritz import (
    ProblemSpec,
    build_matrices,
    float_matrix,
    gram_determinant,
    jacobi_eigensym,
    ldlt,
    matrix_sqrt,
    precision,
    residuals,
    solve_generalized,
    sqrt_pf,
    to_float,
    unitarity_check,
)
from ritz.study import format_scientific, format_significant

P = 256

print(__doc__)

h, s = build_matrices(ProblemSpec(0, 2))
print("S =", [[str(x) for x in row] for row in s])
print("H =", [[str(x) for x in row] for row in h])

factors = ldlt(s)
print("\nExact LDL^T certificate of S:")
print("  pivots:", [str(d) for d in factors.diagonal], "(all positive => S is SPD)")
print("  L21  =", factors.lower[1, 0])
print("  det S =", gram_determinant(s), "= product of pivots:",
      factors.determinant())

sol = solve_generalized(h, s, precision=P)
print("\nRitz values:", [format_significant(w, 20) for w in sol.ritz_values])

res = residuals(h, s, sol)
print("max |HC - SCW|      =", format_scientific(res.pencil))
print("max |C^T S C - I|   =", format_scientific(res.orthonormality))
print("max |C^T H C - W|   =", format_scientific(res.diagonality))

with precision(P):
    sf = float_matrix(s, P)
    hf = float_matrix(h, P)

    print("\nEigenvalues of S alone (not 1!):",
          [format_significant(v, 12) for v in jacobi_eigensym(sf).values])
    r74 = sqrt_pf(to_float(74, P))
    print("closed forms (9 -+ sqrt(74))/420:",
          [format_significant(v, 12) for v in ((9 - r74) / 420, (9 + r74) / 420)])

    print("Eigenvalues of H alone (not the Ritz values!):",
          [format_significant(v, 12) for v in jacobi_eigensym(hf).values])
    r34 = sqrt_pf(to_float(34, P))
    print("closed forms (7 -+ sqrt(34))/60:  ",
          [format_significant(v, 12) for v in ((7 - r34) / 60, (7 + r34) / 60)])

    root = matrix_sqrt(sf)
    print("\nS^(1/2) =", [[format_significant(x, 8) for x in row] for row in root])
    r7 = sqrt_pf(to_float(7, P))
    closed = (
        sqrt_pf(to_float(mpq(233, 8880), P) + r7 * 7 / 8880),
        sqrt_pf(to_float(mpq(21, 2960), P) - r7 * 7 / 8880),
        sqrt_pf(to_float(mpq(151, 62160), P) + r7 * 7 / 8880),
    )
    print("closed-form entries:",
          [format_significant(x, 8) for x in (closed[0], closed[1], closed[2])])

    print("\nunitarity of U = S^(1/2) C: max |U^T U - I| =",
          format_scientific(unitarity_check(sf, sol.coefficients)))

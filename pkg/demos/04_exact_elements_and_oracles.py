"""Exact matrix elements next to their independent quadrature oracle.

Overlap and Hamiltonian elements of the polynomial Dirichlet basis
f_i(x) = x^i (1 - x) have closed rational forms.  A Gauss-Legendre rule
with enough nodes integrates the same polynomials exactly (up to rounding),
so the two must agree to working accuracy - a strong cross-check since the
quadrature never sees the closed forms.  The basis functions themselves
vanish at both ends by construction.
"""

from gmpy2 import mpq

from ritz import (
    basis_coefficients,
    hamiltonian_element,
    overlap_element,
    polynomial_value,
    precision,
    quadrature_hamiltonian_element,
    quadrature_overlap_element,
    to_float,
)
from ritz.study import format_scientific

P = 113
NODES = 12

print(__doc__)

print("boundary values of the basis (exact rational evaluation):")
for i in (1, 2, 7):
    coeffs = basis_coefficients(i)
    print(f"  f_{i}(0) = {polynomial_value(coeffs, mpq(0))},"
          f"  f_{i}(1) = {polynomial_value(coeffs, mpq(1))},"
          f"  f_{i}(1/2) = {polynomial_value(coeffs, mpq(1, 2))}")

print("\nelements and quadrature deltas (strength 1, 12 nodes, 113 bits):")
print("  i j   S_ij        H_ij          |dS|        |dH|")
with precision(P):
    for i, j in ((1, 1), (1, 2), (2, 2), (3, 5), (6, 6)):
        s_exact = overlap_element(i, j)
        h_exact = hamiltonian_element(i, j, 1)
        ds = abs(quadrature_overlap_element(i, j, NODES, P) - to_float(s_exact, P))
        dh = abs(quadrature_hamiltonian_element(i, j, 1, NODES, P) - to_float(h_exact, P))
        print(f"  {i} {j}   {str(s_exact):10s}  {str(h_exact):12s}"
              f"  {format_scientific(ds):10s}  {format_scientific(dh)}")

print("\nthe same checks run for every pair i, j <= 10 inside the test suite")

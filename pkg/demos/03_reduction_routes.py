"""Compare the three reduction routes and the effect of working precision.

The overlap matrix family here is Hilbert-like: its condition number grows
so fast that at basis size 20 plain double width (53 bits) cannot even
represent an S-orthonormal coefficient set, and both factorization routes
refuse loudly rather than return garbage.  The exact-congruence route
recovers at 128 bits because all ill-conditioning is absorbed into exact
rational arithmetic; the inverse-sqrt route must also diagonalize S itself
in floats, so it needs the full 256 bits.  The power/deflation route on
S^(-1)H is the numerically weakest and is kept to small bases.
"""

from ritz import RitzError, Route, build_matrices, solve_generalized
from ritz.model import ProblemSpec
from ritz.study import format_significant, stable_precision

print(__doc__)

h, s = build_matrices(ProblemSpec(0, 20))
print("basis size 20, strength 0:")
for bits in (53, 128, 256):
    for route in (Route.LDLT, Route.INVSQRT):
        try:
            sol = solve_generalized(h, s, route=route, precision=bits)
            shown = ", ".join(format_significant(w) for w in sol.ritz_values[:2])
            print(f"  {route.value:8s} @{bits:3d} bits: {shown}, ...")
        except RitzError as exc:
            print(f"  {route.value:8s} @{bits:3d} bits: {type(exc).__name__}: {exc}")

print("\nall three routes at a small basis (size 6, strength 1, 256 bits):")
h6, s6 = build_matrices(ProblemSpec(1, 6))
for route in Route:
    sol = solve_generalized(h6, s6, route=route, precision=256)
    print(f"  {route.value:8s}:", ", ".join(format_significant(w, 15)
                                            for w in sol.ritz_values[:3]))

print("\nprecision ladder: doubling until two successive widths agree on 10 digits")
for n in (4, 12, 20):
    bits = stable_precision(0, n, 4, digits=10, start=64)
    print(f"  basis size {n:2d}: {bits} bits suffice")

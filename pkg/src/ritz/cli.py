"""Command-line front end.

Subcommands:

* ``solve``     -- Ritz values and residual diagnostics for one basis size.
* ``converge``  -- convergence table over a range of basis sizes.
* ``verify``    -- closed-form checks of the two-state worked example.
* ``elements``  -- exact matrix elements next to their quadrature-oracle deltas.

Exit codes: 0 success, 2 usage error, 3 solver failure, 4 monotonicity
violation, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpfr

from .exceptions import RitzError
from . import scalars
from .eigen import (
    Route,
    jacobi_eigensym,
    matrix_sqrt,
    residuals,
    solve_generalized,
    unitarity_check,
)
from .matrix import float_matrix
from .model import (
    ProblemSpec,
    build_matrices,
    hamiltonian_element,
    overlap_element,
    quadrature_hamiltonian_element,
    quadrature_overlap_element,
)
from .scalars import as_rational, sqrt_pf, to_float
from .study import (
    check_monotone,
    format_scientific,
    format_significant,
    report_json_dict,
    run_convergence,
    to_csv,
    to_text,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_MONOTONE = 4
EXIT_VERIFY = 5

#: CLI precision bounds; the upper end matches the stored-constant budget.
PRECISION_RANGE = (scalars.MIN_PRECISION, scalars.MAX_PI_PRECISION)


def _rational(text: str):
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _route(text: str) -> Route:
    try:
        return Route(text)
    except ValueError as exc:
        choices = ", ".join(r.value for r in Route)
        raise argparse.ArgumentTypeError(f"route must be one of {choices}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ritz",
        description="Generalized eigensolver for the linear-potential box model "
        "with a non-orthogonal polynomial basis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=scalars.DEFAULT_PRECISION,
                        help="working precision in bits (53..640, default 256)")
    common.add_argument("--route", type=_route, default=Route.LDLT,
                        help="reduction route: invsqrt, ldlt or nonsym (default ldlt)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json", "table"),
                        default="table", help="output format (default table)")
    common.add_argument("--digits", type=int, default=10,
                        help="significant digits to print (default 10)")
    common.add_argument("--output", default=None,
                        help="write output to this path instead of standard output")

    p_solve = sub.add_parser("solve", parents=[common],
                             help="solve one basis size and print diagnostics")
    p_solve.add_argument("--lambda", dest="lam", type=_rational, default=as_rational(0),
                         help="potential strength, exact rational or decimal (default 0)")
    p_solve.add_argument("--n", type=int, required=True, help="basis size")
    p_solve.add_argument("--states", type=int, default=None,
                         help="number of Ritz values to print (default: all)")
    p_solve.set_defaults(func=cmd_solve)

    p_conv = sub.add_parser("converge", parents=[common],
                            help="convergence table over a range of basis sizes")
    p_conv.add_argument("--lambda", dest="lam", type=_rational, default=as_rational(0),
                        help="potential strength (default 0)")
    p_conv.add_argument("--n-min", type=int, default=4, help="smallest basis size (default 4)")
    p_conv.add_argument("--n-max", type=int, default=20, help="largest basis size (default 20)")
    p_conv.add_argument("--states", type=int, default=4,
                        help="states tracked per row (default 4)")
    p_conv.set_defaults(func=cmd_converge)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="closed-form checks of the two-state example")
    p_verify.add_argument("--tol", type=float, default=1e-12,
                          help="tolerance for the closed-form checks (default 1e-12)")
    p_verify.set_defaults(func=cmd_verify)

    p_elem = sub.add_parser("elements", parents=[common],
                            help="exact matrix elements and quadrature deltas")
    p_elem.add_argument("--lambda", dest="lam", type=_rational, default=as_rational(0),
                        help="potential strength (default 0)")
    p_elem.add_argument("--n", type=int, required=True, help="largest basis index")
    p_elem.add_argument("--nodes", type=int, default=None,
                        help="quadrature node count (default: enough for all pairs)")
    p_elem.set_defaults(func=cmd_elements)

    return parser


def _usage_error(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_USAGE


def _check_common(args) -> str | None:
    lo, hi = PRECISION_RANGE
    if not lo <= args.precision <= hi:
        return f"precision must be in [{lo}, {hi}], got {args.precision}"
    if args.digits < 1:
        return f"digits must be >= 1, got {args.digits}"
    return None


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    problem = _check_common(args)
    if problem:
        return _usage_error(problem)
    if args.n < 1:
        return _usage_error(f"basis size must be >= 1, got {args.n}")
    states = args.states if args.states is not None else args.n
    if not 1 <= states <= args.n:
        return _usage_error(f"states must be in [1, {args.n}], got {states}")

    h, s = build_matrices(ProblemSpec(args.lam, args.n))
    sol = solve_generalized(h, s, route=args.route, precision=args.precision)
    res = residuals(h, s, sol)
    uni = unitarity_check(s, sol.coefficients)
    values = sol.ritz_values[:states]

    if args.fmt == "json":
        payload = {
            "lambda": str(args.lam),
            "n": args.n,
            "precision": args.precision,
            "route": args.route.value,
            "values": [format_significant(w, args.digits) for w in values],
            "residuals": {
                "pencil": format_scientific(res.pencil),
                "orthonormality": format_scientific(res.orthonormality),
                "diagonality": format_scientific(res.diagonality),
                "unitarity": format_scientific(uni),
            },
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    elif args.fmt == "csv":
        header = "N," + ",".join(f"E{m + 1}" for m in range(states))
        row = str(args.n) + "," + ",".join(format_significant(w, args.digits) for w in values)
        _emit(args, header + "\n" + row + "\n")
    else:
        lines = [f"W_{m + 1} = {format_significant(w, args.digits)}"
                 for m, w in enumerate(values)]
        lines += [
            f"residual max|HC - SCW|    = {format_scientific(res.pencil)}",
            f"residual max|C^TSC - I|   = {format_scientific(res.orthonormality)}",
            f"residual max|C^THC - W|   = {format_scientific(res.diagonality)}",
            f"unitarity max|U^TU - I|   = {format_scientific(uni)}",
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_converge(args) -> int:
    problem = _check_common(args)
    if problem:
        return _usage_error(problem)
    if not 1 <= args.states <= args.n_min <= args.n_max:
        return _usage_error(
            f"need 1 <= states <= n-min <= n-max, got states={args.states}, "
            f"n-min={args.n_min}, n-max={args.n_max}"
        )

    report = run_convergence(args.lam, args.n_min, args.n_max, args.states,
                             precision=args.precision, route=args.route)
    if args.fmt == "json":
        _emit(args, json.dumps(report_json_dict(report, args.digits), indent=2) + "\n")
    elif args.fmt == "csv":
        _emit(args, to_csv(report, args.digits))
    else:
        _emit(args, to_text(report, args.digits))

    violations = check_monotone(report)
    if violations:
        for v in violations:
            print(
                f"monotonicity violation: E{v.state} rises by "
                f"{format_scientific(v.increase)} from N={v.n_prev} to N={v.n_next}",
                file=sys.stderr,
            )
        return EXIT_MONOTONE
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = _check_common(args)
    if problem:
        return _usage_error(problem)
    if args.tol < 0:
        return _usage_error(f"tolerance must be >= 0, got {args.tol}")
    p = args.precision
    tol = mpfr(repr(args.tol), p)
    checks: list[tuple[str, bool]] = []

    h, s = build_matrices(ProblemSpec(0, 2))
    sol = solve_generalized(h, s, route=args.route, precision=p)
    with scalars.precision(p):
        sf = float_matrix(s, p)
        hf = float_matrix(h, p)

        # Ritz values against the closed forms 5 and 21.
        w1, w2 = sol.ritz_values
        ok = abs(w1 - 5) <= tol * 5 and abs(w2 - 21) <= tol * 21
        checks.append(("ritz values W = (5, 21)", ok))

        # Defining identities of the coefficient matrix.
        res = residuals(h, s, sol)
        ok = res.orthonormality <= tol and res.diagonality <= tol
        checks.append(("identities C^TSC = I and C^THC = W", ok))

        # Eigenvalues of S alone: (9 -+ sqrt(74)) / 420.
        root74 = sqrt_pf(to_float(74, p))
        expect_s = ((9 - root74) / 420, (9 + root74) / 420)
        got_s = jacobi_eigensym(sf).values
        ok = all(abs(g - e) <= tol * abs(e) for g, e in zip(got_s, expect_s))
        checks.append(("eigenvalues of S are (9 -+ sqrt(74))/420", ok))

        # Eigenvalues of H alone: (7 -+ sqrt(34)) / 60.
        root34 = sqrt_pf(to_float(34, p))
        expect_h = ((7 - root34) / 60, (7 + root34) / 60)
        got_h = jacobi_eigensym(hf).values
        ok = all(abs(g - e) <= tol * abs(e) for g, e in zip(got_h, expect_h))
        checks.append(("eigenvalues of H are (7 -+ sqrt(34))/60", ok))

        # Square root of S against its closed-form entries.
        root7 = sqrt_pf(to_float(7, p))
        expect_root = (
            sqrt_pf(to_float("233/8880", p) + root7 * 7 / 8880),
            sqrt_pf(to_float("21/2960", p) - root7 * 7 / 8880),
            sqrt_pf(to_float("151/62160", p) + root7 * 7 / 8880),
        )
        got_root = matrix_sqrt(sf)
        sqrt_tol = mpfr("1e-6", p)
        ok = (abs(got_root[0, 0] - expect_root[0]) <= sqrt_tol
              and abs(got_root[0, 1] - expect_root[1]) <= sqrt_tol
              and abs(got_root[1, 0] - expect_root[1]) <= sqrt_tol
              and abs(got_root[1, 1] - expect_root[2]) <= sqrt_tol)
        checks.append(("S^(1/2) matches its closed-form entries", ok))

        # U = S^(1/2) C is orthogonal.
        ok = unitarity_check(sf, sol.coefficients) <= tol
        checks.append(("U = S^(1/2)C is unitary", ok))

    failed = False
    lines = []
    for label, ok in checks:
        lines.append(f"{'PASS' if ok else 'FAIL'}  {label}")
        failed = failed or not ok
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_elements(args) -> int:
    problem = _check_common(args)
    if problem:
        return _usage_error(problem)
    if args.n < 1:
        return _usage_error(f"basis index bound must be >= 1, got {args.n}")
    min_nodes = (args.n + args.n + 5) // 2 + 1
    nodes = args.nodes if args.nodes is not None else min_nodes + 2
    if nodes < min_nodes:
        return _usage_error(
            f"need at least {min_nodes} quadrature nodes for indices up to {args.n}"
        )
    p = min(args.precision, 256)  # oracle deltas do not need more

    entries = []
    for i in range(1, args.n + 1):
        for j in range(i, args.n + 1):
            s_exact = overlap_element(i, j)
            h_exact = hamiltonian_element(i, j, args.lam)
            s_quad = quadrature_overlap_element(i, j, nodes, p)
            h_quad = quadrature_hamiltonian_element(i, j, args.lam, nodes, p)
            with scalars.precision(p):
                ds = abs(s_quad - to_float(s_exact, p))
                dh = abs(h_quad - to_float(h_exact, p))
            entries.append((i, j, s_exact, h_exact, ds, dh))

    if args.fmt == "json":
        payload = {
            "lambda": str(args.lam),
            "n": args.n,
            "nodes": nodes,
            "elements": [
                {"i": i, "j": j, "s": str(se), "h": str(he),
                 "delta_s": format_scientific(ds), "delta_h": format_scientific(dh)}
                for i, j, se, he, ds, dh in entries
            ],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    elif args.fmt == "csv":
        lines = ["i,j,S,H,delta_S,delta_H"]
        for i, j, se, he, ds, dh in entries:
            lines.append(f"{i},{j},{se},{he},{format_scientific(ds)},{format_scientific(dh)}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        rows = [["i", "j", "S_ij", "H_ij", "|dS|", "|dH|"]]
        for i, j, se, he, ds, dh in entries:
            rows.append([str(i), str(j), str(se), str(he),
                         format_scientific(ds), format_scientific(dh)])
        widths = [max(len(r[c]) for r in rows) for c in range(6)]
        lines = ["  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in rows]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except RitzError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

from fractions import Fraction

import pytest
from gmpy2 import mpfr, mpq
from hypothesis import given
from hypothesis import strategies as st

from ritz import (
    InsufficientNodes,
    UnsupportedLambda,
    as_rational,
    basis_coefficients,
    build_matrices,
    default_tolerance,
    exact_reference,
    gauss_legendre_unit,
    hamiltonian_element,
    is_positive_definite,
    overlap_element,
    pi_const,
    polynomial_derivative,
    polynomial_value,
    precision,
    quadrature_hamiltonian_element,
    quadrature_overlap_element,
    solve_generalized,
    to_float,
)
from ritz.model import ProblemSpec
from ritz.study import format_significant


def test_overlap_element_values():
    assert overlap_element(1, 1) == mpq(1, 30)
    assert overlap_element(1, 2) == mpq(1, 60)
    assert overlap_element(2, 2) == mpq(1, 105)
    with pytest.raises(ValueError):
        overlap_element(0, 1)


def test_hamiltonian_element_values():
    assert hamiltonian_element(1, 1, 0) == mpq(1, 6)
    assert hamiltonian_element(2, 2, 0) == mpq(1, 15)
    assert hamiltonian_element(1, 1, 1) == mpq(11, 60)  # 1/6 + 2/(4*5*6)
    assert hamiltonian_element(1, 2, mpq(1, 2)) == hamiltonian_element(1, 2, 0) + mpq(1, 210)


def test_element_symmetry_up_to_20():
    for i in range(1, 21):
        for j in range(i, 21):
            assert overlap_element(i, j) == overlap_element(j, i)
            assert hamiltonian_element(i, j, mpq(2, 3)) == hamiltonian_element(j, i, mpq(2, 3))


@given(lam=st.fractions(min_value=Fraction(-8), max_value=Fraction(8), max_denominator=64))
def test_hamiltonian_linear_in_strength(lam):
    lamq = as_rational(lam)
    for i, j in ((1, 1), (2, 5), (4, 4)):
        base = hamiltonian_element(i, j, 0)
        slope = hamiltonian_element(i, j, 1) - base
        assert hamiltonian_element(i, j, lamq) - base == lamq * slope


def test_build_matrices_two_state_pair():
    h, s = build_matrices(ProblemSpec(0, 2))
    assert (s == rationalized([[mpq(1, 30), mpq(1, 60)], [mpq(1, 60), mpq(1, 105)]])).all()
    assert (h == rationalized([[mpq(1, 6), mpq(1, 12)], [mpq(1, 12), mpq(1, 15)]])).all()


def rationalized(rows):
    import numpy as np

    return np.array(rows, dtype=object)


def test_single_state_problem():
    h, s = build_matrices(ProblemSpec(0, 1))
    assert s[0, 0] == mpq(1, 30) and h[0, 0] == mpq(1, 6)
    sol = solve_generalized(h, s, precision=113)
    assert format_significant(sol.ritz_values[0], 10) == "5.000000000"


def test_three_state_matrices_positive_definite():
    h, s = build_matrices(ProblemSpec(1, 3))
    assert is_positive_definite(s)
    assert all(s[i, j] == s[j, i] for i in range(3) for j in range(3))
    assert all(h[i, j] == h[j, i] for i in range(3) for j in range(3))


def test_problem_spec_validation():
    with pytest.raises(ValueError):
        ProblemSpec(0, 0)
    spec = ProblemSpec("0.5", 3)
    assert spec.lam == mpq(1, 2)


def test_basis_satisfies_boundary_conditions():
    for i in range(1, 21):
        coeffs = basis_coefficients(i)
        assert polynomial_value(coeffs, mpq(0)) == 0
        assert polynomial_value(coeffs, mpq(1)) == 0
        # interior values are positive for this family
        assert polynomial_value(coeffs, mpq(1, 2)) > 0


def test_polynomial_derivative_exact():
    # f_2 = x^2 - x^3, f_2'' = 2 - 6x
    coeffs = polynomial_derivative(polynomial_derivative(basis_coefficients(2)))
    assert coeffs == [2, -6]


def test_gauss_legendre_integrates_monomials_exactly():
    p = 113
    for count in (1, 2, 5, 8):
        xs, ws = gauss_legendre_unit(count, p)
        with precision(p):
            assert abs(sum(ws) - 1) <= default_tolerance(p)
            for k in range(0, 2 * count):
                got = sum(w * x**k for x, w in zip(xs, ws))
                assert abs(got - to_float(mpq(1, k + 1), p)) <= mpfr(2) ** (20 - p)


def test_quadrature_matches_exact_elements():
    p = 113
    tol = mpfr("1e-12")
    with precision(p):
        for i, j in ((1, 1), (1, 2), (3, 7), (10, 10)):
            want_s = to_float(overlap_element(i, j), p)
            got_s = quadrature_overlap_element(i, j, 14, p)
            assert abs(got_s - want_s) <= tol
            for lam in (0, 1):
                want_h = to_float(hamiltonian_element(i, j, lam), p)
                got_h = quadrature_hamiltonian_element(i, j, lam, 14, p)
                assert abs(got_h - want_h) <= tol


def test_quadrature_examples_at_spec_node_counts():
    with precision(113):
        assert abs(quadrature_hamiltonian_element(1, 1, 0, 8) - to_float(mpq(1, 6), 113)) <= mpfr("1e-30")
        assert abs(quadrature_hamiltonian_element(1, 2, 1, 8)
                   - to_float(hamiltonian_element(1, 2, 1), 113)) <= mpfr("1e-30")
        assert abs(quadrature_overlap_element(1, 1, 8) - to_float(mpq(1, 30), 113)) <= mpfr("1e-30")


def test_quadrature_insufficient_nodes():
    with pytest.raises(InsufficientNodes):
        quadrature_overlap_element(5, 5, 6)
    with pytest.raises(InsufficientNodes):
        quadrature_hamiltonian_element(1, 1, 0, 3)


def test_exact_reference_analytic():
    ref = exact_reference(0, 2, 113)
    assert ref.provenance == "analytic"
    with precision(113):
        pi = pi_const(113)
        assert ref.values[0] == pi * pi / 2
        assert ref.values[1] == pi * pi * 4 / 2
    assert format_significant(ref.values[0], 10) == "4.934802200"
    assert format_significant(ref.values[1], 10) == "19.73920880"
    # 70+ digits at 256 bits means the first 70 decimal digits are those of pi^2/2
    wide = exact_reference(0, 1, 256)
    with precision(256):
        pi = pi_const(256)
        assert wide.values[0] == pi * pi / 2


def test_exact_reference_table():
    ref = exact_reference(1, 4, 256)
    assert ref.provenance == "table"
    assert format_significant(ref.values[0], 10) == "5.432607855"
    assert [format_significant(v, 10) for v in ref.values] == [
        "5.432607855", "20.23986304", "44.91360966", "79.45707400",
    ]
    assert list(ref.values) == sorted(ref.values)
    with pytest.raises(ValueError):
        exact_reference(1, 5, 256)


def test_exact_reference_rejects_other_strengths():
    with pytest.raises(UnsupportedLambda):
        exact_reference(mpq(1, 2), 2, 113)
    with pytest.raises(UnsupportedLambda):
        exact_reference(2, 2, 113)

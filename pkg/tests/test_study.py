import json

import pytest
from gmpy2 import mpfr, mpq

from ritz import (
    ConvergenceReport,
    StateCountMismatch,
    check_monotone,
    compare_to_reference,
    exact_reference,
    pi_const,
    precision,
    run_convergence,
    stable_precision,
)
from ritz.model import ReferenceSpectrum
from ritz.study import format_significant, report_json_dict, to_csv, to_text

from reference_tables import TABLE_LAMBDA0


def small_report():
    return run_convergence(0, 4, 6, 2, precision=128)


def test_run_convergence_single_row():
    report = run_convergence(0, 1, 1, 1, precision=113)
    assert len(report.rows) == 1
    n, values = report.rows[0]
    assert n == 1
    assert format_significant(values[0], 10) == "5.000000000"


def test_run_convergence_validates_range():
    with pytest.raises(ValueError):
        run_convergence(0, 6, 4, 2)
    with pytest.raises(ValueError):
        run_convergence(0, 4, 6, 5)
    with pytest.raises(ValueError):
        run_convergence(0, 4, 6, 0)


def test_run_convergence_rows_match_reference_strings():
    report = small_report()
    for n, values in report.rows:
        got = tuple(format_significant(w, 10) for w in values)
        assert got == TABLE_LAMBDA0[n][:2]


def test_check_monotone_empty_on_real_data():
    assert check_monotone(small_report()) == []


def test_check_monotone_flags_artificial_reversal():
    report = small_report()
    reversed_rows = tuple(
        (n, values) for (n, _), (_, values) in zip(report.rows, reversed(report.rows))
    )
    doctored = ConvergenceReport(
        report.lam, report.states, report.precision, report.route, reversed_rows
    )
    violations = check_monotone(doctored)
    assert violations  # each decreasing pair in the original is now increasing
    v = violations[0]
    assert v.n_next == v.n_prev + 1 and v.increase > 0


def test_compare_to_reference_gaps():
    report = run_convergence(0, 4, 4, 4, precision=256)
    gaps = compare_to_reference(report, exact_reference(0, 4, 256))
    assert gaps.min_gap >= 0
    # Fourth state at N=4 sits about 21.29 above the analytic level 8 pi^2.
    with precision(256):
        pi = pi_const(256)
        expected = report.rows[0][1][3] - 16 * pi * pi / 2
        assert abs(gaps.rows[0][1][3] - expected) == 0
        assert abs(float(gaps.rows[0][1][3]) - 21.2923884) < 1e-6


def test_compare_to_reference_zero_gap_for_identical_rows():
    report = run_convergence(0, 4, 4, 2, precision=113)
    ref = ReferenceSpectrum(mpq(0), report.rows[0][1], "analytic")
    gaps = compare_to_reference(report, ref)
    assert all(g == 0 for _, row in gaps.rows for g in row)


def test_compare_to_reference_state_count():
    report = run_convergence(0, 4, 4, 4, precision=113)
    short = ReferenceSpectrum(mpq(0), (mpfr(1), mpfr(2)), "analytic")
    with pytest.raises(StateCountMismatch):
        compare_to_reference(report, short)


def test_format_significant_cases():
    assert format_significant(mpq(5), 10) == "5.000000000"
    assert format_significant(mpq(21), 10) == "21.00000000"
    assert format_significant(mpq(-5, 4), 4) == "-1.250"
    assert format_significant(mpq(1, 30), 10) == "0.03333333333"
    assert format_significant(mpq(12345678901234), 10) == "12345678900000"
    assert format_significant(0, 10) == "0.000000000"
    with pytest.raises(ValueError):
        format_significant(mpq(1), 0)


def test_csv_layout():
    report = small_report()
    text = to_csv(report)
    lines = text.strip().splitlines()
    assert lines[0] == "N,E1,E2"
    assert lines[1] == "4," + ",".join(TABLE_LAMBDA0[4][:2])
    assert len(lines) == 4


def test_csv_is_stable_across_runs():
    assert to_csv(small_report()) == to_csv(small_report())


def test_text_layout_aligned():
    text = to_text(small_report())
    lines = text.splitlines()
    assert lines[0].split() == ["N", "E1", "E2"]
    assert all(len(line) == len(lines[0]) for line in lines[1:])


def test_json_round_trip():
    payload = report_json_dict(small_report())
    emitted = json.dumps(payload, indent=2) + "\n"
    assert json.dumps(json.loads(emitted), indent=2) + "\n" == emitted
    assert payload["lambda"] == "0"
    assert payload["route"] == "ldlt"
    assert payload["rows"][0]["n"] == 4
    assert payload["rows"][0]["values"] == list(TABLE_LAMBDA0[4][:2])


def test_stable_precision_small_case():
    p = stable_precision(0, 4, 2, digits=10, start=64, limit=512)
    assert p >= 64
    # The returned precision already prints the settled digits.
    report = run_convergence(0, 4, 4, 2, precision=p)
    assert tuple(format_significant(w) for w in report.rows[0][1]) == TABLE_LAMBDA0[4][:2]

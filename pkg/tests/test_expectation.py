"""Expected dissimilarity: closed form, state-sum route, comparisons."""

import random
from fractions import Fraction

import numpy as np
import pytest

from idstates import (
    ExpectationReport,
    comparison_report,
    expected_dissimilarity,
    expected_dissimilarity_via_states,
    inner_product,
    prevalence_experiment,
)
from idstates.expectation import within_exceeds_between_fraction

from conftest import random_rational_vector

P_EXAMPLE = (0.8, 0.2)
Q_EXAMPLE = (0.9, 0.1)


def test_worked_example():
    assert abs(expected_dissimilarity(P_EXAMPLE, Q_EXAMPLE) - 0.26) < 1e-12
    assert abs(expected_dissimilarity(P_EXAMPLE, P_EXAMPLE) - 0.32) < 1e-12


def test_closed_form_extremes():
    e1 = (Fraction(1), Fraction(0))
    assert expected_dissimilarity(e1, e1) == 0
    disjoint_p = (Fraction(1), Fraction(0), Fraction(0))
    disjoint_q = (Fraction(0), Fraction(1, 2), Fraction(1, 2))
    assert expected_dissimilarity(disjoint_p, disjoint_q) == 1
    with pytest.raises(ValueError):
        expected_dissimilarity((1, 0), (1, 0, 0))


def test_state_sum_matches_closed_form_exactly():
    rng = random.Random(17)
    p = random_rational_vector(rng, 3)
    q = random_rational_vector(rng, 3)
    want = 1 - inner_product(p, q)
    for draw_size in (1, 2, 3, 4):
        assert expected_dissimilarity_via_states(draw_size, p, q) == want


def test_state_sum_same_distribution():
    rng = random.Random(18)
    p = random_rational_vector(rng, 3)
    assert expected_dissimilarity_via_states(3, p, p) == 1 - inner_product(p, p)


def test_state_sum_worked_example_float():
    got = expected_dissimilarity_via_states(2, P_EXAMPLE, Q_EXAMPLE)
    assert abs(got - 0.26) < 1e-12


def test_state_sum_point_mass():
    e1 = (Fraction(1), Fraction(0))
    assert expected_dissimilarity_via_states(2, e1, e1) == 0


def test_comparison_report_worked_example():
    report = comparison_report(P_EXAMPLE, Q_EXAMPLE)
    assert abs(report.e_pq - 0.26) < 1e-12
    assert abs(report.e_pp - 0.32) < 1e-12
    assert report.within_exceeds_between


def test_comparison_report_equal_vectors():
    p = (Fraction(3, 5), Fraction(2, 5))
    report = comparison_report(p, p)
    assert report.avg_within == report.e_pq
    assert not report.within_exceeds_between


def test_comparison_report_disjoint_point_masses():
    p = (Fraction(1), Fraction(0))
    q = (Fraction(0), Fraction(1))
    report = comparison_report(p, q)
    assert (report.e_pp, report.e_qq, report.e_pq) == (0, 0, 1)


def test_comparison_report_quadratic_identity():
    # avg_within - e_pq always equals -<p-q, p-q>/2
    rng = random.Random(19)
    for _ in range(50):
        p = random_rational_vector(rng, 5)
        q = random_rational_vector(rng, 5)
        report = comparison_report(p, q)
        diff = tuple(a - b for a, b in zip(p, q))
        assert report.avg_within - report.e_pq == -Fraction(1, 2) * inner_product(
            diff, diff
        )
        assert report.within_exceeds_between == (
            inner_product(p, q) > inner_product(p, p)
        )


def test_report_validation():
    with pytest.raises(ValueError):
        ExpectationReport(
            e_pq=0.2, e_pp=0.5, e_qq=0.5, avg_within=0.5, within_exceeds_between=True
        )
    with pytest.raises(ValueError):
        ExpectationReport(
            e_pq=1.5, e_pp=0.5, e_qq=0.5, avg_within=0.5, within_exceeds_between=False
        )


def test_fraction_zero_for_identical_rows():
    rows = np.asarray([[0.4, 0.6], [0.9, 0.1], [0.25, 0.75]])
    assert within_exceeds_between_fraction(rows, rows.copy()) == 0.0
    with pytest.raises(ValueError):
        within_exceeds_between_fraction(rows, rows[:2])


def test_prevalence_reproducible_and_bounded():
    a = prevalence_experiment(2, 2000, seed=5)
    b = prevalence_experiment(2, 2000, seed=5)
    assert a == b
    assert 0.0 < a < 1.0


def test_prevalence_trend_reported():
    # soft trend check: report only, no ordering assertion
    fractions = {
        i: prevalence_experiment(i, 20000, seed=11) for i in (2, 5, 10, 20)
    }
    print(f"within>between prevalence by object count: {fractions}")
    assert all(0.0 <= f <= 1.0 for f in fractions.values())


def test_prevalence_validation():
    with pytest.raises(ValueError):
        prevalence_experiment(1, 100, seed=0)
    with pytest.raises(ValueError):
        prevalence_experiment(3, 0, seed=0)
    with pytest.raises(ValueError):
        prevalence_experiment(3, 100, seed=0, concentration=0.0)

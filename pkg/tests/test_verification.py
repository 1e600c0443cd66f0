import math

import pytest
from pydantic import ValidationError

from app import schemas
from app.core.errors import InvalidInputError
from app.models import Suite
from app.services import verification


def _assert_passed(report: schemas.VerificationReport) -> None:
    assert report.passed, [c for c in report.failing()]


def test_binom_suite():
    report = verification.binom_suite(max_m=12)
    _assert_passed(report)
    assert report.suite == Suite.BINOM
    assert report.regression["lemma31_exponent_min"] > 0


def test_codes_suite():
    report = verification.codes_suite(max_ground=12)
    _assert_passed(report)
    assert report.regression["family_over_counting_min"] >= 1.0


def test_gamma_suite():
    report = verification.gamma_suite(m_values=range(1, 7), dominate_m_max=8, samples=50)
    _assert_passed(report)
    assert 0 < report.regression["gamma_count_ratio_max"] <= 1.0


@pytest.mark.parametrize("a", [2, 4])
def test_robustness_suite(a):
    report = verification.robustness_suite(a=a, n_values=range(2, 6), max_m=16)
    _assert_passed(report)
    assert report.regression["robustness_envelope"] >= 1.0
    assert report.params["a"] == a


def test_product_suite():
    _assert_passed(verification.product_suite(cases=10, samples=300))


def test_block_suite():
    report = verification.block_suite(m_values=(2, 3), samples=1000)
    _assert_passed(report)
    assert report.params["q"] == ["2", "inf"]


def test_pietsch_suite():
    report = verification.pietsch_suite(m_values=(1,), n_values=range(1, 5))
    _assert_passed(report)
    assert len(report.rows) == 4


def test_lemma25_suite():
    _assert_passed(verification.lemma25_suite(m_values=(1, 2), n_values=(2, 3, 4)))


class TestSchuettSuite:
    def test_small_grid(self):
        report = verification.schuett_suite(m_values=(1, 2), n_values=range(1, 6))
        _assert_passed(report)
        assert len(report.rows) == 2 * 5 * 2
        assert all(row.lo <= row.hi for row in report.rows)
        assert report.rows == sorted(report.rows, key=lambda r: (r.m, r.n, r.pq))

    def test_timings_are_off_by_default(self):
        report = verification.schuett_suite(m_values=(1,), n_values=(1, 2))
        assert all(row.elapsed_s is None for row in report.rows)

    def test_timings(self):
        report = verification.schuett_suite(m_values=(1,), n_values=(1, 2), timings=True)
        assert all(row.elapsed_s is not None and row.elapsed_s >= 0 for row in report.rows)

    def test_envelopes_are_at_least_one(self):
        report = verification.schuett_suite(m_values=(1,), n_values=(1, 2, 3))
        for name in ("upper_gap_envelope", "lower_gap_envelope", "bracket_width_envelope"):
            assert report.regression[name] >= 1.0


def test_thm32_suite_small():
    report = verification.thm32_suite(n_values=(2, 3), max_m=4)
    _assert_passed(report)
    assert {(row.n, row.m) for row in report.rows} == {(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)}


class TestRegression:
    def test_growth_fails(self):
        results = verification.regression_criteria({"width_envelope": 2.0, "other": 9.0}, {"width_envelope": 1.5})
        assert len(results) == 1
        assert not results[0].passed

    def test_equal_value_passes(self):
        results = verification.regression_criteria({"width_envelope": 1.5}, {"width_envelope": 1.5})
        assert results[0].passed

    def test_missing_previous_is_skipped(self):
        assert verification.regression_criteria({"width_envelope": 3.0}, {}) == []

    def test_report_rejects_envelope_below_one(self):
        with pytest.raises(ValidationError):
            schemas.VerificationReport(suite=Suite.BINOM, regression={"width_envelope": 0.5})


class TestRunSuite:
    def test_binom_dispatch(self):
        report = verification.run_suite(Suite.BINOM, max_m=8)
        assert report.params == {"max_m": 8}

    def test_codes_dispatch(self):
        report = verification.run_suite(Suite.CODES, max_m=5)
        assert report.suite == Suite.CODES
        assert report.params["max_ground"] == 5

    def test_single_pair_schuett(self):
        pq = schemas.ExponentPair(p=1, q=2)
        report = verification.run_suite(Suite.SCHUETT, m_values=(1,), n_values=(1, 2), pq=pq)
        assert {row.pq for row in report.rows} == {"p=1,q=2"}

    @pytest.mark.parametrize(
        "suite, flags",
        [
            (Suite.THM32, {"m_values": (4,)}),
            (Suite.CODES, {"m_values": (4,)}),
            (Suite.ROBUSTNESS, {"m_values": (4,)}),
            (Suite.GAMMA, {"n_values": (2,)}),
            (Suite.SCHUETT, {"max_m": 8}),
        ],
    )
    def test_rejects_flags_the_suite_ignores(self, suite, flags):
        with pytest.raises(InvalidInputError, match="does not take"):
            verification.run_suite(suite, **flags)


@pytest.mark.slow
def test_schuett_acceptance_grid():
    _assert_passed(verification.schuett_suite())


@pytest.mark.slow
def test_thm32_acceptance_grid():
    _assert_passed(verification.thm32_suite())


@pytest.mark.slow
def test_block_acceptance_grid():
    report = verification.block_suite()
    _assert_passed(report)
    assert report.regression["block_radius_ratio_max"] <= verification.BLOCK_RADIUS_SLACK


def test_default_pairs_cover_both_metrics():
    assert {pq.q for pq in verification.DEFAULT_PAIRS} == {2.0, math.inf}

"""
Tests for the statistical concentration checks
"""

import numpy as np
import pytest

from mimorelay.core.concentration import (
    MATRIX_KINDS,
    ConcentrationReport,
    MatrixSpec,
    lemma1_check,
    lemma2_check,
    run_lemma_suite,
)


def test_lemma1_passes_at_moderate_size():
    report = lemma1_check(1024, sigma_p=1.0, sigma_q=1.0, trials=100, seed=3)
    assert report.passed
    names = [check.name for check in report.checks]
    assert names == ["norm", "cross", "fourth_moment"]
    fourth = report.checks[2]
    assert fourth.target == pytest.approx(2.0)


def test_lemma1_scales_with_variance():
    report = lemma1_check(1024, sigma_p=2.0, sigma_q=0.5, trials=50, seed=1)
    norm = report.checks[0]
    assert norm.target == pytest.approx(4.0)
    assert norm.mean == pytest.approx(4.0, rel=0.02)
    assert report.checks[2].target == pytest.approx(32.0)


def test_lemma1_is_reproducible():
    a = lemma1_check(64, 1.0, 1.0, trials=10, seed=9)
    b = lemma1_check(64, 1.0, 1.0, trials=10, seed=9)
    assert a == b
    assert a != lemma1_check(64, 1.0, 1.0, trials=10, seed=10)


@pytest.mark.parametrize("kind, trace", [("identity", 16.0), ("ramp", 8.5)])
def test_diagonal_matrix_traces(kind, trace):
    spec = MatrixSpec(kind, 16)
    assert spec.trace == pytest.approx(trace)
    assert spec.spectral_norm == 1.0
    assert np.allclose(spec.dense(), np.diag(np.diag(spec.dense())))


def test_rotated_matrix():
    spec = MatrixSpec("rotated", 32, seed=4)
    A = spec.dense()
    assert spec.trace == pytest.approx(0.0, abs=1e-12)
    assert np.allclose(A, A.conj().T, atol=1e-12)
    assert np.linalg.norm(A, 2) == pytest.approx(1.0, rel=1e-9)
    x = np.arange(32) + 1j
    assert np.allclose(spec.apply(x), A @ x)


def test_unknown_matrix_kind():
    with pytest.raises(ValueError):
        MatrixSpec("toeplitz", 8)


@pytest.mark.parametrize("kind", MATRIX_KINDS)
def test_lemma2_passes(kind):
    report = lemma2_check(512, MatrixSpec(kind, 512, seed=2), trials=100, seed=2)
    assert report.passed
    assert report.matrix_kind == kind
    for check in report.checks:
        assert check.fraction_within >= check.required_fraction


def test_suite_covers_every_matrix():
    reports = run_lemma_suite(128, trials=20, seed=0)
    assert [r.lemma for r in reports] == ["lemma1"] + ["lemma2"] * len(MATRIX_KINDS)
    assert [r.matrix_kind for r in reports[1:]] == list(MATRIX_KINDS)


def test_report_serializes():
    report = lemma2_check(64, MatrixSpec("ramp", 64), trials=5, seed=1)
    again = ConcentrationReport.from_json(report.to_json())
    assert again == report
    assert again.passed == report.passed


@pytest.mark.slow
def test_large_array_concentration():
    for report in run_lemma_suite(4096, trials=200, seed=0):
        assert report.passed, report.lemma


@pytest.mark.parametrize("num_antennas, trials", [(0, 10), (16, 0)])
def test_empty_runs_are_rejected(num_antennas, trials):
    with pytest.raises(ValueError):
        lemma1_check(num_antennas, 1.0, 1.0, trials=trials, seed=0)
    with pytest.raises(ValueError):
        lemma2_check(num_antennas, MatrixSpec("identity", max(num_antennas, 1)), trials=trials, seed=0)

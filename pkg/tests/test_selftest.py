import logging

import pytest

from qds_lab import BadParameterError, _selftest, run_selftest


@pytest.fixture()
def report():
    return run_selftest(0, trials=40)


def test_selftest_passes(report):
    assert report.passed, report.failures
    assert report.seed == 0
    assert [c.name for c in report.checks] == list(_selftest.CHECKS)


def test_every_check_explains_itself(report):
    assert all(c.detail for c in report.checks)


def test_batch_checks_scale_with_trials(report):
    details = {c.name: c.detail for c in report.checks}

    assert details["batch.eig_reconstruction"].startswith("40 matrices")
    assert details["batch.majorization_round_trip"].startswith("20 pairs")
    assert details["batch.interpolation_sweep"].startswith("2 channels")


@pytest.mark.acceptance()
def test_selftest_at_acceptance_size():
    result = run_selftest(0)

    assert result.passed, result.failures
    details = {c.name: c.detail for c in result.checks}
    assert details["batch.birkhoff_decompose"].startswith("1000 matrices")
    assert details["batch.majorization_round_trip"].startswith("500 pairs")


def test_selftest_logs_each_check(caplog):
    caplog.set_level(logging.INFO, logger="qds_lab")

    run_selftest(3, trials=4)

    assert "selftest matcore.vec: ok" in caplog.text


@pytest.mark.parametrize("trials", [0, -5, True, 2.5])
def test_selftest_rejects_bad_trial_counts(trials):
    with pytest.raises(BadParameterError, match="trials"):
        run_selftest(0, trials=trials)


def test_library_errors_fail_the_check(monkeypatch):
    def broken(ctx):
        msg = "boom"
        raise BadParameterError(msg)

    def fine(ctx):
        return True, "fine"

    monkeypatch.setattr(_selftest, "CHECKS", {"broken": broken, "fine": fine})

    result = run_selftest(0)

    assert not result.passed
    assert result.failures == ["broken"]
    assert result.checks[0].detail == "BadParameterError: boom"

import math

import numpy as np
import pytest
from hypothesis import given

from qds_lab import (
    InvalidDensityError,
    NotQdsError,
    depolarizing,
    entropy_monotonicity_check,
    identity_channel,
    pinching,
    random_density,
    random_mixed_unitary,
    random_pure_state,
    random_unitary,
    shift_average,
    unitarity_probe,
    unitary_conjugation,
    von_neumann_entropy,
)
from qds_lab._entropy import spectrum_entropy
from qds_lab._matcore import identity
from qds_lab._random import make_rng
from tests.strategies import dims, seeds


@pytest.mark.parametrize(
    ("lam", "expected"),
    [
        ([1.0, 0.0], 0.0),
        ([0.5, 0.5], math.log(2)),
        ([0.25] * 4, math.log(4)),
        ([1.0, -1e-14], 0.0),
    ],
)
def test_spectrum_entropy(lam, expected):
    assert spectrum_entropy(lam) == pytest.approx(expected, abs=1e-12)


def test_entropy_of_maximally_mixed_state():
    assert von_neumann_entropy(identity(5) / 5) == pytest.approx(math.log(5))


def test_entropy_of_pure_state_is_zero(rng):
    assert von_neumann_entropy(random_pure_state(4, rng)) == pytest.approx(0, abs=1e-9)


def test_entropy_rejects_non_states():
    with pytest.raises(InvalidDensityError):
        von_neumann_entropy(np.diag([0.7, 0.7]))


def test_completely_depolarizing_reaches_the_bound(rng):
    report = entropy_monotonicity_check(depolarizing(0.0, 4), random_pure_state(4, rng))

    assert report.delta == pytest.approx(math.log(4))
    assert report.bound_log_d == pytest.approx(math.log(4))
    assert report.within_bound
    assert report.strict_observed


def test_report_in_bits():
    rho = np.diag([1.0, 0.0]).astype(np.complex128)

    report = entropy_monotonicity_check(depolarizing(0.0, 2), rho).in_bits()

    assert report.delta == pytest.approx(1.0)
    assert report.bound_log_d == pytest.approx(1.0)


def test_unitary_channel_keeps_entropy(rng):
    channel = unitary_conjugation(random_unitary(3, rng))

    report = entropy_monotonicity_check(channel, random_density(3, rng))

    assert report.delta == pytest.approx(0.0, abs=1e-9)
    assert not report.strict_expected
    assert not report.counterexample


def test_pinching_of_diagonal_state_is_flagged_as_counterexample():
    rho = np.diag([0.6, 0.3, 0.1]).astype(np.complex128)

    report = entropy_monotonicity_check(pinching(3), rho)

    assert report.strict_expected
    assert not report.strict_observed
    assert report.counterexample
    assert report.within_bound


def test_monotonicity_requires_qds_channel():
    with pytest.raises(NotQdsError):
        entropy_monotonicity_check(shift_average(3), identity(3) / 3)


@given(seed=seeds, n=dims)
def test_entropy_never_decreases_under_qds_maps(seed, n):
    rng = make_rng(seed)

    report = entropy_monotonicity_check(
        random_mixed_unitary(n, rng),
        random_density(n, rng),
    )

    assert report.within_bound
    assert report.s_out >= report.s_in - 1e-10


def test_unitarity_probe(rng):
    assert unitarity_probe(identity_channel(3))
    assert unitarity_probe(unitary_conjugation(random_unitary(4, rng)))
    assert not unitarity_probe(depolarizing(0.5, 3))
    assert not unitarity_probe(pinching(3))

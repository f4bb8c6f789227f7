import logging

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qds_lab import (
    BadParameterError,
    DecompositionStalledError,
    DimensionMismatchError,
    DoublyStochasticMatrix,
    NotMajorizedError,
    PropertyViolation,
    _majorization,
    birkhoff_decompose,
    build_ds_matrix,
    certify_qds,
    check_majorization,
    convex_function_test,
    random_density,
    random_doubly_stochastic,
    random_mixed_unitary,
    random_pure_state,
    realize_channel,
    schatten_norm,
)
from qds_lab._matcore import identity
from qds_lab._random import make_rng
from tests.strategies import dims, exponents, seeds


@pytest.fixture()
def majorized_pair(rng):
    """``(rho, sigma)`` with ``rho = Phi(sigma)`` for a random QDS ``Phi``."""
    sigma = random_density(4, rng)
    rho = random_mixed_unitary(4, rng).apply(sigma)
    return (rho + rho.conj().T) / 2, sigma


def test_maximally_mixed_is_majorized_by_any_state(rng):
    pure = random_pure_state(3, rng)

    forward = check_majorization(identity(3) / 3, pure)
    backward = check_majorization(pure, identity(3) / 3)

    assert forward.holds
    np.testing.assert_allclose(forward.partial_sum_slack, [2 / 3, 1 / 3, 0], atol=1e-12)
    assert not backward.holds


def test_check_majorization_reports_sorted_spectra(majorized_pair):
    rho, sigma = majorized_pair

    certificate = check_majorization(rho, sigma)

    assert certificate.holds
    assert np.all(np.diff(certificate.eigenvalues_rho) <= 0)
    assert np.all(np.diff(certificate.eigenvalues_sigma) <= 0)


def test_check_majorization_rejects_mismatched_dims():
    with pytest.raises(DimensionMismatchError):
        check_majorization(identity(2) / 2, identity(3) / 3)


def test_build_ds_matrix_maps_sigma_spectrum_to_rho_spectrum():
    lam_rho = np.array([0.4, 0.35, 0.25])
    lam_sigma = np.array([0.6, 0.3, 0.1])

    d = build_ds_matrix(lam_rho, lam_sigma).entries

    np.testing.assert_allclose(d @ lam_sigma, lam_rho, atol=1e-12)
    np.testing.assert_allclose(d.sum(axis=0), 1, atol=1e-12)
    np.testing.assert_allclose(d.sum(axis=1), 1, atol=1e-12)
    assert np.all(d >= 0)


@given(seed=seeds, n=dims)
def test_build_ds_matrix_for_random_majorized_spectra(seed, n):
    rng = make_rng(seed)
    lam_sigma = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    mixing = random_doubly_stochastic(n, rng)
    lam_rho = np.sort(mixing @ lam_sigma)[::-1]

    d = build_ds_matrix(lam_rho, lam_sigma).entries

    np.testing.assert_allclose(d @ lam_sigma, lam_rho, atol=1e-10)
    DoublyStochasticMatrix.from_array(d)


@given(seed=seeds, n=st.integers(min_value=2, max_value=8), p=exponents)
def test_p_norms_do_not_grow_under_majorization(seed, n, p):
    rng = make_rng(seed)
    sigma = random_density(n, rng)
    rho = random_mixed_unitary(n, rng).apply(sigma)
    rho = (rho + rho.conj().T) / 2

    assert check_majorization(rho, sigma).holds
    assert schatten_norm(rho, p) <= schatten_norm(sigma, p) + 1e-10


def test_build_ds_matrix_rejects_non_majorized_spectra():
    with pytest.raises(NotMajorizedError):
        build_ds_matrix([0.6, 0.3, 0.1], [0.4, 0.35, 0.25])


def test_build_ds_matrix_checks_its_own_result(monkeypatch):
    monkeypatch.setattr(
        _majorization,
        "majorization_slack",
        lambda x, y: np.zeros_like(x),
    )

    # sigma = (0.6, 0.4) cannot reach the less mixed rho = (0.9, 0.1)
    with pytest.raises(PropertyViolation, match="misses lam_rho"):
        build_ds_matrix([0.9, 0.1], [0.6, 0.4])


def test_build_ds_matrix_requires_sorted_spectra():
    with pytest.raises(BadParameterError, match="non-increasing"):
        build_ds_matrix([0.25, 0.75], [1.0, 0.0])


@pytest.mark.parametrize(
    "data",
    [
        [[0.5, 0.5], [0.2, 0.8]],
        [[1.5, -0.5], [-0.5, 1.5]],
    ],
)
def test_doubly_stochastic_matrix_validates_entries(data):
    with pytest.raises(BadParameterError):
        DoublyStochasticMatrix.from_array(data)


def test_birkhoff_of_permutation_has_one_term():
    p = np.eye(3)[[2, 0, 1]]

    decomposition = birkhoff_decompose(p)

    np.testing.assert_allclose(decomposition.weights, [1.0])
    assert decomposition.permutations == [(2, 0, 1)]


def test_birkhoff_of_uniform_matrix():
    decomposition = birkhoff_decompose(np.full((2, 2), 0.5))

    assert len(decomposition.weights) == 2
    np.testing.assert_allclose(decomposition.reconstruct(), 0.5, atol=1e-12)


@given(seed=seeds, n=dims)
def test_birkhoff_reconstructs_random_matrices(seed, n):
    d = random_doubly_stochastic(n, make_rng(seed), terms=2 * n)

    decomposition = birkhoff_decompose(d)

    assert len(decomposition.weights) <= (n - 1) ** 2 + 1
    assert decomposition.weights.sum() == pytest.approx(1.0)
    assert np.all(decomposition.weights > 0)
    np.testing.assert_allclose(decomposition.reconstruct(), d, atol=1e-9)


def test_birkhoff_stalls_without_a_perfect_matching():
    with pytest.raises(DecompositionStalledError):
        birkhoff_decompose([[1.0, 1.0], [0.0, 0.0]])


def test_realize_channel_maps_sigma_to_rho(majorized_pair):
    rho, sigma = majorized_pair

    certificate = realize_channel(rho, sigma)

    channel = certificate.realizing_channel
    assert certificate.holds
    assert certify_qds(channel).is_qds
    assert schatten_norm(channel.apply(sigma) - rho, 1) < 1e-8
    assert certificate.realize_residual < 1e-8
    assert len(certificate.decomposition.weights) == channel.params["terms"]


def test_realize_channel_rejects_non_majorized_pair(rng):
    with pytest.raises(NotMajorizedError):
        realize_channel(random_pure_state(3, rng), identity(3) / 3)


def test_realize_channel_warns_about_degenerate_spectra(rng, caplog):
    caplog.set_level(logging.WARNING, logger="qds_lab")
    sigma = random_pure_state(3, rng)

    certificate = realize_channel(identity(3) / 3, sigma)

    assert certificate.degenerate_basis
    assert "Degenerate spectrum" in caplog.text
    np.testing.assert_allclose(
        certificate.realizing_channel.apply(sigma),
        identity(3) / 3,
        atol=1e-10,
    )


def test_realize_channel_accepts_explicit_bases():
    sigma = np.diag([0.7, 0.2, 0.1]).astype(np.complex128)
    rho = np.diag([0.2, 0.5, 0.3]).astype(np.complex128)
    rho_basis = np.eye(3)[:, [1, 2, 0]]

    certificate = realize_channel(
        rho,
        sigma,
        sigma_basis=np.eye(3),
        rho_basis=rho_basis,
    )

    np.testing.assert_allclose(certificate.eigenvalues_rho, [0.5, 0.3, 0.2])
    np.testing.assert_allclose(
        certificate.realizing_channel.apply(sigma),
        rho,
        atol=1e-10,
    )


def test_realize_channel_rejects_a_basis_that_does_not_diagonalize():
    sigma = np.diag([0.7, 0.3]).astype(np.complex128)
    hadamard = np.array([[1, 1], [1, -1]]) / np.sqrt(2)

    with pytest.raises(BadParameterError):
        realize_channel(identity(2) / 2, sigma, sigma_basis=hadamard)


def test_convex_function_test_passes_for_majorized_pair(majorized_pair):
    rho, sigma = majorized_pair

    report = convex_function_test(rho, sigma)

    assert report.majorized
    assert report.violations == []
    assert {c.kind for c in report.checks} == {"hinge", "power"}


def test_convex_function_test_finds_violations_for_reversed_pair(rng):
    report = convex_function_test(random_pure_state(3, rng), identity(3) / 3)

    assert not report.majorized
    violated = {(c.kind, c.parameter) for c in report.violations}
    assert ("power", 2.0) in violated

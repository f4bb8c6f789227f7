import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qds_lab import (
    BadExponentError,
    DomainError,
    InvalidDensityError,
    MalformedInputError,
    NonHermitianInputError,
    eig_hermitian,
    gell_mann_basis,
    random_density,
    schatten_dual,
    schatten_norm,
    spectral_apply,
    trace,
    unvec,
    vec,
)
from qds_lab._matcore import (
    MAX_DIM,
    as_matrix,
    check_density,
    check_exponent,
    conjugate_exponent,
)
from qds_lab._random import (
    complex_gaussian,
    make_rng,
    random_hermitian,
    random_unitary,
)
from tests.strategies import dims, exponents, seeds


@pytest.mark.parametrize(
    "data",
    [
        np.zeros((2, 3)),
        np.zeros(4),
        np.zeros((0, 0)),
        np.zeros((MAX_DIM + 1, MAX_DIM + 1)),
        [[1.0, np.nan], [0.0, 1.0]],
    ],
)
def test_as_matrix_rejects_malformed_input(data):
    with pytest.raises(MalformedInputError):
        as_matrix(data)


def test_check_density_accepts_a_state():
    rho = check_density([[0.75, 0.25j], [-0.25j, 0.25]])

    assert rho.dtype == np.complex128
    assert trace(rho) == pytest.approx(1.0)


@pytest.mark.parametrize(
    ("data", "error"),
    [
        ([[1.5, 0.0], [0.0, -0.5]], InvalidDensityError),
        ([[1.0, 0.0], [0.0, 1.0]], InvalidDensityError),
        ([[0.5, 0.1], [0.3, 0.5]], NonHermitianInputError),
    ],
)
def test_check_density_rejects_invalid_states(data, error):
    with pytest.raises(error):
        check_density(data)


def test_eig_hermitian_sorts_eigenvalues_descending():
    a = np.diag([0.1, 0.7, 0.2]).astype(np.complex128)

    spectrum = eig_hermitian(a)

    np.testing.assert_allclose(spectrum.eigenvalues, [0.7, 0.2, 0.1])
    np.testing.assert_allclose(spectrum.reconstruct(), a, atol=1e-12)


def _hermitian_with_blocks(rng, n):
    """Random eigenbasis; eigenvalues repeat in blocks of random sizes."""
    levels = rng.normal(size=n)
    sizes = rng.integers(1, n + 1, size=n)
    eigenvalues = np.repeat(levels, sizes)[:n]
    u = random_unitary(n, rng)
    h = (u * eigenvalues) @ u.conj().T
    return (h + h.conj().T) / 2, np.sort(eigenvalues)[::-1]


def test_eig_hermitian_reconstructs_a_thousand_matrices():
    rng = make_rng(0)

    for i in range(1000):
        n = 2 + i % 15
        if i % 2:
            h = random_hermitian(n, rng)
            expected = np.linalg.eigvalsh(h)[::-1]
        else:
            h, expected = _hermitian_with_blocks(rng, n)

        spectrum = eig_hermitian(h)

        assert np.abs(spectrum.reconstruct() - h).max() < 1e-9
        np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-9)
        np.testing.assert_allclose(
            spectrum.eigenvectors.conj().T @ spectrum.eigenvectors,
            np.eye(n),
            atol=1e-9,
        )


@given(seed=seeds, n=st.integers(min_value=2, max_value=16))
def test_eig_hermitian_on_degenerate_blocks(seed, n):
    h, expected = _hermitian_with_blocks(make_rng(seed), n)

    spectrum = eig_hermitian(h)

    np.testing.assert_allclose(spectrum.eigenvalues, expected, atol=1e-9)
    np.testing.assert_allclose(spectrum.reconstruct(), h, atol=1e-9)


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NonHermitianInputError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128))


def test_spectral_apply_matches_function_on_diagonal():
    a = np.diag([4.0, 1.0]).astype(np.complex128)

    root = spectral_apply(a, np.sqrt, domain=(0.0, math.inf))

    np.testing.assert_allclose(root, np.diag([2.0, 1.0]), atol=1e-12)


def test_spectral_apply_checks_domain():
    a = np.diag([1.0, -1.0]).astype(np.complex128)

    with pytest.raises(DomainError, match="outside domain"):
        spectral_apply(a, np.log, domain=(0.0, math.inf))


@pytest.mark.parametrize(("p", "expected"), [(1, 7.0), (2, 5.0), (math.inf, 4.0)])
def test_schatten_norm_of_diagonal(p, expected):
    a = np.diag([3.0, -4.0]).astype(np.complex128)

    assert schatten_norm(a, p) == pytest.approx(expected)


@pytest.mark.parametrize("p", [0.5, 0.0, -1.0, math.nan])
def test_check_exponent_rejects_values_below_one(p):
    with pytest.raises(BadExponentError):
        check_exponent(p)


@pytest.mark.parametrize(
    ("p", "q"),
    [(1.0, math.inf), (math.inf, 1.0), (2.0, 2.0), (3.0, 1.5)],
)
def test_conjugate_exponent(p, q):
    assert conjugate_exponent(p) == pytest.approx(q)


@given(seed=seeds, n=dims, p=exponents)
def test_schatten_dual_attains_the_norm(seed, n, p):
    a = complex_gaussian(make_rng(seed), (n, n))

    b = schatten_dual(a, p)

    pairing = trace(b @ a)
    assert pairing.real == pytest.approx(schatten_norm(a, p), rel=1e-9)
    assert abs(pairing.imag) < 1e-9
    assert schatten_norm(b, conjugate_exponent(p)) == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, math.inf])
def test_schatten_dual_of_zero_has_unit_norm(p):
    b = schatten_dual(np.zeros((3, 3), dtype=np.complex128), p)

    assert schatten_norm(b, conjugate_exponent(p)) == pytest.approx(1.0)


@given(seed=seeds, n=dims, p=exponents)
def test_schatten_norm_is_unitarily_invariant(seed, n, p):
    rng = make_rng(seed)
    a = complex_gaussian(rng, (n, n))
    u, v = random_unitary(n, rng), random_unitary(n, rng)

    assert schatten_norm(u @ a @ v, p) == pytest.approx(schatten_norm(a, p), rel=1e-10)


@given(seed=seeds, n=dims, p=exponents)
def test_holder_inequality(seed, n, p):
    rng = make_rng(seed)
    a, b = complex_gaussian(rng, (2, n, n))

    bound = schatten_norm(a, p) * schatten_norm(b, conjugate_exponent(p))

    assert abs(trace(a @ b)) <= bound * (1 + 1e-12)


def test_vec_stacks_columns():
    x = np.array([[1, 2], [3, 4]], dtype=np.complex128)

    np.testing.assert_array_equal(vec(x), [1, 3, 2, 4])
    np.testing.assert_array_equal(unvec(vec(x), 2), x)


def test_vec_works_on_stacks(rng):
    stack = complex_gaussian(rng, (5, 3, 3))

    flat = vec(stack)

    assert flat.shape == (5, 9)
    np.testing.assert_array_equal(flat[2], vec(stack[2]))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_gell_mann_basis_is_orthonormal_and_traceless(n):
    basis = np.stack(gell_mann_basis(n))

    gram = np.einsum("aij,aij->a", basis.conj(), basis)
    overlaps = np.einsum("aij,bij->ab", basis.conj(), basis)
    assert len(basis) == n * n - 1
    np.testing.assert_allclose(gram, 1.0)
    np.testing.assert_allclose(overlaps, np.eye(n * n - 1), atol=1e-12)
    np.testing.assert_allclose(np.trace(basis, axis1=1, axis2=2), 0, atol=1e-12)


def test_random_density_is_valid(rng):
    rho = random_density(4, rng, rank=2)

    check_density(rho)
    assert np.linalg.matrix_rank(rho, tol=1e-10) == 2

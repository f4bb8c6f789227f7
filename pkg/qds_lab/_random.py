"""Seeded generators for matrices used by tests, sweeps and the self-test.

All randomness flows from a single integer seed; independent streams are
derived with :class:`numpy.random.SeedSequence` so results do not depend on
the order in which they are consumed.
"""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from qds_lab._matcore import ComplexMatrix, dagger


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.default_rng(seed)


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seeds, one per trial or restart."""
    return np.random.SeedSequence(seed).spawn(count)


def complex_gaussian(
    rng: np.random.Generator,
    shape: tuple[int, ...],
) -> npt.NDArray[np.complex128]:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(n: int, rng: np.random.Generator) -> ComplexMatrix:
    """Haar unitary: QR of a complex Gaussian matrix with phase correction."""
    q, r = np.linalg.qr(complex_gaussian(rng, (n, n)))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_hermitian(n: int, rng: np.random.Generator) -> ComplexMatrix:
    g = complex_gaussian(rng, (n, n))
    return (g + dagger(g)) / 2


def random_pure_states(
    n: int,
    count: int,
    rng: np.random.Generator,
) -> npt.NDArray[np.complex128]:
    """Stack of ``count`` unit vectors of length ``n``."""
    psi = complex_gaussian(rng, (count, n))
    return psi / np.linalg.norm(psi, axis=-1, keepdims=True)


def random_pure_state(n: int, rng: np.random.Generator) -> ComplexMatrix:
    psi = random_pure_states(n, 1, rng)[0]
    return np.outer(psi, psi.conj())


def random_density(
    n: int,
    rng: np.random.Generator,
    rank: int | None = None,
) -> ComplexMatrix:
    """Density matrix g g^H / tr with g of shape (n, rank)."""
    g = complex_gaussian(rng, (n, rank or n))
    rho = g @ dagger(g)
    rho = (rho + dagger(rho)) / 2
    return rho / np.trace(rho).real


def random_probability(count: int, rng: np.random.Generator) -> npt.NDArray[np.float64]:
    return rng.dirichlet(np.ones(count))


def random_permutation_matrix(
    n: int,
    rng: np.random.Generator,
) -> npt.NDArray[np.float64]:
    return np.eye(n)[rng.permutation(n)]


def random_doubly_stochastic(
    n: int,
    rng: np.random.Generator,
    terms: int | None = None,
) -> npt.NDArray[np.float64]:
    """Convex combination of ``terms`` random permutation matrices."""
    terms = terms or n
    weights = random_probability(terms, rng)
    return sum(
        (w * random_permutation_matrix(n, rng) for w in weights),
        start=np.zeros((n, n)),
    )

"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy`` arrays of ``complex128``; the helpers in this
module validate the invariants of the richer types (Hermitian, density)
instead of wrapping the arrays in classes.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from qds_lab._config import DEFAULT_TOLERANCES, Tolerances
from qds_lab._exceptions import (
    BadExponentError,
    DimensionMismatchError,
    DomainError,
    InvalidDensityError,
    MalformedInputError,
    NonHermitianInputError,
    PropertyViolation,
)

logger = logging.getLogger("qds_lab")

ComplexMatrix = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

MAX_DIM = 256


def as_matrix(data: npt.ArrayLike, *, name: str = "matrix") -> ComplexMatrix:
    """Coerce to a finite square complex matrix."""
    a = np.asarray(data, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        msg = f"{name} must be a non-empty square matrix, got shape {a.shape}"
        raise MalformedInputError(msg)
    if a.shape[0] > MAX_DIM:
        msg = f"{name} has dim {a.shape[0]} > {MAX_DIM}"
        raise MalformedInputError(msg)
    if not np.all(np.isfinite(a)):
        msg = f"{name} has non-finite entries"
        raise MalformedInputError(msg)
    return a


def identity(n: int) -> ComplexMatrix:
    return np.eye(n, dtype=np.complex128)


def matrix_unit(n: int, i: int, j: int) -> ComplexMatrix:
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def dagger(a: ComplexMatrix) -> ComplexMatrix:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_part(a: ComplexMatrix) -> ComplexMatrix:
    return (a + dagger(a)) / 2


def check_same_dim(a: ComplexMatrix, b: ComplexMatrix) -> None:
    if a.shape[-1] != b.shape[-1]:
        msg = f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        raise DimensionMismatchError(msg)


def check_hermitian(
    a: ComplexMatrix,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """Return the exactly Hermitian part of ``a`` after checking hermitian_tol."""
    deviation = operator_norm(a - dagger(a))
    if deviation > tolerances.hermitian_tol:
        msg = f"matrix is not Hermitian: ||a - a^H|| = {deviation:.3e}"
        raise NonHermitianInputError(msg)
    return hermitian_part(a)


def check_density(
    a: ComplexMatrix,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    h = check_hermitian(as_matrix(a, name="density matrix"), tolerances=tolerances)
    min_eig = float(np.linalg.eigvalsh(h)[0])
    if min_eig < -tolerances.psd_tol:
        msg = f"density matrix has negative eigenvalue {min_eig:.3e}"
        raise InvalidDensityError(msg)
    tr = trace(h).real
    if abs(tr - 1.0) > tolerances.trace_tol:
        msg = f"density matrix has trace {tr!r}"
        raise InvalidDensityError(msg)
    return h


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in non-increasing order with orthonormal eigenvector columns."""

    eigenvalues: RealVector
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ dagger(v)


def eig_hermitian(
    a: ComplexMatrix,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Spectrum:
    h = check_hermitian(a, tolerances=tolerances)
    values, vectors = np.linalg.eigh(h)
    # eigh returns ascending order
    spectrum = Spectrum(
        eigenvalues=np.ascontiguousarray(values[::-1]),
        eigenvectors=np.ascontiguousarray(vectors[:, ::-1]),
    )
    residual = operator_norm(spectrum.reconstruct() - h)
    if residual > tolerances.recon_tol * max(1.0, operator_norm(h)):
        msg = f"eigendecomposition residual {residual:.3e} exceeds recon_tol"
        raise PropertyViolation(msg)
    return spectrum


def spectral_apply(
    a: ComplexMatrix,
    f: Callable[[RealVector], RealVector],
    *,
    domain: tuple[float, float] = (-math.inf, math.inf),
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """Apply a real function to a Hermitian matrix through its spectrum."""
    spectrum = eig_hermitian(a, tolerances=tolerances)
    lo, hi = domain
    lam = spectrum.eigenvalues
    if np.any(lam < lo) or np.any(lam > hi):
        msg = f"eigenvalues {lam.tolist()} outside domain [{lo}, {hi}]"
        raise DomainError(msg)
    v = spectrum.eigenvectors
    values = np.asarray(f(lam), dtype=np.float64)
    return hermitian_part((v * values) @ dagger(v))


def check_exponent(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        msg = f"Schatten exponent must lie in [1, inf], got {p!r}"
        raise BadExponentError(msg)
    return p


def conjugate_exponent(p: float) -> float:
    p = check_exponent(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def singular_values(a: ComplexMatrix) -> RealVector:
    return np.linalg.svd(a, compute_uv=False)


def norm_of_singular_values(s: RealVector, p: float) -> RealVector:
    """Schatten norm from singular values along the last axis."""
    if math.isinf(p):
        return np.max(s, axis=-1)
    if p == 1:
        return np.sum(s, axis=-1)
    return np.sum(s**p, axis=-1) ** (1 / p)


def schatten_norm(a: ComplexMatrix, p: float) -> float:
    p = check_exponent(p)
    return float(norm_of_singular_values(singular_values(a), p))


def operator_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a, ord=2))


def schatten_dual(a: ComplexMatrix, p: float) -> ComplexMatrix:
    """Unit q-norm ``b`` with ``trace(b @ a) == schatten_norm(a, p)``.

    Works on stacks of matrices. For ``a == 0`` an arbitrary unit-norm
    maximizer is returned.
    """
    p = check_exponent(p)
    u, s, vh = np.linalg.svd(a)
    top = np.zeros_like(s)
    top[..., 0] = 1.0
    if math.isinf(p):
        weights = top
    elif p == 1:
        weights = np.ones_like(s)
    else:
        scale = np.asarray(norm_of_singular_values(s, p))[..., None]
        weights = np.where(
            scale > 0,
            (s / np.where(scale > 0, scale, 1.0)) ** (p - 1),
            top,
        )
    return (dagger(vh) * weights[..., None, :]) @ dagger(u)


def trace(a: ComplexMatrix) -> complex:
    return complex(np.trace(a))


def vec(x: ComplexMatrix) -> npt.NDArray[np.complex128]:
    """Column-stacking vectorization; works on stacks."""
    n = x.shape[-1]
    return np.swapaxes(x, -1, -2).reshape(*x.shape[:-2], n * n)


def unvec(v: npt.NDArray[np.complex128], n: int) -> ComplexMatrix:
    return np.swapaxes(v.reshape(*v.shape[:-1], n, n), -1, -2)


def gell_mann_basis(n: int) -> list[ComplexMatrix]:
    """Orthonormal (Hilbert-Schmidt) basis of traceless n x n matrices.

    Order: symmetric pairs, antisymmetric pairs, then diagonal elements.
    """
    basis: list[ComplexMatrix] = []
    for j in range(n):
        for k in range(j + 1, n):
            g = matrix_unit(n, j, k) + matrix_unit(n, k, j)
            basis.append(g / math.sqrt(2))
    for j in range(n):
        for k in range(j + 1, n):
            g = -1j * matrix_unit(n, j, k) + 1j * matrix_unit(n, k, j)
            basis.append(g / math.sqrt(2))
    for m in range(1, n):
        diag = np.zeros(n, dtype=np.complex128)
        diag[:m] = 1.0
        diag[m] = -m
        basis.append(np.diag(diag) / math.sqrt(m * (m + 1)))
    return basis

"""Majorization of density matrices and the mixed-unitary channel realizing it.

``rho`` is majorized by ``sigma`` when every partial sum of the
non-increasing spectrum of ``rho`` is bounded by the matching partial sum for
``sigma`` (the totals are both 1). The constructive direction goes through
a doubly stochastic matrix ``D`` with ``D lam(sigma) = lam(rho)``, its
decomposition into permutations and the channel
``x -> sum_k w_k W P_k V^H x V P_k^T W^H``.

The convex-function check only uses hinge functions ``max(t - s, 0)`` and
powers. On spectra the hinge family is already sufficient: the sum of
``max(t - s, 0)`` over the eigenvalues decides majorization once ``s`` runs
over the eigenvalues of both matrices.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from qds_lab._channels import Channel, certify_qds
from qds_lab._config import DEFAULT_TOLERANCES, Tolerances
from qds_lab._exceptions import (
    BadParameterError,
    DecompositionStalledError,
    DimensionMismatchError,
    MalformedInputError,
    NotMajorizedError,
    PropertyViolation,
)
from qds_lab._matcore import (
    ComplexMatrix,
    RealVector,
    as_matrix,
    check_density,
    dagger,
    eig_hermitian,
    identity,
    operator_norm,
    schatten_norm,
)

logger = logging.getLogger("qds_lab")

RealMatrix = npt.NDArray[np.float64]

DEFAULT_POWERS = (1.5, 2.0, 3.0, 5.0)


@dataclass(frozen=True, eq=False)
class DoublyStochasticMatrix:
    entries: RealMatrix

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_array(
        cls,
        data: npt.ArrayLike,
        *,
        tolerances: Tolerances = DEFAULT_TOLERANCES,
    ) -> DoublyStochasticMatrix:
        d = np.asarray(data, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            msg = f"doubly stochastic matrix must be square, got shape {d.shape}"
            raise MalformedInputError(msg)
        tol = tolerances.ds_tol
        if np.any(d < -tol) or np.any(d > 1 + tol):
            msg = "doubly stochastic entries must lie in [0, 1]"
            raise BadParameterError(msg)
        rows = np.abs(d.sum(axis=1) - 1).max()
        cols = np.abs(d.sum(axis=0) - 1).max()
        if max(rows, cols) > tol:
            msg = f"row/column sums deviate from 1 by {max(rows, cols):.3e}"
            raise BadParameterError(msg)
        return cls(entries=d)


@dataclass(frozen=True, eq=False)
class BirkhoffDecomposition:
    """``D = sum_k weights[k] * P_k`` with ``P_k[i, permutations[k][i]] = 1``."""

    weights: RealVector
    permutations: list[tuple[int, ...]]

    def permutation_matrices(self) -> RealMatrix:
        n = len(self.permutations[0])
        mats = np.zeros((len(self.permutations), n, n))
        for k, perm in enumerate(self.permutations):
            mats[k, np.arange(n), perm] = 1.0
        return mats

    def reconstruct(self) -> RealMatrix:
        return np.einsum("k,kij->ij", self.weights, self.permutation_matrices())


@dataclass(frozen=True, eq=False)
class MajorizationCertificate:
    holds: bool
    partial_sum_slack: RealVector
    eigenvalues_rho: RealVector
    eigenvalues_sigma: RealVector
    basis_unitaries: tuple[ComplexMatrix, ComplexMatrix]
    ds_matrix: DoublyStochasticMatrix | None = None
    decomposition: BirkhoffDecomposition | None = None
    realizing_channel: Channel | None = None
    realize_residual: float | None = None
    degenerate_basis: bool = False


@dataclass(frozen=True)
class ConvexCheck:
    kind: str
    parameter: float
    trace_rho: float
    trace_sigma: float
    violated: bool


@dataclass(frozen=True)
class ConvexFunctionReport:
    majorized: bool
    checks: list[ConvexCheck] = field(default_factory=list)

    @property
    def violations(self) -> list[ConvexCheck]:
        return [c for c in self.checks if c.violated]


def majorization_slack(lam_rho: RealVector, lam_sigma: RealVector) -> RealVector:
    """Partial sums of ``lam_sigma`` minus those of ``lam_rho``."""
    return np.cumsum(lam_sigma) - np.cumsum(lam_rho)


def _spectra(
    rho: npt.ArrayLike,
    sigma: npt.ArrayLike,
    tolerances: Tolerances,
) -> tuple[ComplexMatrix, ComplexMatrix]:
    r = as_matrix(rho, name="rho")
    s = as_matrix(sigma, name="sigma")
    if r.shape != s.shape:
        msg = f"rho has dim {r.shape[0]} but sigma has dim {s.shape[0]}"
        raise DimensionMismatchError(msg)
    return (
        check_density(r, tolerances=tolerances),
        check_density(s, tolerances=tolerances),
    )


def check_majorization(
    rho: npt.ArrayLike,
    sigma: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> MajorizationCertificate:
    r, s = _spectra(rho, sigma, tolerances)
    spec_r = eig_hermitian(r, tolerances=tolerances)
    spec_s = eig_hermitian(s, tolerances=tolerances)
    slack = majorization_slack(spec_r.eigenvalues, spec_s.eigenvalues)
    tol = tolerances.maj_tol
    holds = bool(np.all(slack >= -tol)) and abs(float(slack[-1])) <= tol
    return MajorizationCertificate(
        holds=holds,
        partial_sum_slack=slack,
        eigenvalues_rho=spec_r.eigenvalues,
        eigenvalues_sigma=spec_s.eigenvalues,
        basis_unitaries=(spec_s.eigenvectors, spec_r.eigenvectors),
    )


def _check_spectrum(lam: RealVector, name: str, tolerances: Tolerances) -> None:
    if np.any(np.diff(lam) > tolerances.maj_tol):
        msg = f"{name} must be sorted non-increasing"
        raise BadParameterError(msg)
    if abs(lam.sum() - 1) > tolerances.maj_tol:
        msg = f"{name} must sum to 1, got {lam.sum()!r}"
        raise BadParameterError(msg)


def build_ds_matrix(
    lam_rho: npt.ArrayLike,
    lam_sigma: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> DoublyStochasticMatrix:
    """Compose at most ``n - 1`` T-transforms taking ``lam_sigma`` to ``lam_rho``.

    Each step picks the first index ``j`` where the vectors differ and the
    first ``k > j`` with ``y_k < x_k`` and moves ``min(y_j - x_j, x_k - y_k)``
    from ``j`` to ``k``. One coordinate is settled per step.
    """
    x = np.asarray(lam_rho, dtype=np.float64)
    y = np.array(lam_sigma, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        msg = f"spectra have shapes {x.shape} and {y.shape}"
        raise DimensionMismatchError(msg)
    _check_spectrum(x, "lam_rho", tolerances)
    _check_spectrum(y, "lam_sigma", tolerances)
    slack = majorization_slack(x, y)
    if np.any(slack < -tolerances.maj_tol):
        msg = f"lam_rho is not majorized by lam_sigma (slack {slack.tolist()})"
        raise NotMajorizedError(msg)

    n = len(x)
    sigma = y.copy()
    d = np.eye(n)
    eq_tol = 1e-14
    for step in range(n - 1):
        diff = y - x
        unsettled = np.flatnonzero(np.abs(diff) > eq_tol)
        if len(unsettled) == 0:
            break
        j = int(unsettled[0])
        below = np.flatnonzero(diff[j + 1 :] < -eq_tol)
        if diff[j] < 0 or len(below) == 0:
            # only rounding noise left
            break
        k = j + 1 + int(below[0])
        delta = min(diff[j], -diff[k])
        s = delta / (y[j] - y[k])
        t = np.eye(n)
        t[[j, k], [j, k]] = 1 - s
        t[[j, k], [k, j]] = s
        d = t @ d
        y = t @ y
        if delta == diff[j]:
            y[j] = x[j]
        else:
            y[k] = x[k]
        logger.debug("T-transform %d: j=%d k=%d s=%.6g", step, j, k, s)
    residual = float(np.max(np.abs(d @ sigma - x)))
    if residual > tolerances.ds_tol + tolerances.maj_tol:
        msg = f"D lam_sigma misses lam_rho by {residual:.3e}"
        raise PropertyViolation(msg)
    return DoublyStochasticMatrix(entries=d)


def birkhoff_decompose(
    d: DoublyStochasticMatrix | npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> BirkhoffDecomposition:
    """Greedy decomposition into permutation matrices.

    Each round finds a perfect matching on the support ``{entries > ds_tol}``
    and subtracts the smallest matched entry times that permutation.
    """
    entries = d.entries if isinstance(d, DoublyStochasticMatrix) else d
    remaining = np.array(entries, dtype=np.float64)
    if remaining.ndim != 2 or remaining.shape[0] != remaining.shape[1]:
        msg = f"matrix must be square, got shape {remaining.shape}"
        raise MalformedInputError(msg)
    n = remaining.shape[0]
    tol = tolerances.ds_tol
    remaining[remaining <= tol] = 0.0
    rows = np.arange(n)
    weights: list[float] = []
    permutations: list[tuple[int, ...]] = []
    while np.any(remaining > 0):
        if len(weights) > n * n:
            msg = "Birkhoff decomposition did not terminate"
            raise PropertyViolation(msg)
        support = csr_matrix((remaining > 0).astype(np.int8))
        match = maximum_bipartite_matching(support, perm_type="column")
        if np.any(match < 0):
            mass = remaining.sum(axis=1).max()
            if mass <= tol:
                break
            msg = f"no perfect matching with residual row mass {mass:.3e}"
            raise DecompositionStalledError(msg)
        weight = float(remaining[rows, match].min())
        remaining[rows, match] -= weight
        remaining[remaining <= tol] = 0.0
        weights.append(weight)
        permutations.append(tuple(int(c) for c in match))
        logger.debug("Birkhoff term %d: weight %.6g", len(weights), weight)
    if not weights:
        msg = "matrix has no entries above ds_tol"
        raise DecompositionStalledError(msg)
    w = np.asarray(weights)
    return BirkhoffDecomposition(weights=w / w.sum(), permutations=permutations)


def _check_basis(
    basis: npt.ArrayLike,
    matrix: ComplexMatrix,
    name: str,
    tolerances: Tolerances,
) -> tuple[RealVector, ComplexMatrix]:
    """Eigenvalues read off a caller-supplied eigenbasis."""
    v = as_matrix(basis, name=name)
    if v.shape != matrix.shape:
        msg = f"{name} has shape {v.shape}, expected {matrix.shape}"
        raise DimensionMismatchError(msg)
    if operator_norm(dagger(v) @ v - identity(v.shape[0])) > tolerances.orth_tol:
        msg = f"{name} is not unitary"
        raise BadParameterError(msg)
    diag = dagger(v) @ matrix @ v
    lam = np.real(np.diagonal(diag)).copy()
    off = diag - np.diag(np.diagonal(diag))
    if operator_norm(off) > tolerances.recon_tol or np.any(
        np.diff(lam) > tolerances.maj_tol,
    ):
        msg = f"{name} does not diagonalize the matrix in non-increasing order"
        raise BadParameterError(msg)
    return lam, v


def _degenerate(lam: RealVector, tolerances: Tolerances) -> bool:
    return bool(np.any(np.abs(np.diff(lam)) <= tolerances.maj_tol))


def realize_channel(
    rho: npt.ArrayLike,
    sigma: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    sigma_basis: npt.ArrayLike | None = None,
    rho_basis: npt.ArrayLike | None = None,
) -> MajorizationCertificate:
    """Mixed-unitary QDS channel with ``Phi(sigma) = rho``."""
    r, s = _spectra(rho, sigma, tolerances)
    partial = check_majorization(r, s, tolerances=tolerances)
    if not partial.holds:
        msg = (
            "rho is not majorized by sigma "
            f"(slack {partial.partial_sum_slack.tolist()})"
        )
        raise NotMajorizedError(msg)
    v, w = partial.basis_unitaries
    lam_s, lam_r = partial.eigenvalues_sigma, partial.eigenvalues_rho
    if sigma_basis is not None:
        lam_s, v = _check_basis(sigma_basis, s, "sigma_basis", tolerances)
    if rho_basis is not None:
        lam_r, w = _check_basis(rho_basis, r, "rho_basis", tolerances)
    degenerate = _degenerate(lam_s, tolerances) or _degenerate(lam_r, tolerances)
    if degenerate:
        logger.warning(
            "Degenerate spectrum: eigenbases are not unique, "
            "the realizing channel depends on the chosen basis",
        )

    ds = build_ds_matrix(lam_r, lam_s, tolerances=tolerances)
    decomposition = birkhoff_decompose(ds, tolerances=tolerances)
    perms = decomposition.permutation_matrices().astype(np.complex128)
    ops = np.sqrt(decomposition.weights)[:, None, None] * (w @ perms @ dagger(v))
    channel = Channel.from_kraus(
        ops,
        name="majorization",
        params={"terms": len(decomposition.weights)},
    )
    residual = schatten_norm(channel.apply(s) - r, 1)
    if residual > tolerances.realize_tol:
        msg = f"realizing channel misses rho by {residual:.3e} in trace norm"
        raise PropertyViolation(msg)
    if not certify_qds(channel, tolerances=tolerances).is_qds:
        msg = "realizing channel failed QDS certification"
        raise PropertyViolation(msg)
    return MajorizationCertificate(
        holds=True,
        partial_sum_slack=partial.partial_sum_slack,
        eigenvalues_rho=lam_r,
        eigenvalues_sigma=lam_s,
        basis_unitaries=(v, w),
        ds_matrix=ds,
        decomposition=decomposition,
        realizing_channel=channel,
        realize_residual=residual,
        degenerate_basis=degenerate,
    )


def convex_function_test(
    rho: npt.ArrayLike,
    sigma: npt.ArrayLike,
    *,
    shifts: Sequence[float] | None = None,
    powers: Sequence[float] = DEFAULT_POWERS,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ConvexFunctionReport:
    """Compare ``trace f(rho)`` with ``trace f(sigma)`` for hinge and power ``f``.

    By default the hinge shifts are 0 and the eigenvalues of both matrices.
    """
    certificate = check_majorization(rho, sigma, tolerances=tolerances)
    lam_r = np.clip(certificate.eigenvalues_rho, 0.0, None)
    lam_s = np.clip(certificate.eigenvalues_sigma, 0.0, None)
    if shifts is None:
        shifts = sorted({0.0, *lam_r.tolist(), *lam_s.tolist()})
    checks = []
    for s in shifts:
        tr_r = float(np.maximum(lam_r - s, 0).sum())
        tr_s = float(np.maximum(lam_s - s, 0).sum())
        checks.append(
            ConvexCheck(
                kind="hinge",
                parameter=float(s),
                trace_rho=tr_r,
                trace_sigma=tr_s,
                violated=tr_r > tr_s + tolerances.maj_tol,
            ),
        )
    for p in powers:
        tr_r = float((lam_r**p).sum())
        tr_s = float((lam_s**p).sum())
        checks.append(
            ConvexCheck(
                kind="power",
                parameter=float(p),
                trace_rho=tr_r,
                trace_sigma=tr_s,
                violated=tr_r > tr_s + tolerances.maj_tol,
            ),
        )
    return ConvexFunctionReport(majorized=certificate.holds, checks=checks)

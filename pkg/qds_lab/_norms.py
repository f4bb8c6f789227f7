"""Induced p->p Schatten norms of channels.

Only p = 2 is computed exactly (largest singular value of the
superoperator). For other exponents the result is a bracket: a lower bound
from random-restart projected ascent over the unit p-sphere and an upper
bound from norm one (QDS maps), Russo-Dye (completely positive
maps), Riesz-Thorin interpolation or a dimension-dependent comparison with
the 2-norm.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt
from scipy.optimize import brentq, minimize_scalar
from scipy.sparse.linalg import LinearOperator, svds

from qds_lab._channels import Channel, certify_qds, choi_min_eigenvalue
from qds_lab._config import (
    DEFAULT_ASCENT,
    DEFAULT_TOLERANCES,
    AscentSettings,
    Tolerances,
)
from qds_lab._exceptions import (
    NotQdsError,
    NotTracePreservingError,
    PropertyViolation,
)
from qds_lab._matcore import (
    ComplexMatrix,
    check_exponent,
    dagger,
    gell_mann_basis,
    hermitian_part,
    identity,
    norm_of_singular_values,
    operator_norm,
    schatten_dual,
    singular_values,
    unvec,
    vec,
)
from qds_lab._random import complex_gaussian, make_rng, spawn_seeds

logger = logging.getLogger("qds_lab")

# superoperators above this dim are handled matrix-free
DENSE_DIM_LIMIT = 16

MatrixMap = Callable[[ComplexMatrix], ComplexMatrix]


class NormMethod(str, Enum):
    EXACT_P2 = "exact_p2"
    ASCENT = "ascent"
    INTERPOLATION = "interpolation"


@dataclass(frozen=True, eq=False)
class InducedNormResult:
    p: float
    lower_bound: float
    upper_bound: float
    witness: ComplexMatrix
    method: NormMethod


@dataclass(frozen=True)
class ContractionPair:
    """Diagonal projection ``e`` (as a 0/1 mask) with ``Phi(e) <= (1-d)e + d(1-e)``."""

    projection: tuple[int, ...]
    delta: float
    ratio: float


@dataclass(frozen=True)
class ContractionProbe:
    p: float
    scanned: int
    exhaustive: bool
    pairs: list[ContractionPair] = field(default_factory=list)


def _p_norms(stack: ComplexMatrix, p: float) -> npt.NDArray[np.float64]:
    return np.asarray(norm_of_singular_values(singular_values(stack), p))


def _normalize(stack: ComplexMatrix, p: float) -> ComplexMatrix:
    norms = _p_norms(stack, p)
    return stack / np.where(norms > 0, norms, 1.0)[..., None, None]


def projected_ascent(
    forward: MatrixMap,
    backward: MatrixMap,
    seeds: ComplexMatrix,
    p: float,
    *,
    settings: AscentSettings = DEFAULT_ASCENT,
    project: MatrixMap | None = None,
) -> tuple[float, ComplexMatrix]:
    """Maximize ``||forward(x)||_p`` over ``||x||_p = 1`` from a stack of seeds.

    ``backward`` must be the Hilbert-Schmidt adjoint of ``forward``. All
    restarts advance together; each keeps its own step, grown on success and
    halved on failure.
    """
    x = seeds if project is None else project(seeds)
    x = _normalize(x, p)
    values = _p_norms(forward(x), p)
    steps = np.full(len(x), settings.step)
    for _ in range(settings.iterations):
        y = forward(x)
        grad = backward(dagger(schatten_dual(y, p)))
        if project is not None:
            grad = project(grad)
        grad = _normalize(grad, p)
        candidate = _normalize(x + steps[:, None, None] * grad, p)
        new_values = _p_norms(forward(candidate), p)
        improved = new_values > values + 1e-12
        x = np.where(improved[:, None, None], candidate, x)
        values = np.where(improved, new_values, values)
        steps = np.where(improved, np.minimum(steps * 1.5, 1.0), steps / 2)
        if np.all(steps < 1e-12):
            break
    best = int(np.argmax(values))
    logger.debug("ascent p=%s: best %.12f from %d restarts", p, values[best], len(x))
    return float(values[best]), x[best]


def _random_seeds(n: int, settings: AscentSettings) -> ComplexMatrix:
    children = spawn_seeds(settings.seed, settings.restarts)
    return np.stack([complex_gaussian(make_rng(s), (n, n)) for s in children])


def _diagonal_masks(n: int, limit: int = 8) -> npt.NDArray[np.float64]:
    """All 0/1 diagonals for small n, otherwise singletons, prefixes and complements."""
    if n <= limit:
        return np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    eye = np.eye(n)
    prefixes = np.tril(np.ones((n, n)))
    return np.concatenate([eye, 1 - eye, prefixes, 1 - prefixes])


def _seeds(
    channel: Channel,
    p: float,
    settings: AscentSettings,
    completely_positive: bool,
) -> ComplexMatrix:
    n = channel.dim
    seeds = [identity(n)[None]]
    if p < 2:
        units = np.zeros((n, n, n), dtype=np.complex128)
        units[np.arange(n), np.arange(n), np.arange(n)] = 1.0
        seeds.append(units)
        if completely_positive:
            # rank-one maximizer of trace(Phi(x)) over states
            load = hermitian_part(channel.apply_hs_adjoint(identity(n)))
            top = np.linalg.eigh(load)[1][:, -1]
            seeds.append(np.outer(top, top.conj())[None])
    if p > 2:
        masks = _diagonal_masks(n)
        flips = np.stack([np.diag(2 * m - 1) for m in masks])
        seeds.append(flips.astype(np.complex128))
    seeds.append(_random_seeds(n, settings))
    return np.concatenate(seeds)


def _top_singular_dense(m: ComplexMatrix) -> tuple[float, npt.NDArray[np.complex128]]:
    _, s, vh = np.linalg.svd(m)
    return float(s[0]), vh[0].conj()


def superop_operator(
    channel: Channel,
    project: MatrixMap | None = None,
) -> LinearOperator:
    """Matrix-free ``vec(x) -> vec(Phi(P x))`` for an orthogonal projection P."""
    n = channel.dim

    def restrict(x: ComplexMatrix) -> ComplexMatrix:
        return x if project is None else project(x)

    def matvec(c: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        return vec(channel.apply(restrict(unvec(np.ravel(c), n))))

    def rmatvec(y: npt.NDArray[np.complex128]) -> npt.NDArray[np.complex128]:
        return vec(restrict(channel.apply_hs_adjoint(unvec(np.ravel(y), n))))

    return LinearOperator(
        (n * n, n * n),
        matvec=matvec,
        rmatvec=rmatvec,
        dtype=np.complex128,
    )


def top_singular(
    channel: Channel,
    seed: int = 0,
    project: MatrixMap | None = None,
) -> tuple[float, ComplexMatrix]:
    """Largest singular value of ``Phi o P`` and a unit 2-norm right vector."""
    n = channel.dim
    if n <= DENSE_DIM_LIMIT:
        m = channel.superop
        if project is not None:
            units = unvec(np.eye(n * n, dtype=np.complex128), n)
            m = m @ vec(project(units)).T
        sigma, v = _top_singular_dense(m)
    else:
        v0 = complex_gaussian(make_rng(seed), (n * n,))
        _, s, vh = svds(superop_operator(channel, project), k=1, v0=v0)
        sigma, v = float(s[0]), vh[0].conj()
    witness = unvec(v, n)
    if project is not None:
        witness = project(witness)
        witness = witness / max(np.linalg.norm(witness), np.finfo(float).tiny)
    return sigma, witness


def _gell_mann_top_singular(channel: Channel) -> tuple[float, ComplexMatrix]:
    """Top singular pair of the superoperator compressed to the traceless basis."""
    basis = gell_mann_basis(channel.dim)
    columns = np.stack([vec(g) for g in basis], axis=1)
    sigma, v = _top_singular_dense(channel.superop @ columns)
    return sigma, unvec(columns @ v, channel.dim)


def _comparison_factor(n: int, p: float) -> float:
    """``||Phi||_p <= factor * ||Phi||_2`` from Schatten norm comparisons."""
    inv = 0.0 if math.isinf(p) else 1 / p
    return float(n ** abs(inv - 0.5))


def _endpoint_upper(
    channel: Channel,
    p: float,
    sigma: float,
    completely_positive: bool,
) -> float:
    n = channel.dim
    generic = sigma * _comparison_factor(n, p)
    if not completely_positive:
        return generic
    # Russo-Dye: a positive map attains its operator norm at the identity
    one = identity(n)
    if math.isinf(p):
        return min(generic, operator_norm(channel.apply(one)))
    return min(generic, operator_norm(channel.apply_hs_adjoint(one)))


def induced_norm(
    channel: Channel,
    p: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> InducedNormResult:
    """Bracket ``sup ||Phi(x)||_p`` over ``||x||_p = 1``."""
    p = check_exponent(p)
    sigma, top = top_singular(channel, settings.seed)
    if p == 2:
        return InducedNormResult(
            p=p,
            lower_bound=sigma,
            upper_bound=sigma,
            witness=top,
            method=NormMethod.EXACT_P2,
        )

    report = certify_qds(channel, tolerances=tolerances)
    completely_positive = choi_min_eigenvalue(channel) >= -tolerances.psd_tol
    endpoint = p == 1 or math.isinf(p)
    if report.is_qds:
        upper = 1.0
    elif endpoint:
        upper = _endpoint_upper(channel, p, sigma, completely_positive)
    else:
        m1 = _endpoint_upper(channel, 1.0, sigma, completely_positive)
        m_inf = _endpoint_upper(channel, math.inf, sigma, completely_positive)
        upper = min(
            m1 ** (1 / p) * m_inf ** (1 - 1 / p),
            sigma * _comparison_factor(channel.dim, p),
        )

    seeds = _seeds(channel, p, settings, completely_positive)
    lower, witness = projected_ascent(
        channel.apply,
        channel.apply_hs_adjoint,
        seeds,
        p,
        settings=settings,
    )
    return InducedNormResult(
        p=p,
        lower_bound=lower,
        upper_bound=upper,
        witness=witness,
        method=NormMethod.ASCENT if endpoint else NormMethod.INTERPOLATION,
    )


def _traceless_projection(x: ComplexMatrix) -> ComplexMatrix:
    n = x.shape[-1]
    tr = np.trace(x, axis1=-2, axis2=-1)
    return x - (tr / n)[..., None, None] * identity(n)


def traceless_norm(
    channel: Channel,
    p: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> InducedNormResult:
    """Induced norm of the restriction to ``{x : trace(x) = 0}``."""
    p = check_exponent(p)
    report = certify_qds(channel, tolerances=tolerances)
    if report.tp_residual > tolerances.tp_tol:
        msg = f"channel is not trace-preserving (residual {report.tp_residual:.3e})"
        raise NotTracePreservingError(msg)
    n = channel.dim
    if n == 1:
        return InducedNormResult(
            p=p,
            lower_bound=0.0,
            upper_bound=0.0,
            witness=np.zeros((1, 1), dtype=np.complex128),
            method=NormMethod.EXACT_P2,
        )
    if n <= DENSE_DIM_LIMIT:
        sigma, top = _gell_mann_top_singular(channel)
    else:
        sigma, top = top_singular(channel, settings.seed, _traceless_projection)
    if p == 2:
        return InducedNormResult(
            p=p,
            lower_bound=sigma,
            upper_bound=sigma,
            witness=top,
            method=NormMethod.EXACT_P2,
        )

    upper = sigma * _comparison_factor(n, p)
    if report.is_qds:
        # the restriction cannot exceed the full norm, which is 1
        upper = min(upper, 1.0)
    # diagonal traceless elements plus the 2-norm maximizer
    structured = np.stack([*gell_mann_basis(n)[-(n - 1) :], top])
    seeds = np.concatenate([structured, _random_seeds(n, settings)])
    lower, witness = projected_ascent(
        channel.apply,
        channel.apply_hs_adjoint,
        seeds,
        p,
        settings=settings,
        project=_traceless_projection,
    )
    if lower > upper + tolerances.conv_tol:
        msg = (
            f"traceless p={p} norm: ascent value {lower:.12f} exceeds the "
            f"upper bound {upper:.12f}"
        )
        raise PropertyViolation(msg)
    endpoint = p == 1 or math.isinf(p)
    return InducedNormResult(
        p=p,
        lower_bound=min(lower, upper),
        upper_bound=upper,
        witness=witness,
        method=NormMethod.ASCENT if endpoint else NormMethod.INTERPOLATION,
    )


def interpolation_sweep(
    channel: Channel,
    p_grid: Sequence[float],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> list[InducedNormResult]:
    report = certify_qds(channel, tolerances=tolerances)
    if not report.is_qds:
        msg = (
            f"channel {channel.name!r} is not QDS "
            f"(tp={report.tp_residual:.3e}, un={report.unital_residual:.3e}, "
            f"choi_min={report.choi_min_eig:.3e})"
        )
        raise NotQdsError(msg)
    results = [
        induced_norm(channel, p, tolerances=tolerances, settings=settings)
        for p in p_grid
    ]
    for result in results:
        logger.debug(
            "sweep p=%s: [%.12f, %.12f]",
            result.p,
            result.lower_bound,
            result.upper_bound,
        )
    return results


def sweep_violations(
    results: Sequence[InducedNormResult],
    slack: float = 1e-6,
) -> list[float]:
    """Exponents whose lower bound exceeds 1 + slack or whose upper bound is not 1."""
    return [
        r.p
        for r in results
        if r.lower_bound > 1 + slack or abs(r.upper_bound - 1) > slack
    ]


def contraction_coefficient(channel: Channel) -> float:
    """Second largest singular value of the superoperator."""
    n = channel.dim
    if n == 1:
        return 0.0
    if n <= DENSE_DIM_LIMIT:
        return float(np.linalg.svd(channel.superop, compute_uv=False)[1])
    s = svds(superop_operator(channel), k=2, return_singular_vectors=False)
    return float(np.sort(s)[0])


def _min_eigenvalue_along(
    base: ComplexMatrix,
    direction: ComplexMatrix,
    d: float,
) -> float:
    return float(np.linalg.eigvalsh(base + d * direction)[0])


def _largest_feasible_delta(
    gap: Callable[[float], float],
    tolerances: Tolerances,
) -> float | None:
    """Largest d in [0, 1] with ``gap(d) >= 0`` for a concave ``gap``."""
    best = minimize_scalar(
        lambda d: -gap(d),
        bounds=(0.0, 1.0),
        method="bounded",
        options={"xatol": 1e-13},
    )
    peak = float(best.x)
    peak_value = gap(peak)
    if peak_value < -tolerances.psd_tol:
        return None
    if gap(1.0) >= 0:
        return 1.0
    if peak_value <= 0:
        return peak
    return float(brentq(gap, peak, 1.0, xtol=1e-14))


def diagonal_contraction_probe(
    channel: Channel,
    p: float,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    exhaustive_limit: int = 12,
    samples: int = 4096,
    seed: int = 0,
) -> ContractionProbe:
    """Scan nontrivial diagonal projections for ``Phi(e) <= (1-d)e + d(1-e)``.

    A diagnostic only: a positive ``d`` for some projection says nothing about
    the induced norm being below 1.
    """
    p = check_exponent(p)
    n = channel.dim
    exhaustive = n <= exhaustive_limit
    if exhaustive:
        masks = np.array(list(itertools.product((0, 1), repeat=n)))[1:-1]
    else:
        drawn = make_rng(seed).integers(0, 2, size=(samples, n))
        masks = np.unique(drawn, axis=0)
        masks = masks[(masks.sum(axis=1) > 0) & (masks.sum(axis=1) < n)]
    if len(masks) == 0:
        return ContractionProbe(p=p, scanned=0, exhaustive=exhaustive)

    projections = np.stack([np.diag(m.astype(np.complex128)) for m in masks])
    images = hermitian_part(channel.apply(projections))
    ratios = _p_norms(images, p) / _p_norms(projections, p)
    pairs = []
    for mask, e, image, ratio in zip(masks, projections, images, ratios, strict=True):
        base = e - image
        direction = identity(n) - 2 * e
        gap = functools.partial(_min_eigenvalue_along, base, direction)
        delta = _largest_feasible_delta(gap, tolerances)
        if delta is not None and delta > tolerances.conv_tol:
            pairs.append(
                ContractionPair(
                    projection=tuple(int(v) for v in mask),
                    delta=delta,
                    ratio=float(ratio),
                ),
            )
    logger.debug(
        "contraction probe: %d of %d projections contract",
        len(pairs),
        len(masks),
    )
    return ContractionProbe(p=p, scanned=len(masks), exhaustive=exhaustive, pairs=pairs)


"""Deviation from double stochasticity and the perturbation bound.

For a map ``Psi`` the two deviations are

* ``delta_tr = sup_{||x||_1 = 1} |trace(Psi(x) - x)|``, which equals
  ``||Psi*(1) - 1||_inf`` because ``trace(Psi(x) - x) = trace((Psi*(1) - 1) x)``
  and the trace norm is dual to the operator norm;
* ``delta_un = ||Psi(1) - 1||_inf``.

A sweep over a one-parameter family ``Psi_eps`` reports the distance to the
base channel and the constant ``C`` fitted from
``||Phi - Psi|| = C (delta_tr + delta_un)^alpha``.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from qds_lab._channels import (
    Channel,
    additive_perturbation,
    certify_qds,
    linear_combination,
    unitary_conjugation,
)
from qds_lab._config import (
    DEFAULT_ASCENT,
    DEFAULT_TOLERANCES,
    AscentSettings,
    Tolerances,
)
from qds_lab._exceptions import (
    BadExponentError,
    BadParameterError,
    DimensionMismatchError,
    NotQdsError,
)
from qds_lab._matcore import check_exponent, identity, operator_norm
from qds_lab._norms import induced_norm, top_singular
from qds_lab._random import make_rng, random_pure_states, random_unitary

logger = logging.getLogger("qds_lab")

FAMILIES = ("additive", "mixture")

# deviations below this count as exact
ZERO_DEVIATION = 1e-12
NORM_STABILITY_SLACK = 1e-8


@dataclass(frozen=True)
class PerturbationReport:
    eps: float
    delta_tr: float
    delta_un: float
    distance_p2: float
    distance_p: float
    alpha: float
    fitted_cp: float | None
    norm_deviation: float


@dataclass(frozen=True)
class PerturbationSweep:
    family: str
    p: float
    reports: list[PerturbationReport] = field(default_factory=list)
    cp_bound: float | None = None
    one_sided: bool = False
    distances_decrease: bool = True
    consistent: bool = True
    norm_stable: bool = True


def deviation_metrics(psi: Channel) -> tuple[float, float]:
    """``(delta_tr, delta_un)`` in closed form."""
    one = identity(psi.dim)
    delta_tr = operator_norm(psi.apply_hs_adjoint(one) - one)
    delta_un = operator_norm(psi.apply(one) - one)
    return delta_tr, delta_un


def sampled_trace_deviation(
    psi: Channel,
    *,
    samples: int = 512,
    seed: int = 0,
) -> float:
    """Brute-force ``delta_tr`` over random rank-one inputs ``u v^H``.

    Rank-one matrices of unit vectors are the extreme points of the
    trace-norm unit ball, so the sampled value approaches the closed form
    from below.
    """
    rng = make_rng(seed)
    n = psi.dim
    u = random_pure_states(n, samples, rng)
    v = random_pure_states(n, samples, rng)
    x = u[:, :, None] * v[:, None, :].conj()
    defect = np.trace(psi.apply(x) - x, axis1=1, axis2=2)
    return float(np.max(np.abs(defect)))


def distance_p2(a: Channel, b: Channel) -> float:
    """Largest singular value of the superoperator difference."""
    if a.dim != b.dim:
        msg = f"cannot compare channels of dims {a.dim} and {b.dim}"
        raise DimensionMismatchError(msg)
    sigma, _ = top_singular(linear_combination([a, b], [1.0, -1.0]))
    return sigma


def _alpha(p: float) -> float:
    p = check_exponent(p)
    if p == 1 or math.isinf(p):
        msg = f"perturbation exponent alpha vanishes at p={p}; use 1 < p < inf"
        raise BadExponentError(msg)
    return min(1 / p, 1 - 1 / p)


def family_member(
    phi: Channel,
    family: str,
    eps: float,
    *,
    a: npt.ArrayLike | None = None,
    u: npt.ArrayLike | None = None,
) -> Channel:
    """``Phi + eps a trace`` (additive) or ``(1 - eps) Phi + eps Ad_u`` (mixture)."""
    if family == "additive":
        return additive_perturbation(phi, eps, a)
    if family == "mixture":
        if u is None:
            msg = "the mixture family needs a unitary u"
            raise BadParameterError(msg)
        return linear_combination(
            [phi, unitary_conjugation(u)],
            [1 - eps, eps],
            name="mixture",
            params={"eps": float(eps), "base": phi.name},
        )
    msg = f"unknown perturbation family {family!r}; known: {', '.join(FAMILIES)}"
    raise BadParameterError(msg)


def reports_norm_stable(reports: Sequence[PerturbationReport]) -> bool:
    """Check ``| ||Psi|| - 1 | <= C (delta_tr + delta_un)^alpha`` point by point.

    Each point uses its own fitted ``C``; a point without one (zero deviation)
    must keep the norm at 1.
    """
    return all(
        r.norm_deviation
        <= (r.fitted_cp or 0.0) * (r.delta_tr + r.delta_un) ** r.alpha
        + NORM_STABILITY_SLACK
        for r in reports
    )


def perturbation_sweep(
    phi: Channel,
    family: str | Callable[[float], Channel],
    eps_grid: Sequence[float],
    p: float = 2.0,
    *,
    a: npt.ArrayLike | None = None,
    u: npt.ArrayLike | None = None,
    seed: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> PerturbationSweep:
    """Evaluate the perturbation bound along ``Psi_eps`` for each ``eps``.

    ``family`` is ``"additive"``, ``"mixture"`` or a callable returning
    ``Psi_eps``. At p = 2 distances are exact; otherwise they are ascent
    lower bounds and the sweep is marked one-sided.
    """
    report = certify_qds(phi, tolerances=tolerances)
    if not report.is_qds:
        msg = f"base channel {phi.name!r} is not QDS"
        raise NotQdsError(msg)
    alpha = _alpha(p)
    if isinstance(family, str):
        name = family
        if family == "mixture" and u is None:
            u = random_unitary(phi.dim, make_rng(seed))

        def member(eps: float) -> Channel:
            return family_member(phi, name, eps, a=a, u=u)

    else:
        name = getattr(family, "__name__", "custom")
        member = family

    reports = []
    for eps in eps_grid:
        psi = member(float(eps))
        delta_tr, delta_un = deviation_metrics(psi)
        distance_2 = distance_p2(phi, psi)
        if p == 2:
            distance = distance_2
        else:
            diff = linear_combination([phi, psi], [1.0, -1.0])
            distance = induced_norm(
                diff,
                p,
                tolerances=tolerances,
                settings=settings,
            ).lower_bound
        total = delta_tr + delta_un
        fitted = distance / total**alpha if total > ZERO_DEVIATION else None
        norm_deviation = abs(top_singular(psi)[0] - 1)
        reports.append(
            PerturbationReport(
                eps=float(eps),
                delta_tr=delta_tr,
                delta_un=delta_un,
                distance_p2=distance_2,
                distance_p=distance,
                alpha=alpha,
                fitted_cp=fitted,
                norm_deviation=norm_deviation,
            ),
        )
        logger.debug(
            "eps=%g: delta_tr=%.3e delta_un=%.3e distance=%.3e",
            eps,
            delta_tr,
            delta_un,
            distance,
        )

    fitted_values = [r.fitted_cp for r in reports if r.fitted_cp is not None]
    cp_bound = max(fitted_values) if fitted_values else None
    by_eps = sorted(reports, key=lambda r: r.eps, reverse=True)
    distances_decrease = all(
        later.distance_p <= earlier.distance_p + tolerances.conv_tol
        for earlier, later in itertools.pairwise(by_eps)
    )
    # zero deviation forces Psi = Phi under the bound
    consistent = all(
        r.distance_p <= tolerances.conv_tol
        for r in reports
        if r.delta_tr + r.delta_un <= ZERO_DEVIATION
    )
    norm_stable = reports_norm_stable(reports)
    if not consistent:
        logger.warning(
            "family %r has zero deviation metrics but nonzero distance",
            name,
        )
    return PerturbationSweep(
        family=name,
        p=p,
        reports=reports,
        cp_bound=cp_bound,
        one_sided=p != 2,
        distances_decrease=distances_decrease,
        consistent=consistent,
        norm_stable=norm_stable,
    )


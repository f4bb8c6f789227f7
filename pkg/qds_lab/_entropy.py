"""Von Neumann entropy and its monotonicity under QDS channels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import entr

from qds_lab._channels import Channel, Representation, certify_qds
from qds_lab._config import DEFAULT_TOLERANCES, Tolerances
from qds_lab._exceptions import NotQdsError
from qds_lab._matcore import (
    RealVector,
    check_density,
    hermitian_part,
    singular_values,
    vec,
)


@dataclass(frozen=True)
class EntropyReport:
    """Entropies in nats; ``delta = s_out - s_in``."""

    s_in: float
    s_out: float
    delta: float
    strict_expected: bool
    bound_log_d: float
    strict_observed: bool
    counterexample: bool
    within_bound: bool

    def in_bits(self) -> EntropyReport:
        scale = 1 / math.log(2)
        return EntropyReport(
            s_in=self.s_in * scale,
            s_out=self.s_out * scale,
            delta=self.delta * scale,
            strict_expected=self.strict_expected,
            bound_log_d=self.bound_log_d * scale,
            strict_observed=self.strict_observed,
            counterexample=self.counterexample,
            within_bound=self.within_bound,
        )


def _clamped(lam: RealVector, tolerances: Tolerances) -> RealVector:
    # slightly negative eigenvalues are numerical noise
    return np.where((lam < 0) & (lam >= -tolerances.psd_tol), 0.0, lam)


def spectrum_entropy(
    lam: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    """``-sum l log l`` with ``0 log 0 = 0``."""
    values = _clamped(np.asarray(lam, dtype=np.float64), tolerances)
    return max(0.0, float(np.sum(entr(values))))


def von_neumann_entropy(
    rho: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> float:
    r = check_density(rho, tolerances=tolerances)
    return spectrum_entropy(np.linalg.eigvalsh(r), tolerances=tolerances)


def _require_qds(channel: Channel, tolerances: Tolerances) -> None:
    report = certify_qds(channel, tolerances=tolerances)
    if not report.is_qds:
        msg = (
            f"channel {channel.name!r} is not QDS "
            f"(tp={report.tp_residual:.3e}, un={report.unital_residual:.3e}, "
            f"choi_min={report.choi_min_eig:.3e})"
        )
        raise NotQdsError(msg)


def _choi_spectrum(channel: Channel) -> RealVector:
    if channel.representation is Representation.KRAUS:
        vecs = vec(channel.data).reshape(len(channel.data), -1)
        # nonzero spectrum of the Choi matrix, from the Gram matrix of the Kraus set
        return np.linalg.eigvalsh(vecs.conj() @ vecs.T)
    return np.linalg.eigvalsh(hermitian_part(channel.choi))


def unitarity_probe(
    channel: Channel,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> bool:
    """True when the channel is a unitary conjugation ``x -> u x u^H``.

    Requires a Choi matrix of rank one and a superoperator whose singular
    values all equal 1.
    """
    _require_qds(channel, tolerances)
    choi_eigs = _choi_spectrum(channel)
    if np.count_nonzero(choi_eigs > tolerances.psd_tol) != 1:
        return False
    # rank one: Phi(x) = k x k^H and the superoperator conj(k) (x) k has
    # singular values s_i * s_j
    ops = channel.kraus
    k = ops[int(np.argmax(np.linalg.norm(ops, axis=(1, 2))))]
    k = k * math.sqrt(float(choi_eigs[-1])) / np.linalg.norm(k)
    s = singular_values(k)
    return bool(np.all(np.abs(np.outer(s, s) - 1) <= tolerances.unitary_tol))


def _distinct_count(lam: RealVector, tolerances: Tolerances) -> int:
    return 1 + int(np.count_nonzero(np.abs(np.diff(lam)) > tolerances.psd_tol))


def entropy_monotonicity_check(
    channel: Channel,
    rho: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> EntropyReport:
    """Compare ``S(Phi(rho))`` with ``S(rho)``.

    ``strict_expected`` marks inputs where strict growth is predicted
    (non-unitary channel, and ``rho`` either not pure or with at least two
    distinct eigenvalues). Whether growth was actually observed is reported
    separately; the prediction fails for instance for the pinching map on a
    diagonal state.
    """
    _require_qds(channel, tolerances)
    r = check_density(rho, tolerances=tolerances)
    lam_in = np.sort(np.linalg.eigvalsh(r))[::-1]
    lam_out = np.linalg.eigvalsh(hermitian_part(channel.apply(r)))
    s_in = spectrum_entropy(lam_in, tolerances=tolerances)
    s_out = spectrum_entropy(lam_out, tolerances=tolerances)
    delta = s_out - s_in
    n = channel.dim
    bound = math.log(n)

    rank = int(np.count_nonzero(lam_in > tolerances.psd_tol))
    spread = rank >= 2 or _distinct_count(lam_in, tolerances) >= 2
    strict_expected = spread and not unitarity_probe(channel, tolerances=tolerances)
    strict_observed = delta > tolerances.strict_floor
    return EntropyReport(
        s_in=s_in,
        s_out=s_out,
        delta=delta,
        strict_expected=strict_expected,
        bound_log_d=bound,
        strict_observed=strict_observed,
        counterexample=strict_expected and not strict_observed,
        within_bound=-tolerances.mono_tol <= delta <= bound + tolerances.mono_tol,
    )

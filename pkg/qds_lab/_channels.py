"""Linear maps on M_n in Kraus, Choi and superoperator form.

Conventions:

* Kraus form: ``Phi(x) = sum_k K_k x K_k^H``. Trace preservation reads
  ``sum_k K_k^H K_k = 1`` and unitality ``sum_k K_k K_k^H = 1``.
* Choi matrix: ``sum_ij E_ij (x) Phi(E_ij)`` (unnormalized, trace = n for
  trace-preserving maps).
* Superoperator: acts on column-stacked ``vec(x)``, so that the unitary
  conjugation ``x -> u x u^H`` has superoperator ``conj(u) (x) u``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt

from qds_lab._config import DEFAULT_TOLERANCES, Tolerances
from qds_lab._exceptions import (
    BadParameterError,
    DimensionMismatchError,
    MalformedInputError,
    NotCompletelyPositiveError,
    UnknownExampleError,
)
from qds_lab._matcore import (
    MAX_DIM,
    ComplexMatrix,
    dagger,
    eig_hermitian,
    hermitian_part,
    identity,
    operator_norm,
    unvec,
    vec,
)
from qds_lab._random import (
    complex_gaussian,
    make_rng,
    random_probability,
    random_pure_states,
    random_unitary,
)

logger = logging.getLogger("qds_lab")

DEPOLARIZING_MAX_DIM = 32


class Representation(str, Enum):
    KRAUS = "kraus"
    CHOI = "choi"
    SUPEROP = "superop"


def _reshuffle(m: ComplexMatrix, n: int) -> ComplexMatrix:
    """Choi <-> superoperator; the index permutation is an involution."""
    return m.reshape(n, n, n, n).transpose(3, 1, 2, 0).reshape(n * n, n * n)


def _dim_from_square(size: int, what: str) -> int:
    n = math.isqrt(size)
    if n * n != size or n == 0:
        msg = f"{what} size {size} is not a square of a dimension"
        raise MalformedInputError(msg)
    return n


@dataclass(frozen=True, eq=False)
class Channel:
    """A QDS-candidate map stored in one of three interconvertible forms.

    ``data`` holds a stack of Kraus operators with shape ``(r, n, n)`` or a
    ``(n*n, n*n)`` Choi/superoperator matrix. The other forms are derived on
    first access and cached.
    """

    dim: int
    representation: Representation
    data: npt.NDArray[np.complex128]
    name: str = "custom"
    params: Mapping[str, Any] = field(default_factory=dict)

    @classmethod
    def from_kraus(
        cls,
        operators: npt.ArrayLike,
        *,
        name: str = "custom",
        params: Mapping[str, Any] | None = None,
    ) -> Channel:
        ops = np.asarray(operators, dtype=np.complex128)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] < 1 or ops.shape[1] != ops.shape[2]:
            msg = f"Kraus operators must have shape (r, n, n), got {ops.shape}"
            raise MalformedInputError(msg)
        _check_data(ops, ops.shape[1])
        return cls(
            dim=ops.shape[1],
            representation=Representation.KRAUS,
            data=ops,
            name=name,
            params=dict(params or {}),
        )

    @classmethod
    def from_choi(
        cls,
        matrix: npt.ArrayLike,
        *,
        name: str = "custom",
        params: Mapping[str, Any] | None = None,
    ) -> Channel:
        return cls._from_square(Representation.CHOI, matrix, name, params)

    @classmethod
    def from_superop(
        cls,
        matrix: npt.ArrayLike,
        *,
        name: str = "custom",
        params: Mapping[str, Any] | None = None,
    ) -> Channel:
        return cls._from_square(Representation.SUPEROP, matrix, name, params)

    @classmethod
    def _from_square(
        cls,
        representation: Representation,
        matrix: npt.ArrayLike,
        name: str,
        params: Mapping[str, Any] | None,
    ) -> Channel:
        m = np.asarray(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            msg = f"{representation.value} matrix must be square, got {m.shape}"
            raise MalformedInputError(msg)
        n = _dim_from_square(m.shape[0], representation.value)
        _check_data(m, n)
        return cls(
            dim=n,
            representation=representation,
            data=m,
            name=name,
            params=dict(params or {}),
        )

    @cached_property
    def kraus(self) -> ComplexMatrix:
        if self.representation is Representation.KRAUS:
            return self.data
        return choi_to_kraus(self.choi)

    @cached_property
    def choi(self) -> ComplexMatrix:
        if self.representation is Representation.CHOI:
            return self.data
        if self.representation is Representation.KRAUS:
            return kraus_to_choi(self.data)
        return _reshuffle(self.data, self.dim)

    @cached_property
    def superop(self) -> ComplexMatrix:
        if self.representation is Representation.SUPEROP:
            return self.data
        return _reshuffle(self.choi, self.dim)

    @cached_property
    def _schur_multiplier(self) -> ComplexMatrix | None:
        """``M`` with ``Phi(x) = M * x`` when every Kraus operator is diagonal."""
        if self.representation is not Representation.KRAUS:
            return None
        ops = self.data
        diagonals = np.diagonal(ops, axis1=1, axis2=2)
        off = ops.copy()
        idx = np.arange(self.dim)
        off[:, idx, idx] = 0
        if np.any(off != 0):
            return None
        return np.einsum("ka,kb->ab", diagonals, diagonals.conj())

    def apply(self, x: ComplexMatrix) -> ComplexMatrix:
        """Apply to a matrix or a stack of matrices (no validation)."""
        n = self.dim
        if self._schur_multiplier is not None:
            return self._schur_multiplier * x
        if self.representation is Representation.KRAUS:
            k = self.data
            return np.einsum("kab,...bc,kdc->...ad", k, x, k.conj(), optimize=True)
        if self.representation is Representation.CHOI:
            c4 = self.data.reshape(n, n, n, n)
            return np.einsum("...ij,iajb->...ab", x, c4, optimize=True)
        return unvec(vec(x) @ self.data.T, n)

    def apply_hs_adjoint(self, y: ComplexMatrix) -> ComplexMatrix:
        """Hilbert-Schmidt adjoint, ``<y, Phi(x)> = <Phi^dagger(y), x>``."""
        if self._schur_multiplier is not None:
            return self._schur_multiplier.conj() * y
        if self.representation is Representation.KRAUS:
            k = self.data
            return np.einsum("kba,...bc,kcd->...ad", k.conj(), y, k, optimize=True)
        return unvec(vec(y) @ self.superop.conj(), self.dim)

    def renamed(self, name: str, params: Mapping[str, Any] | None = None) -> Channel:
        return Channel(
            dim=self.dim,
            representation=self.representation,
            data=self.data,
            name=name,
            params=dict(params if params is not None else self.params),
        )


def _check_data(data: npt.NDArray[np.complex128], n: int) -> None:
    if n > MAX_DIM:
        msg = f"channel dim {n} > {MAX_DIM}"
        raise MalformedInputError(msg)
    if not np.all(np.isfinite(data)):
        msg = "channel data has non-finite entries"
        raise MalformedInputError(msg)


@dataclass(frozen=True)
class QdsReport:
    tp_residual: float
    unital_residual: float
    choi_min_eig: float
    is_qds: bool


@dataclass(frozen=True)
class PositivityProbe:
    """Heuristic positivity check on random pure states; never a proof."""

    min_eigenvalue: float
    trials: int
    positive: bool


def apply(channel: Channel, x: npt.ArrayLike) -> ComplexMatrix:
    xm = np.asarray(x, dtype=np.complex128)
    if xm.ndim < 2 or xm.shape[-2:] != (channel.dim, channel.dim):
        msg = f"input of shape {xm.shape} does not match channel dim {channel.dim}"
        raise DimensionMismatchError(msg)
    return channel.apply(xm)


def adjoint(channel: Channel) -> Channel:
    """Map with ``trace(y Phi(x)) == trace(Phi*(y) x)``."""
    name = f"adjoint({channel.name})"
    if channel.representation is Representation.KRAUS:
        return Channel.from_kraus(
            dagger(channel.data),
            name=name,
            params=channel.params,
        )
    n = channel.dim
    s4 = channel.superop.reshape(n, n, n, n)
    return Channel.from_superop(
        s4.transpose(3, 2, 1, 0).reshape(n * n, n * n),
        name=name,
        params=channel.params,
    )


def kraus_to_choi(operators: ComplexMatrix) -> ComplexMatrix:
    r, n, _ = operators.shape
    vecs = vec(operators).reshape(r, n * n)
    return vecs.T @ vecs.conj()


def choi_to_kraus(
    choi: ComplexMatrix,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ComplexMatrix:
    """One Kraus operator per Choi eigenvalue above psd_tol."""
    n = _dim_from_square(choi.shape[0], "choi")
    spectrum = eig_hermitian(choi, tolerances=tolerances)
    lam = spectrum.eigenvalues
    if lam[-1] < -tolerances.psd_tol:
        msg = f"Choi matrix has eigenvalue {lam[-1]:.3e} < -psd_tol"
        raise NotCompletelyPositiveError(msg)
    keep = lam > tolerances.psd_tol
    if not np.any(keep):
        return np.zeros((1, n, n), dtype=np.complex128)
    vectors = spectrum.eigenvectors[:, keep] * np.sqrt(lam[keep])
    return unvec(vectors.T, n)


def to_superop(channel: Channel) -> ComplexMatrix:
    return channel.superop


def choi_min_eigenvalue(channel: Channel) -> float:
    """Smallest Choi eigenvalue without forming the Choi matrix for Kraus input."""
    if channel.representation is Representation.KRAUS:
        r = len(channel.data)
        if r < channel.dim**2:
            return 0.0
        if r == channel.dim**2:
            # same spectrum as the Choi matrix: V^T conj(V) vs conj(V) V^T
            vecs = vec(channel.data).reshape(r, -1)
            return float(np.linalg.eigvalsh(vecs.conj() @ vecs.T)[0])
    return float(np.linalg.eigvalsh(hermitian_part(channel.choi))[0])


def certify_qds(
    channel: Channel,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> QdsReport:
    one = identity(channel.dim)
    tp_residual = operator_norm(channel.apply_hs_adjoint(one) - one)
    unital_residual = operator_norm(channel.apply(one) - one)
    choi_min_eig = choi_min_eigenvalue(channel)
    is_qds = (
        tp_residual <= tolerances.tp_tol
        and unital_residual <= tolerances.un_tol
        and choi_min_eig >= -tolerances.psd_tol
    )
    logger.debug(
        "certify %s: tp=%.3e un=%.3e choi_min=%.3e",
        channel.name,
        tp_residual,
        unital_residual,
        choi_min_eig,
    )
    return QdsReport(
        tp_residual=tp_residual,
        unital_residual=unital_residual,
        choi_min_eig=choi_min_eig,
        is_qds=is_qds,
    )


def positivity_probe(
    channel: Channel,
    *,
    trials: int = 256,
    seed: int = 0,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PositivityProbe:
    psi = random_pure_states(channel.dim, trials, make_rng(seed))
    states = psi[:, :, None] * psi[:, None, :].conj()
    outputs = hermitian_part(channel.apply(states))
    min_eig = float(np.min(np.linalg.eigvalsh(outputs)))
    return PositivityProbe(
        min_eigenvalue=min_eig,
        trials=trials,
        positive=min_eig >= -tolerances.psd_tol,
    )


def _check_dimension(n: int, minimum: int = 1, what: str = "n") -> int:
    if not isinstance(n, int | np.integer) or n < minimum or n > MAX_DIM:
        msg = f"{what} must be an integer in [{minimum}, {MAX_DIM}], got {n!r}"
        raise BadParameterError(msg)
    return int(n)


def _check_unitary(u: ComplexMatrix, tolerances: Tolerances) -> None:
    residual = operator_norm(dagger(u) @ u - identity(u.shape[0]))
    if residual > tolerances.orth_tol:
        msg = f"matrix is not unitary: ||u^H u - 1|| = {residual:.3e}"
        raise BadParameterError(msg)


def identity_channel(n: int) -> Channel:
    n = _check_dimension(n)
    return Channel.from_kraus(identity(n), name="identity", params={"n": n})


def weyl_operators(n: int) -> ComplexMatrix:
    """Clock-and-shift unitaries ``X^a Z^b``, (a, b) in row-major order.

    ``X^a Z^b`` maps ``e_j`` to ``omega^(b j) e_(j+a)``, so the stack is filled
    entrywise instead of by matrix powers.
    """
    idx = np.arange(n)
    phases = np.exp(2j * np.pi * np.outer(idx, idx) / n)
    ops = np.zeros((n, n, n, n), dtype=np.complex128)
    for a, block in enumerate(ops):
        block[:, (idx + a) % n, idx] = phases
    return ops.reshape(n * n, n, n)


def depolarizing(t: float, n: int) -> Channel:
    """``t x + (1 - t) trace(x) / n * 1`` as a Weyl-twirl mixed-unitary channel.

    The twirl stores ``n**2`` Kraus operators, ``n**4`` entries in all, so
    ``n`` is capped at ``DEPOLARIZING_MAX_DIM``.
    """
    n = _check_dimension(n)
    if n > DEPOLARIZING_MAX_DIM:
        msg = (
            f"depolarizing dimension must be at most {DEPOLARIZING_MAX_DIM}, "
            f"got {n}"
        )
        raise BadParameterError(msg)
    t = float(t)
    if not 0 <= t <= 1:
        msg = f"depolarizing parameter must lie in [0, 1], got {t!r}"
        raise BadParameterError(msg)
    mix = (1 - t) / (n * n)
    weights = np.full(n * n, mix)
    weights[0] += t
    keep = weights > 0
    ops = np.sqrt(weights[keep])[:, None, None] * weyl_operators(n)[keep]
    return Channel.from_kraus(ops, name="depolarizing", params={"t": t, "n": n})


def pinching(n: int) -> Channel:
    """Projection onto the diagonal in the standard basis."""
    n = _check_dimension(n)
    ops = np.zeros((n, n, n), dtype=np.complex128)
    ops[np.arange(n), np.arange(n), np.arange(n)] = 1.0
    return Channel.from_kraus(ops, name="pinching", params={"n": n})


def unitary_conjugation(
    u: npt.ArrayLike,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Channel:
    um = np.asarray(u, dtype=np.complex128)
    _check_unitary(um, tolerances)
    return Channel.from_kraus(um, name="unitary", params={"n": um.shape[0]})


def mixed_unitary(
    weights: Sequence[float] | npt.NDArray[np.float64],
    unitaries: Sequence[ComplexMatrix] | npt.NDArray[np.complex128],
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Channel:
    w = np.asarray(weights, dtype=np.float64)
    us = np.asarray(unitaries, dtype=np.complex128)
    if w.ndim != 1 or us.ndim != 3 or len(w) != len(us) or len(w) == 0:
        msg = "mixed_unitary needs one weight per unitary"
        raise BadParameterError(msg)
    if np.any(w < 0) or abs(w.sum() - 1) > tolerances.ds_tol:
        msg = f"weights must be nonnegative and sum to 1, got {w.tolist()}"
        raise BadParameterError(msg)
    for u in us:
        _check_unitary(u, tolerances)
    keep = w > 0
    ops = np.sqrt(w[keep])[:, None, None] * us[keep]
    return Channel.from_kraus(
        ops,
        name="mixed_unitary",
        params={"weights": w.tolist(), "n": us.shape[1]},
    )


def shift_average(truncation: int) -> Channel:
    """``(x + S x S^H) / 2`` with S the truncated unilateral shift.

    Not exactly trace-preserving: the last basis vector leaks out of the
    truncation and the residual (1/2) is reported by :func:`certify_qds`.
    """
    n = _check_dimension(truncation, minimum=2, what="truncation")
    shift = np.eye(n, k=-1, dtype=np.complex128)
    ops = np.stack([identity(n), shift]) / math.sqrt(2)
    return Channel.from_kraus(ops, name="shift_average", params={"N": n})


def damped_pinching(
    weights: Sequence[float] | None = None,
    truncation: int | None = None,
    ratio: float = 0.5,
) -> Channel:
    """``x -> sum_k c_k x_kk E_kk``, default ``c_k = ratio**k`` for k = 1..N.

    Unital only when every weight equals 1.
    """
    if weights is None:
        n = _check_dimension(truncation or 64, minimum=2, what="truncation")
        if not 0 <= ratio <= 1:
            msg = f"ratio must lie in [0, 1], got {ratio!r}"
            raise BadParameterError(msg)
        c = float(ratio) ** np.arange(1, n + 1)
    else:
        c = np.asarray(weights, dtype=np.float64)
        n = _check_dimension(len(c), minimum=2, what="truncation")
        if truncation is not None and truncation != n:
            msg = f"{len(c)} weights given for truncation {truncation}"
            raise BadParameterError(msg)
    if np.any(c < 0) or np.any(c > 1):
        msg = "damped_pinching weights must lie in [0, 1]"
        raise BadParameterError(msg)
    ops = np.zeros((n, n, n), dtype=np.complex128)
    ops[np.arange(n), np.arange(n), np.arange(n)] = np.sqrt(c)
    return Channel.from_kraus(
        ops,
        name="damped_pinching",
        params={"weights": c.tolist(), "N": n},
    )


def transpose_map(n: int) -> Channel:
    """Positive but not completely positive; Choi is the swap operator."""
    n = _check_dimension(n)
    superop = np.zeros((n * n, n * n), dtype=np.complex128)
    a, b = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    # E_ab -> E_ba
    superop[(b + a * n).ravel(), (a + b * n).ravel()] = 1.0
    return Channel.from_superop(superop, name="transpose", params={"n": n})


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer o inner``."""
    if outer.dim != inner.dim:
        msg = f"cannot compose dims {outer.dim} and {inner.dim}"
        raise DimensionMismatchError(msg)
    name = f"{outer.name}*{inner.name}"
    if (
        outer.representation is Representation.KRAUS
        and inner.representation is Representation.KRAUS
        and len(outer.data) * len(inner.data) <= outer.dim**2
    ):
        ops = np.einsum("iab,jbc->ijac", outer.data, inner.data)
        return Channel.from_kraus(ops.reshape(-1, outer.dim, outer.dim), name=name)
    return Channel.from_superop(outer.superop @ inner.superop, name=name)


def linear_combination(
    channels: Sequence[Channel],
    coefficients: Sequence[float],
    *,
    name: str = "combination",
    params: Mapping[str, Any] | None = None,
) -> Channel:
    if not channels or len(channels) != len(coefficients):
        msg = "need one coefficient per channel"
        raise BadParameterError(msg)
    dims = {ch.dim for ch in channels}
    if len(dims) != 1:
        msg = f"channels have different dims {sorted(dims)}"
        raise DimensionMismatchError(msg)
    coeffs = [float(c) for c in coefficients]
    if all(c >= 0 for c in coeffs) and all(
        ch.representation is Representation.KRAUS for ch in channels
    ):
        ops = [
            math.sqrt(c) * ch.data
            for c, ch in zip(coeffs, channels, strict=True)
            if c > 0
        ]
        if ops:
            return Channel.from_kraus(np.concatenate(ops), name=name, params=params)
    superop = sum(
        (c * ch.superop for c, ch in zip(coeffs, channels, strict=True)),
        start=np.zeros_like(channels[0].superop),
    )
    return Channel.from_superop(superop, name=name, params=params)


def additive_perturbation(
    phi: Channel,
    eps: float,
    a: npt.ArrayLike | None = None,
) -> Channel:
    """``x -> Phi(x) + eps * a * trace(x)``, default ``a = diag(1, 0, ..., 0)``."""
    n = phi.dim
    if a is None:
        am = np.zeros((n, n), dtype=np.complex128)
        am[0, 0] = 1.0
    else:
        am = np.asarray(a, dtype=np.complex128)
        if am.shape != (n, n):
            msg = f"perturbation matrix has shape {am.shape}, expected {(n, n)}"
            raise DimensionMismatchError(msg)
    superop = phi.superop + float(eps) * np.outer(vec(am), vec(identity(n)))
    return Channel.from_superop(
        superop,
        name="additive_perturbation",
        params={"eps": float(eps), "base": phi.name},
    )


def random_mixed_unitary(
    n: int,
    rng: np.random.Generator,
    terms: int = 3,
) -> Channel:
    """Random QDS channel: Dirichlet weights over Haar unitaries."""
    weights = random_probability(terms, rng)
    unitaries = np.stack([random_unitary(n, rng) for _ in range(terms)])
    return mixed_unitary(weights, unitaries)


def random_kraus_map(
    n: int,
    rng: np.random.Generator,
    rank: int = 2,
) -> Channel:
    """Completely positive map with Gaussian Kraus operators; neither TP nor unital."""
    ops = complex_gaussian(rng, (rank, n, n)) / math.sqrt(n * rank)
    return Channel.from_kraus(ops, name="random_kraus", params={"n": n, "rank": rank})


ZOO: dict[str, Callable[..., Channel]] = {
    "identity": identity_channel,
    "depolarizing": depolarizing,
    "pinching": pinching,
    "mixed_unitary": mixed_unitary,
    "unitary": unitary_conjugation,
    "shift_average": shift_average,
    "damped_pinching": damped_pinching,
    "transpose": transpose_map,
}


def channel_zoo(name: str, **params: Any) -> Channel:
    try:
        constructor = ZOO[name]
    except KeyError:
        msg = f"unknown channel {name!r}; known: {', '.join(sorted(ZOO))}"
        raise UnknownExampleError(msg) from None
    try:
        return constructor(**params)
    except TypeError as exc:
        msg = f"bad parameters for {name}: {exc}"
        raise BadParameterError(msg) from exc

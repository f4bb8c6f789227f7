"""Finite-rank tail norms of truncated infinite-dimensional examples.

For a coordinate projection ``e`` onto the first ``rank`` basis vectors the
tail norm is ``sup ||Phi((1-e) x (1-e))||_p`` over the unit p-ball. A map
behaves compactly when the tail norm tends to 0 as the rank grows. Only
coordinate projections are scanned; the zoo examples are diagonal in the
standard basis.
"""

from __future__ import annotations

import functools
import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from qds_lab._channels import Channel, channel_zoo
from qds_lab._config import (
    DEFAULT_ASCENT,
    DEFAULT_TOLERANCES,
    AscentSettings,
    Tolerances,
)
from qds_lab._exceptions import BadRankError, UnknownExampleError
from qds_lab._matcore import ComplexMatrix, check_exponent
from qds_lab._norms import projected_ascent, top_singular
from qds_lab._random import complex_gaussian, make_rng, spawn_seeds

logger = logging.getLogger("qds_lab")

TAIL_EXAMPLES = ("damped_pinching", "pinching", "shift_average")
DEFAULT_TRUNCATION = 64
COMPACT_THRESHOLD = 0.01


@dataclass(frozen=True)
class TailPoint:
    rank: int
    tail_norm: float


@dataclass(frozen=True)
class TailScan:
    example_name: str
    p: float
    ambient_dim: int
    points: list[TailPoint] = field(default_factory=list)
    monotone: bool = True
    classification: str = "non-compact-like"


def compress_tail(x: ComplexMatrix, rank: int) -> ComplexMatrix:
    """``(1 - e) x (1 - e)`` for the projection onto the first ``rank`` coordinates."""
    out = np.array(x, copy=True)
    out[..., :rank, :] = 0
    out[..., :, :rank] = 0
    return out


def tail_norm(
    channel: Channel,
    rank: int,
    p: float,
    *,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> float:
    """Exact at p = 2, an ascent lower bound otherwise."""
    p = check_exponent(p)
    n = channel.dim
    if not 1 <= rank < n:
        msg = f"rank must lie in [1, {n}), got {rank}"
        raise BadRankError(msg)
    compress = functools.partial(compress_tail, rank=rank)
    if p == 2:
        sigma, _ = top_singular(channel, settings.seed, compress)
        return sigma

    tail = np.arange(rank, n)
    units = np.zeros((len(tail), n, n), dtype=np.complex128)
    units[np.arange(len(tail)), tail, tail] = 1.0
    uniform = compress(np.eye(n, dtype=np.complex128))[None]
    children = spawn_seeds(settings.seed, settings.restarts)
    noise = np.stack([complex_gaussian(make_rng(s), (n, n)) for s in children])
    value, _ = projected_ascent(
        channel.apply,
        channel.apply_hs_adjoint,
        np.concatenate([units, uniform, noise]),
        p,
        settings=settings,
        project=compress,
    )
    return value


def example_channel(
    example: str,
    truncation: int = DEFAULT_TRUNCATION,
    ratio: float = 0.5,
) -> Channel:
    if example not in TAIL_EXAMPLES:
        msg = f"no tail scan for {example!r}; known: {', '.join(TAIL_EXAMPLES)}"
        raise UnknownExampleError(msg)
    if example == "pinching":
        return channel_zoo("pinching", n=truncation)
    if example == "shift_average":
        return channel_zoo("shift_average", truncation=truncation)
    return channel_zoo("damped_pinching", truncation=truncation, ratio=ratio)


def scan(
    example: str,
    p: float,
    ranks: Sequence[int],
    *,
    truncation: int = DEFAULT_TRUNCATION,
    ratio: float = 0.5,
    threshold: float = COMPACT_THRESHOLD,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = DEFAULT_ASCENT,
) -> TailScan:
    """Tail norms of a zoo example over increasing ranks."""
    channel = example_channel(example, truncation, ratio)
    ordered = sorted(set(ranks))
    if not ordered:
        msg = "at least one rank is required"
        raise BadRankError(msg)
    points = [
        TailPoint(rank=r, tail_norm=tail_norm(channel, r, p, settings=settings))
        for r in ordered
    ]
    monotone = all(
        later.tail_norm <= earlier.tail_norm + tolerances.conv_tol
        for earlier, later in itertools.pairwise(points)
    )
    if not monotone:
        logger.warning("tail norms of %s increase with rank", example)
    final = points[-1].tail_norm
    return TailScan(
        example_name=example,
        p=check_exponent(p),
        ambient_dim=channel.dim,
        points=points,
        monotone=monotone,
        classification="compact-like" if final < threshold else "non-compact-like",
    )

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import asdict, dataclass, fields, replace

from qds_lab._exceptions import BadParameterError

DEFAULT_SEED = 0


@dataclass(frozen=True, kw_only=True)
class Tolerances:
    """Absolute tolerances shared by every module.

    Defaults are calibrated for dim <= 64 with O(1) entries.
    """

    hermitian_tol: float = 1e-10
    psd_tol: float = 1e-10
    trace_tol: float = 1e-10
    recon_tol: float = 1e-9
    orth_tol: float = 1e-9
    tp_tol: float = 1e-9
    un_tol: float = 1e-9
    conv_tol: float = 1e-9
    ds_tol: float = 1e-9
    maj_tol: float = 1e-9
    realize_tol: float = 1e-8
    unitary_tol: float = 1e-9
    mono_tol: float = 1e-10
    strict_floor: float = 1e-12

    def with_overrides(self, overrides: Mapping[str, float] | None) -> Tolerances:
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            msg = f"Unknown tolerance(s): {', '.join(unknown)}"
            raise BadParameterError(msg)
        for name, value in overrides.items():
            if not value >= 0:
                msg = f"Tolerance {name} must be nonnegative, got {value!r}"
                raise BadParameterError(msg)
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@dataclass(frozen=True, kw_only=True)
class AscentSettings:
    """Random-restart projected ascent used for non-exact p->p norms."""

    restarts: int = 32
    iterations: int = 200
    step: float = 0.1
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.restarts < 1 or self.iterations < 0 or self.step <= 0:
            msg = f"Invalid ascent settings: {self!r}"
            raise BadParameterError(msg)


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_ASCENT = AscentSettings()

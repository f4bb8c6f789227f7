"""Property suite behind ``qds-lab selftest``.

Every public operation is exercised by at least one named check on seeded
inputs. A check fails when its property does not hold or when it raises a
library error.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from qds_lab._channels import (
    additive_perturbation,
    adjoint,
    apply,
    certify_qds,
    channel_zoo,
    choi_to_kraus,
    compose,
    depolarizing,
    kraus_to_choi,
    linear_combination,
    pinching,
    positivity_probe,
    random_kraus_map,
    random_mixed_unitary,
    to_superop,
    transpose_map,
    unitary_conjugation,
)
from qds_lab._config import DEFAULT_TOLERANCES, AscentSettings, Tolerances
from qds_lab._entropy import (
    entropy_monotonicity_check,
    unitarity_probe,
    von_neumann_entropy,
)
from qds_lab._exceptions import BadParameterError, QdsLabError
from qds_lab._majorization import (
    birkhoff_decompose,
    build_ds_matrix,
    check_majorization,
    convex_function_test,
    realize_channel,
)
from qds_lab._matcore import (
    eig_hermitian,
    gell_mann_basis,
    identity,
    operator_norm,
    schatten_dual,
    schatten_norm,
    spectral_apply,
    trace,
    unvec,
    vec,
)
from qds_lab._norms import (
    contraction_coefficient,
    diagonal_contraction_probe,
    induced_norm,
    interpolation_sweep,
    sweep_violations,
    traceless_norm,
)
from qds_lab._perturbation import (
    deviation_metrics,
    distance_p2,
    perturbation_sweep,
    sampled_trace_deviation,
)
from qds_lab._random import (
    complex_gaussian,
    make_rng,
    random_density,
    random_doubly_stochastic,
    random_hermitian,
    random_pure_state,
    random_unitary,
    spawn_seeds,
)
from qds_lab._truncation import scan, tail_norm

logger = logging.getLogger("qds_lab")

SELFTEST_ASCENT = AscentSettings(restarts=8, iterations=120)
# the 500- and 1000-sample property batches scale from this
SELFTEST_TRIALS = 1000


@dataclass(frozen=True)
class SelftestCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SelftestReport:
    seed: int
    checks: list[SelftestCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


@dataclass(frozen=True)
class _Context:
    rng: np.random.Generator
    tolerances: Tolerances
    settings: AscentSettings
    trials: int = SELFTEST_TRIALS


CheckResult = tuple[bool, str]


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol


def _check_eig_hermitian(ctx: _Context) -> CheckResult:
    spectrum = eig_hermitian(np.array([[0.5, 0.3], [0.3, 0.5]]))
    ok = np.allclose(spectrum.eigenvalues, [0.8, 0.2], atol=1e-12)
    return ok, f"eigenvalues {spectrum.eigenvalues.tolist()}"


def _check_spectral_apply(ctx: _Context) -> CheckResult:
    rho = random_density(4, ctx.rng)
    root = spectral_apply(rho, np.sqrt, domain=(0.0, math.inf))
    err = schatten_norm(root @ root - rho, 2)
    return err < 1e-10, f"sqrt residual {err:.2e}"


def _check_schatten_norm(ctx: _Context) -> CheckResult:
    a = np.diag([3.0, 4.0]).astype(np.complex128)
    values = [schatten_norm(a, p) for p in (1, 2, math.inf)]
    return np.allclose(values, [7.0, 5.0, 4.0]), f"norms {values}"


def _check_schatten_dual(ctx: _Context) -> CheckResult:
    a = complex_gaussian(ctx.rng, (4, 4))
    b = schatten_dual(a, 3.0)
    pairing = trace(b @ a)
    ok = _close(pairing.real, schatten_norm(a, 3.0), 1e-10)
    ok = ok and abs(pairing.imag) < 1e-10 and _close(schatten_norm(b, 1.5), 1, 1e-10)
    return ok, f"pairing {pairing:.6f}"


def _check_trace(ctx: _Context) -> CheckResult:
    t = trace(random_density(5, ctx.rng))
    return _close(t.real, 1, 1e-12) and abs(t.imag) < 1e-12, f"trace {t}"


def _check_gell_mann(ctx: _Context) -> CheckResult:
    basis = np.stack(gell_mann_basis(3))
    gram = np.einsum("aij,bij->ab", basis.conj(), basis)
    traces = np.abs(np.trace(basis, axis1=1, axis2=2))
    ok = len(basis) == 8 and np.allclose(gram, np.eye(8)) and traces.max() < 1e-12
    return ok, f"{len(basis)} elements"


def _check_vec(ctx: _Context) -> CheckResult:
    x = complex_gaussian(ctx.rng, (3, 3))
    ok = np.array_equal(unvec(vec(x), 3), x) and vec(x)[1] == x[1, 0]
    return bool(ok), "column stacking"


def _check_apply(ctx: _Context) -> CheckResult:
    rho = random_pure_state(4, ctx.rng)
    out = apply(depolarizing(0.0, 4), rho)
    err = schatten_norm(out - identity(4) / 4, 2)
    return err < 1e-12, f"residual {err:.2e}"


def _check_adjoint(ctx: _Context) -> CheckResult:
    phi = random_kraus_map(3, ctx.rng, rank=3)
    x, y = complex_gaussian(ctx.rng, (2, 3, 3))
    lhs = trace(y @ phi.apply(x))
    rhs = trace(adjoint(phi).apply(y) @ x)
    return abs(lhs - rhs) < 1e-10, f"|difference| {abs(lhs - rhs):.2e}"


def _check_conversions(ctx: _Context) -> CheckResult:
    phi = random_kraus_map(3, ctx.rng, rank=2)
    choi = kraus_to_choi(phi.kraus)
    rebuilt = choi_to_kraus(choi)
    x = complex_gaussian(ctx.rng, (3, 3))
    via_kraus = np.einsum("kij,jl,kml->im", rebuilt, x, rebuilt.conj())
    via_superop = unvec(to_superop(phi) @ vec(x), 3)
    err = max(
        schatten_norm(via_kraus - phi.apply(x), 2),
        schatten_norm(via_superop - phi.apply(x), 2),
    )
    return err < 1e-10 and len(rebuilt) == 2, f"residual {err:.2e}"


def _check_certify(ctx: _Context) -> CheckResult:
    qds = [
        depolarizing(t, n)
        for t in (0.0, 0.25, 0.5, 1.0)
        for n in (2, 4)
    ]
    qds += [pinching(4), random_mixed_unitary(3, ctx.rng)]
    good = all(certify_qds(c, tolerances=ctx.tolerances).is_qds for c in qds)
    transpose = certify_qds(transpose_map(3), tolerances=ctx.tolerances)
    ok = good and not transpose.is_qds and _close(transpose.choi_min_eig, -1, 1e-10)
    return ok, f"transpose choi_min {transpose.choi_min_eig:.3f}"


def _check_zoo(ctx: _Context) -> CheckResult:
    u = random_unitary(3, ctx.rng)
    built = [
        channel_zoo("identity", n=3),
        channel_zoo("depolarizing", t=0.5, n=3),
        channel_zoo("pinching", n=3),
        channel_zoo("mixed_unitary", weights=[0.5, 0.5], unitaries=[u, u.conj()]),
        channel_zoo("unitary", u=u),
        channel_zoo("shift_average", truncation=8),
        channel_zoo("damped_pinching", truncation=8),
        channel_zoo("transpose", n=3),
    ]
    shift = certify_qds(built[5], tolerances=ctx.tolerances)
    ok = _close(shift.tp_residual, 0.5, 1e-12)
    return ok, f"{len(built)} examples built"


def _check_algebra(ctx: _Context) -> CheckResult:
    u = random_unitary(3, ctx.rng)
    composed = compose(pinching(3), unitary_conjugation(u))
    mixture = linear_combination([composed, depolarizing(0.0, 3)], [0.5, 0.5])
    perturbed = additive_perturbation(depolarizing(0.5, 3), 0.1)
    ok = certify_qds(mixture, tolerances=ctx.tolerances).is_qds
    ok = ok and not certify_qds(perturbed, tolerances=ctx.tolerances).is_qds
    return ok, "compose, linear_combination, additive_perturbation"


def _check_positivity_probe(ctx: _Context) -> CheckResult:
    probe = positivity_probe(transpose_map(3), seed=int(ctx.rng.integers(2**32)))
    return probe.positive, f"min eigenvalue {probe.min_eigenvalue:.2e}"


def _check_induced_norm(ctx: _Context) -> CheckResult:
    phi = random_mixed_unitary(4, ctx.rng)
    forward = induced_norm(phi, 2, tolerances=ctx.tolerances, settings=ctx.settings)
    backward = induced_norm(
        adjoint(phi),
        2,
        tolerances=ctx.tolerances,
        settings=ctx.settings,
    )
    ok = _close(forward.lower_bound, 1, 1e-8) and _close(
        forward.lower_bound,
        backward.lower_bound,
        2e-8,
    )
    return ok, f"||Phi||_2 = {forward.lower_bound:.12f}"


def _check_traceless_norm(ctx: _Context) -> CheckResult:
    values = [
        traceless_norm(depolarizing(t, 3), 2, tolerances=ctx.tolerances).upper_bound
        for t in (0.0, 0.25, 0.5, 0.75, 1.0)
    ]
    ok = np.allclose(values, [0.0, 0.25, 0.5, 0.75, 1.0], atol=1e-10)
    return bool(ok), f"values {values}"


def _check_interpolation(ctx: _Context) -> CheckResult:
    phi = random_mixed_unitary(3, ctx.rng)
    results = interpolation_sweep(
        phi,
        [1, 1.5, 2, 3, math.inf],
        tolerances=ctx.tolerances,
        settings=ctx.settings,
    )
    bad = sweep_violations(results)
    return not bad, f"violations at p={bad}"


def _check_contraction_probe(ctx: _Context) -> CheckResult:
    probe = diagonal_contraction_probe(
        depolarizing(0.5, 3),
        2,
        tolerances=ctx.tolerances,
    )
    ok = probe.exhaustive and probe.scanned == 6 and len(probe.pairs) == 3
    return ok, f"{len(probe.pairs)} of {probe.scanned} projections contract"


def _check_contraction_coefficient(ctx: _Context) -> CheckResult:
    value = contraction_coefficient(depolarizing(0.25, 4))
    return _close(value, 0.25, 1e-10), f"coefficient {value:.12f}"


def _majorized_pair(ctx: _Context, n: int = 4) -> tuple[np.ndarray, np.ndarray]:
    sigma = random_density(n, ctx.rng)
    rho = random_mixed_unitary(n, ctx.rng).apply(sigma)
    return (rho + rho.conj().T) / 2, sigma


def _check_majorization(ctx: _Context) -> CheckResult:
    rho, sigma = _majorized_pair(ctx)
    forward = check_majorization(rho, sigma, tolerances=ctx.tolerances)
    backward = check_majorization(identity(4) / 4, random_pure_state(4, ctx.rng))
    return forward.holds and backward.holds, "rho = Phi(sigma) and I/n < pure"


def _check_ds_matrix(ctx: _Context) -> CheckResult:
    lam_r = np.array([0.4, 0.35, 0.25])
    lam_s = np.array([0.6, 0.3, 0.1])
    d = build_ds_matrix(lam_r, lam_s, tolerances=ctx.tolerances).entries
    err = float(np.abs(d @ lam_s - lam_r).max())
    sums = max(np.abs(d.sum(axis=0) - 1).max(), np.abs(d.sum(axis=1) - 1).max())
    return err < 1e-12 and sums < 1e-12, f"residual {err:.2e}"


def _check_birkhoff(ctx: _Context) -> CheckResult:
    n = 5
    d = random_doubly_stochastic(n, ctx.rng, terms=8)
    decomposition = birkhoff_decompose(d, tolerances=ctx.tolerances)
    err = float(np.abs(decomposition.reconstruct() - d).max())
    terms = len(decomposition.weights)
    ok = err < 1e-10 and terms <= (n - 1) ** 2 + 1
    return ok, f"{terms} terms, residual {err:.2e}"


def _check_realize(ctx: _Context) -> CheckResult:
    rho, sigma = _majorized_pair(ctx)
    certificate = realize_channel(rho, sigma, tolerances=ctx.tolerances)
    residual = certificate.realize_residual or 0.0
    return residual < ctx.tolerances.realize_tol, f"residual {residual:.2e}"


def _check_convex(ctx: _Context) -> CheckResult:
    rho, sigma = _majorized_pair(ctx)
    report = convex_function_test(rho, sigma, tolerances=ctx.tolerances)
    return report.majorized and not report.violations, f"{len(report.checks)} checks"


def _check_entropy(ctx: _Context) -> CheckResult:
    value = von_neumann_entropy(identity(4) / 4)
    pure = von_neumann_entropy(random_pure_state(4, ctx.rng))
    ok = _close(value, math.log(4), 1e-12) and abs(pure) < 1e-9
    return ok, f"S(I/4) = {value:.12f}"


def _check_entropy_monotonicity(ctx: _Context) -> CheckResult:
    report = entropy_monotonicity_check(
        depolarizing(0.0, 4),
        random_pure_state(4, ctx.rng),
        tolerances=ctx.tolerances,
    )
    random_report = entropy_monotonicity_check(
        random_mixed_unitary(4, ctx.rng),
        random_density(4, ctx.rng),
        tolerances=ctx.tolerances,
    )
    ok = _close(report.delta, math.log(4), 1e-9) and random_report.within_bound
    return ok, f"delta {report.delta:.12f}"


def _check_unitarity(ctx: _Context) -> CheckResult:
    u = unitary_conjugation(random_unitary(3, ctx.rng))
    ok = unitarity_probe(u, tolerances=ctx.tolerances) and not unitarity_probe(
        depolarizing(0.5, 3),
        tolerances=ctx.tolerances,
    )
    return ok, "unitary vs depolarizing"


def _check_deviation(ctx: _Context) -> CheckResult:
    psi = additive_perturbation(depolarizing(0.5, 3), 0.1)
    delta_tr, delta_un = deviation_metrics(psi)
    seed = int(ctx.rng.integers(2**32))
    sampled = sampled_trace_deviation(psi, samples=2048, seed=seed)
    # a = E_00 gives delta_tr = eps and delta_un = eps * n
    ok = _close(delta_tr, 0.1, 1e-12) and _close(delta_un, 0.3, 1e-12)
    ok = ok and 0.9 * delta_tr <= sampled <= delta_tr + 1e-12
    return ok, f"closed {delta_tr:.6f}, sampled {sampled:.6f}"


def _check_distance(ctx: _Context) -> CheckResult:
    phi = random_mixed_unitary(3, ctx.rng)
    same = distance_p2(phi, phi)
    apart = distance_p2(depolarizing(1.0, 3), depolarizing(0.0, 3))
    return same < 1e-12 and apart > 0.5, f"distances {same:.2e}, {apart:.6f}"


def _check_perturbation_sweep(ctx: _Context) -> CheckResult:
    sweep = perturbation_sweep(
        depolarizing(0.5, 3),
        "additive",
        [1e-1, 1e-2, 1e-3, 1e-4],
        tolerances=ctx.tolerances,
        settings=ctx.settings,
    )
    last = sweep.reports[-1].distance_p2
    ok = sweep.distances_decrease and sweep.norm_stable and last < 1e-3
    return ok, f"final distance {last:.2e}"


def _check_tail_norm(ctx: _Context) -> CheckResult:
    channel = channel_zoo("damped_pinching", truncation=16, ratio=0.5)
    values = [tail_norm(channel, r, 2) for r in (2, 4, 8)]
    expected = [0.5 ** (r + 1) for r in (2, 4, 8)]
    return bool(np.allclose(values, expected, atol=1e-10)), f"tails {values}"


def _check_scan(ctx: _Context) -> CheckResult:
    shift = scan(
        "shift_average",
        2,
        [2, 4, 8],
        truncation=16,
        tolerances=ctx.tolerances,
        settings=ctx.settings,
    )
    pinched = scan("pinching", 2, [2, 4], truncation=8, tolerances=ctx.tolerances)
    ok = all(pt.tail_norm >= 0.49 for pt in shift.points)
    ok = ok and all(_close(pt.tail_norm, 1, 1e-10) for pt in pinched.points)
    return ok, f"shift classification {shift.classification}"


def _degenerate_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """``u diag(lam) u^H`` with eigenvalues drawn from a few repeated levels."""
    levels = rng.integers(-2, 3, size=n).astype(np.float64)
    u = random_unitary(n, rng)
    h = (u * levels) @ u.conj().T
    return (h + h.conj().T) / 2


def _batch_eig_reconstruction(ctx: _Context) -> CheckResult:
    worst = 0.0
    for i in range(ctx.trials):
        n = 2 + i % 15
        if i % 2:
            h = random_hermitian(n, ctx.rng)
        else:
            h = _degenerate_hermitian(n, ctx.rng)
        spectrum = eig_hermitian(h, tolerances=ctx.tolerances)
        worst = max(worst, operator_norm(spectrum.reconstruct() - h))
    return worst < ctx.tolerances.recon_tol, f"{ctx.trials} matrices, worst {worst:.2e}"


def _batch_certify(ctx: _Context) -> CheckResult:
    trials = max(1, ctx.trials // 10)
    worst = 0.0
    for i in range(trials):
        report = certify_qds(
            random_mixed_unitary(2 + i % 7, ctx.rng),
            tolerances=ctx.tolerances,
        )
        if not report.is_qds:
            return False, f"trial {i} is not QDS"
        worst = max(worst, report.tp_residual, report.unital_residual)
    return worst < 1e-10, f"{trials} channels, worst residual {worst:.2e}"


def _batch_interpolation(ctx: _Context) -> CheckResult:
    trials = max(1, ctx.trials // 20)
    for i in range(trials):
        results = interpolation_sweep(
            random_mixed_unitary(2 + i % 5, ctx.rng),
            [1, 1.5, 2, 3, math.inf],
            tolerances=ctx.tolerances,
            settings=ctx.settings,
        )
        bad = sweep_violations(results)
        if bad:
            return False, f"trial {i}: violations at p={bad}"
    return True, f"{trials} channels"


def _batch_majorization(ctx: _Context) -> CheckResult:
    trials = max(1, ctx.trials // 2)
    worst = 0.0
    for i in range(trials):
        rho, sigma = _majorized_pair(ctx, 2 + i % 7)
        certificate = realize_channel(rho, sigma, tolerances=ctx.tolerances)
        channel = certificate.realizing_channel
        if channel is None:
            return False, f"trial {i}: no realizing channel"
        if not certify_qds(channel, tolerances=ctx.tolerances).is_qds:
            return False, f"trial {i}: realizing channel is not QDS"
        worst = max(worst, certificate.realize_residual or 0.0)
        for p in (1, 1.5, 2, 3, 5, math.inf):
            if schatten_norm(rho, p) > schatten_norm(sigma, p) + 1e-10:
                return False, f"trial {i}: ||rho||_{p} > ||sigma||_{p}"
    ok = worst < ctx.tolerances.realize_tol
    return ok, f"{trials} pairs, worst residual {worst:.2e}"


def _batch_birkhoff(ctx: _Context) -> CheckResult:
    worst = 0.0
    for i in range(ctx.trials):
        n = 2 + i % 7
        d = random_doubly_stochastic(n, ctx.rng, terms=n * n)
        decomposition = birkhoff_decompose(d, tolerances=ctx.tolerances)
        if len(decomposition.weights) > (n - 1) ** 2 + 1:
            return False, f"trial {i}: {len(decomposition.weights)} terms"
        worst = max(worst, float(np.abs(decomposition.reconstruct() - d).max()))
    return worst < 1e-10, f"{ctx.trials} matrices, worst residual {worst:.2e}"


def _batch_entropy(ctx: _Context) -> CheckResult:
    worst = math.inf
    for i in range(ctx.trials):
        n = 2 + i % 7
        report = entropy_monotonicity_check(
            random_mixed_unitary(n, ctx.rng),
            random_density(n, ctx.rng),
            tolerances=ctx.tolerances,
        )
        worst = min(worst, report.delta)
    return worst >= -1e-10, f"{ctx.trials} pairs, smallest change {worst:.2e}"


CHECKS: dict[str, Callable[[_Context], CheckResult]] = {
    "matcore.eig_hermitian": _check_eig_hermitian,
    "matcore.spectral_apply": _check_spectral_apply,
    "matcore.schatten_norm": _check_schatten_norm,
    "matcore.schatten_dual": _check_schatten_dual,
    "matcore.trace": _check_trace,
    "matcore.gell_mann_basis": _check_gell_mann,
    "matcore.vec": _check_vec,
    "channels.apply": _check_apply,
    "channels.adjoint": _check_adjoint,
    "channels.conversions": _check_conversions,
    "channels.certify_qds": _check_certify,
    "channels.channel_zoo": _check_zoo,
    "channels.algebra": _check_algebra,
    "channels.positivity_probe": _check_positivity_probe,
    "norms.induced_norm": _check_induced_norm,
    "norms.traceless_norm": _check_traceless_norm,
    "norms.interpolation_sweep": _check_interpolation,
    "norms.diagonal_contraction_probe": _check_contraction_probe,
    "norms.contraction_coefficient": _check_contraction_coefficient,
    "majorization.check_majorization": _check_majorization,
    "majorization.build_ds_matrix": _check_ds_matrix,
    "majorization.birkhoff_decompose": _check_birkhoff,
    "majorization.realize_channel": _check_realize,
    "majorization.convex_function_test": _check_convex,
    "entropy.von_neumann_entropy": _check_entropy,
    "entropy.entropy_monotonicity_check": _check_entropy_monotonicity,
    "entropy.unitarity_probe": _check_unitarity,
    "perturbation.deviation_metrics": _check_deviation,
    "perturbation.distance_p2": _check_distance,
    "perturbation.perturbation_sweep": _check_perturbation_sweep,
    "truncation.tail_norm": _check_tail_norm,
    "truncation.scan": _check_scan,
    "batch.eig_reconstruction": _batch_eig_reconstruction,
    "batch.certify_qds": _batch_certify,
    "batch.interpolation_sweep": _batch_interpolation,
    "batch.majorization_round_trip": _batch_majorization,
    "batch.birkhoff_decompose": _batch_birkhoff,
    "batch.entropy_monotonicity": _batch_entropy,
}


def run_selftest(
    seed: int = 0,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    settings: AscentSettings = SELFTEST_ASCENT,
    trials: int = SELFTEST_TRIALS,
) -> SelftestReport:
    """Run every check with its own stream derived from ``seed``.

    Batch checks draw ``trials`` random inputs, or a fixed fraction of it.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        msg = f"trials must be a positive integer, got {trials!r}"
        raise BadParameterError(msg)
    checks = []
    streams = spawn_seeds(seed, len(CHECKS))
    for (name, check), stream in zip(CHECKS.items(), streams, strict=True):
        ctx = _Context(
            rng=make_rng(stream),
            tolerances=tolerances,
            settings=settings,
            trials=trials,
        )
        try:
            passed, detail = check(ctx)
        except QdsLabError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        logger.info("selftest %s: %s", name, "ok" if passed else "FAILED")
        checks.append(SelftestCheck(name=name, passed=bool(passed), detail=detail))
    return SelftestReport(seed=seed, checks=checks)

import numpy as np
import pytest
from hypothesis import given

from qds_lab import (
    BadParameterError,
    Channel,
    DimensionMismatchError,
    MalformedInputError,
    NotCompletelyPositiveError,
    Representation,
    UnknownExampleError,
    additive_perturbation,
    adjoint,
    apply,
    certify_qds,
    channel_zoo,
    choi_to_kraus,
    compose,
    damped_pinching,
    depolarizing,
    identity_channel,
    kraus_to_choi,
    linear_combination,
    mixed_unitary,
    pinching,
    positivity_probe,
    random_kraus_map,
    random_mixed_unitary,
    random_unitary,
    shift_average,
    to_superop,
    trace,
    transpose_map,
    unitary_conjugation,
    unvec,
    vec,
)
from qds_lab._channels import DEPOLARIZING_MAX_DIM
from qds_lab._matcore import identity
from qds_lab._random import complex_gaussian, make_rng
from tests.strategies import dims, seeds


@pytest.fixture()
def kraus_map(rng):
    return random_kraus_map(3, rng, rank=2)


def test_identity_channel_choi_is_maximally_entangled():
    channel = identity_channel(2)

    omega = vec(identity(2))
    np.testing.assert_allclose(channel.choi, np.outer(omega, omega.conj()))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_completely_depolarizing_choi_is_identity_over_n(n):
    np.testing.assert_allclose(
        depolarizing(0.0, n).choi,
        np.eye(n * n) / n,
        atol=1e-12,
    )


@pytest.mark.parametrize("t", [0.0, 0.3, 1.0])
def test_depolarizing_formula(t, rng):
    x = complex_gaussian(rng, (3, 3))

    out = apply(depolarizing(t, 3), x)

    expected = t * x + (1 - t) * trace(x) / 3 * identity(3)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_depolarizing_kraus_operators_are_weighted_weyl_unitaries():
    channel = depolarizing(0.25, 3)

    ops = channel.kraus
    assert ops.shape == (9, 3, 3)
    np.testing.assert_allclose(
        np.einsum("kab,kcb->kac", ops, ops.conj()),
        np.array([0.25 + 0.75 / 9] + [0.75 / 9] * 8)[:, None, None] * identity(3),
        atol=1e-12,
    )


def test_completely_preserving_depolarizing_has_one_kraus_operator():
    assert depolarizing(1.0, 4).kraus.shape == (1, 4, 4)


def test_depolarizing_at_the_dimension_cap(rng):
    n = DEPOLARIZING_MAX_DIM
    x = complex_gaussian(rng, (n, n))

    out = apply(depolarizing(0.5, n), x)

    expected = 0.5 * x + 0.5 * trace(x) / n * identity(n)
    np.testing.assert_allclose(out, expected, atol=1e-10)


def test_depolarizing_rejects_dimensions_above_the_cap():
    with pytest.raises(BadParameterError, match="at most 32"):
        depolarizing(0.5, DEPOLARIZING_MAX_DIM + 1)


@pytest.mark.parametrize("representation", ["choi", "superop"])
def test_representations_apply_the_same_map(kraus_map, rng, representation):
    x = complex_gaussian(rng, (4, 3, 3))
    if representation == "choi":
        other = Channel.from_choi(kraus_map.choi)
    else:
        other = Channel.from_superop(kraus_map.superop)

    np.testing.assert_allclose(other.apply(x), kraus_map.apply(x), atol=1e-12)
    np.testing.assert_allclose(other.superop, kraus_map.superop, atol=1e-12)


def test_superop_acts_on_column_stacked_vectors(kraus_map, rng):
    x = complex_gaussian(rng, (3, 3))

    via_superop = unvec(to_superop(kraus_map) @ vec(x), 3)

    np.testing.assert_allclose(via_superop, kraus_map.apply(x), atol=1e-12)


def test_choi_to_kraus_keeps_rank(kraus_map):
    rebuilt = choi_to_kraus(kraus_map.choi)

    assert rebuilt.shape == (2, 3, 3)
    np.testing.assert_allclose(kraus_to_choi(rebuilt), kraus_map.choi, atol=1e-12)


def test_choi_to_kraus_rejects_non_cp_maps():
    with pytest.raises(NotCompletelyPositiveError):
        choi_to_kraus(transpose_map(2).choi)


@given(seed=seeds, n=dims)
def test_adjoint_satisfies_trace_duality(seed, n):
    rng = make_rng(seed)
    x, y = complex_gaussian(rng, (2, n, n))
    phi = random_kraus_map(n, rng, rank=2)

    for channel in (phi, Channel.from_superop(phi.superop)):
        lhs = trace(y @ channel.apply(x))
        rhs = trace(adjoint(channel).apply(y) @ x)
        assert abs(lhs - rhs) < 1e-10


def test_apply_checks_dimension():
    with pytest.raises(DimensionMismatchError):
        apply(depolarizing(0.5, 3), np.eye(2))


def test_from_kraus_rejects_bad_shapes():
    with pytest.raises(MalformedInputError):
        Channel.from_kraus(np.zeros((2, 2, 3)))


def test_from_choi_rejects_non_square_sizes():
    with pytest.raises(MalformedInputError, match="not a square"):
        Channel.from_choi(np.eye(5))


@pytest.mark.parametrize(
    "channel",
    [
        depolarizing(0.0, 2),
        depolarizing(0.5, 4),
        depolarizing(1.0, 3),
        pinching(4),
        identity_channel(3),
    ],
    ids=lambda c: f"{c.name}-{c.dim}",
)
def test_certify_accepts_qds_examples(channel):
    report = certify_qds(channel)

    assert report.is_qds
    assert report.tp_residual < 1e-12
    assert report.unital_residual < 1e-12
    assert report.choi_min_eig >= -1e-12


@given(seed=seeds, n=dims)
def test_random_mixed_unitary_is_qds(seed, n):
    assert certify_qds(random_mixed_unitary(n, make_rng(seed))).is_qds


def test_certify_reports_full_rank_choi_minimum():
    # Choi of the depolarizing map is t |omega><omega| + (1 - t) 1 / n
    assert certify_qds(depolarizing(0.5, 2)).choi_min_eig == pytest.approx(0.25)


def test_transpose_is_positive_but_not_qds():
    channel = transpose_map(3)

    report = certify_qds(channel)
    probe = positivity_probe(channel, trials=64, seed=3)

    assert not report.is_qds
    assert report.choi_min_eig == pytest.approx(-1.0)
    assert report.tp_residual < 1e-12
    assert probe.positive
    assert probe.trials == 64


def test_shift_average_leaks_half_of_the_last_basis_vector():
    report = certify_qds(shift_average(6))

    assert report.tp_residual == pytest.approx(0.5)
    assert report.unital_residual == pytest.approx(0.5)
    assert not report.is_qds


def test_damped_pinching_default_weights_decay_geometrically():
    channel = damped_pinching(truncation=4, ratio=0.5)

    out = channel.apply(identity(4))

    np.testing.assert_allclose(np.diag(out).real, [0.5, 0.25, 0.125, 0.0625])
    assert channel.params["N"] == 4


def test_damped_pinching_checks_weight_count():
    with pytest.raises(BadParameterError):
        damped_pinching(weights=[1.0, 0.5], truncation=3)


@pytest.mark.parametrize(
    ("factory", "kwargs"),
    [
        (depolarizing, {"t": 1.5, "n": 2}),
        (depolarizing, {"t": 0.5, "n": 0}),
        (mixed_unitary, {"weights": [0.5, 0.4], "unitaries": [np.eye(2)] * 2}),
        (mixed_unitary, {"weights": [1.0], "unitaries": [2 * np.eye(2)]}),
        (unitary_conjugation, {"u": [[1.0, 1.0], [0.0, 1.0]]}),
        (shift_average, {"truncation": 1}),
    ],
)
def test_constructors_validate_parameters(factory, kwargs):
    with pytest.raises(BadParameterError):
        factory(**kwargs)


def test_channel_zoo_builds_named_examples():
    channel = channel_zoo("depolarizing", t=0.25, n=3)

    assert channel.name == "depolarizing"
    assert channel.params == {"t": 0.25, "n": 3}


def test_channel_zoo_rejects_unknown_names():
    with pytest.raises(UnknownExampleError, match="known:"):
        channel_zoo("amplitude_damping", n=2)


def test_channel_zoo_rejects_unknown_parameters():
    with pytest.raises(BadParameterError, match="bad parameters for pinching"):
        channel_zoo("pinching", n=2, t=0.5)


def test_pinching_is_idempotent(rng):
    x = complex_gaussian(rng, (3, 3))
    once = pinching(3)

    twice = compose(once, once)

    np.testing.assert_allclose(twice.apply(x), once.apply(x), atol=1e-12)


def test_compose_applies_inner_first(rng):
    u = random_unitary(3, rng)
    x = complex_gaussian(rng, (3, 3))

    composed = compose(pinching(3), unitary_conjugation(u))

    expected = pinching(3).apply(u @ x @ u.conj().T)
    np.testing.assert_allclose(composed.apply(x), expected, atol=1e-12)


def test_compose_rejects_different_dims():
    with pytest.raises(DimensionMismatchError):
        compose(pinching(2), pinching(3))


def test_convex_combination_stays_kraus_and_qds(rng):
    mix = linear_combination(
        [depolarizing(0.0, 3), unitary_conjugation(random_unitary(3, rng))],
        [0.3, 0.7],
    )

    assert mix.representation is Representation.KRAUS
    assert certify_qds(mix).is_qds


def test_difference_is_built_as_superop():
    diff = linear_combination([pinching(2), identity_channel(2)], [1.0, -1.0])

    assert diff.representation is Representation.SUPEROP
    x = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=np.complex128)
    np.testing.assert_allclose(diff.apply(x), [[0, -2], [-3, 0]], atol=1e-12)


def test_additive_perturbation_breaks_trace_preservation():
    psi = additive_perturbation(depolarizing(0.5, 3), 0.1)

    report = certify_qds(psi)

    assert not report.is_qds
    assert report.tp_residual == pytest.approx(0.1)
    assert report.unital_residual == pytest.approx(0.3)


def test_additive_perturbation_checks_direction_shape():
    with pytest.raises(DimensionMismatchError):
        additive_perturbation(pinching(3), 0.1, np.eye(2))

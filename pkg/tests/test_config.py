import math

import pytest

from qds_lab import AscentSettings, BadParameterError, Tolerances


def test_overrides_replace_named_tolerances():
    tolerances = Tolerances().with_overrides({"tp_tol": 1e-6, "maj_tol": 0})

    assert tolerances.tp_tol == 1e-6
    assert tolerances.maj_tol == 0.0
    assert tolerances.un_tol == Tolerances().un_tol


@pytest.mark.parametrize("overrides", [None, {}])
def test_no_overrides_returns_same_instance(overrides):
    tolerances = Tolerances()

    assert tolerances.with_overrides(overrides) is tolerances


def test_unknown_tolerance_is_rejected():
    with pytest.raises(BadParameterError, match="Unknown tolerance"):
        Tolerances().with_overrides({"tp_tol": 1e-6, "speed_tol": 1.0})


@pytest.mark.parametrize("value", [-1e-9, math.nan])
def test_negative_tolerance_is_rejected(value):
    with pytest.raises(BadParameterError, match="nonnegative"):
        Tolerances().with_overrides({"psd_tol": value})


def test_as_dict_lists_every_tolerance():
    values = Tolerances().as_dict()

    assert values["hermitian_tol"] == 1e-10
    assert values["realize_tol"] == 1e-8
    assert len(values) == 14


@pytest.mark.parametrize(
    "kwargs",
    [{"restarts": 0}, {"iterations": -1}, {"step": 0.0}],
)
def test_invalid_ascent_settings(kwargs):
    with pytest.raises(BadParameterError):
        AscentSettings(**kwargs)

import json
import math

import numpy as np
import pytest

from qds_lab import (
    Channel,
    InducedNormResult,
    MalformedInputError,
    NormMethod,
    Representation,
    UsageError,
    channel_from_json,
    channel_to_json,
    depolarizing,
    matrix_from_json,
    matrix_to_json,
    random_kraus_map,
    scan,
    transpose_map,
)
from qds_lab._matcore import identity
from qds_lab._random import complex_gaussian
from qds_lab._serialization import dumps, load_json, to_jsonable


def test_matrix_entries_are_row_major_pairs():
    assert matrix_to_json(np.array([[1.0, 2.0], [3.0, 4.0]])) == {
        "dim": 2,
        "entries": [[1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [4.0, 0.0]],
    }


def test_complex_matrix_entries():
    encoded = matrix_to_json(np.array([[1 + 2j, 0], [0, -1j]]))

    assert encoded["entries"] == [[1.0, 2.0], [0.0, 0.0], [0.0, 0.0], [0.0, -1.0]]


def test_matrix_from_json_reads_flat_pairs():
    m = matrix_from_json({"dim": 2, "entries": [[1, 0], [0, 1], [0, -1], [2, 0]]})

    np.testing.assert_array_equal(m, [[1, 1j], [-1j, 2]])


@pytest.mark.parametrize("value", [math.inf, -math.inf, math.nan])
def test_non_finite_matrices_are_not_written(value):
    with pytest.raises(MalformedInputError, match="finite"):
        matrix_to_json(np.array([[value, 0.0], [0.0, 1.0]]))


@pytest.mark.parametrize(
    "obj",
    [
        {"dim": 2},
        [[1, 0], [0, 1]],
        {"dim": 2, "entries": [[1, 0], [0, 0], [0, 0]]},
        {"dim": 2, "entries": [[1, 0], [0, 1]]},
        {"dim": 0, "entries": []},
        {"dim": True, "entries": [[1, 0]]},
        {"dim": 1, "entries": [[1, "x"]]},
        {"dim": 1, "entries": [[1, 0, 2]]},
        {"dim": 1, "entries": [1]},
        {"dim": 1, "entries": [[True, 0]]},
        {"dim": 1, "entries": [["inf", 0]]},
        {"dim": 1, "entries": [[1e400, 0]]},
        "matrix",
    ],
)
def test_matrix_from_json_rejects_malformed_input(obj):
    with pytest.raises(MalformedInputError):
        matrix_from_json(obj, name="rho")


@pytest.mark.parametrize("representation", list(Representation))
def test_channel_json_preserves_the_map(rng, representation):
    channel = random_kraus_map(2, rng, rank=2)
    x = complex_gaussian(rng, (2, 2))

    encoded = json.loads(json.dumps(channel_to_json(channel, representation)))
    decoded = channel_from_json(encoded)

    assert encoded["repr"] == representation.value
    assert decoded.representation is representation
    assert decoded.name == "random_kraus"
    assert decoded.params == {"n": 2, "rank": 2}
    np.testing.assert_allclose(decoded.apply(x), channel.apply(x), atol=1e-12)


def test_channel_json_keeps_non_cp_maps_in_their_own_form():
    encoded = channel_to_json(transpose_map(2))

    assert encoded["repr"] == "superop"
    assert encoded["meta"] == {"name": "transpose", "params": {"n": 2}}


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"data": []},
        {"repr": "ptm", "data": []},
        {"repr": "kraus", "data": []},
        {"repr": "kraus", "data": [[[1, 0], [0, 1]]]},
        {"repr": "kraus", "data": [matrix_to_json(np.eye(2)), matrix_to_json([[1]])]},
        {"repr": "choi", "data": matrix_to_json(np.eye(2)), "dim": 2},
        {"repr": "choi", "data": matrix_to_json(np.eye(4)), "dim": 3},
    ],
)
def test_channel_from_json_rejects_malformed_input(obj):
    with pytest.raises(MalformedInputError):
        channel_from_json(obj)


def test_norm_result_is_flattened():
    result = InducedNormResult(
        p=math.inf,
        lower_bound=0.5,
        upper_bound=1.0,
        witness=identity(2),
        method=NormMethod.ASCENT,
    )

    encoded = to_jsonable(result)

    assert encoded["p"] == "inf"
    assert encoded["lower"] == 0.5
    assert encoded["upper"] == 1.0
    assert encoded["method"] == "ascent"
    assert encoded["witness"]["dim"] == 2


def test_tail_scan_points_are_pairs():
    encoded = to_jsonable(scan("pinching", 2, [1, 2], truncation=3))

    assert encoded["points"] == [[1, pytest.approx(1.0)], [2, pytest.approx(1.0)]]
    assert encoded["classification"] == "non-compact-like"


def test_generic_dataclasses_and_numpy_values():
    encoded = to_jsonable(
        {
            "channel": depolarizing(0.5, 2),
            "vector": np.array([1.0, 2.0]),
            "flag": np.bool_(True),
            "count": np.int64(3),
            "pair": (1, 2.5),
        },
    )

    assert encoded["channel"]["repr"] == "kraus"
    assert encoded["vector"] == [1.0, 2.0]
    assert encoded["flag"] is True
    assert encoded["count"] == 3
    assert encoded["pair"] == [1, 2.5]


def test_to_jsonable_rejects_unknown_types():
    with pytest.raises(TypeError, match="Cannot serialize"):
        to_jsonable(object())


def test_dumps_is_strict_json_with_trailing_newline():
    text = dumps({"value": math.nan, "items": [1, 2]})

    assert text.endswith("}\n")
    assert json.loads(text) == {"value": "nan", "items": [1, 2]}


def test_load_json_reads_files(tmp_path):
    path = tmp_path / "matrix.json"
    path.write_text('{"dim": 1, "entries": [[1]]}')

    assert load_json(str(path)) == {"dim": 1, "entries": [[1]]}


def test_load_json_reports_missing_files(tmp_path):
    with pytest.raises(UsageError, match="cannot read"):
        load_json(str(tmp_path / "missing.json"))


def test_load_json_reports_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")

    with pytest.raises(MalformedInputError, match="invalid JSON"):
        load_json(str(path))


def test_channel_built_from_json_is_usable():
    channel = Channel.from_kraus(identity(2))

    decoded = channel_from_json(channel_to_json(channel))

    assert decoded.name == "custom"
    np.testing.assert_array_equal(decoded.kraus, channel.kraus)

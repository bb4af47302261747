import numpy as np
import pytest

from htnav.checkpoint import (
    CheckpointError,
    checkpoint_from_dict,
    checkpoint_to_dict,
    load_checkpoint,
    save_checkpoint,
)
from htnav.optimizer import OptimizerState, ascent_step
from tests.conftest import make_params


def test_round_trip_weights_bit_exact(tmp_path):
    params = make_params(input_dim=4, hidden=(5,), seed=3)
    path = tmp_path / "ckpt.json"
    save_checkpoint(path, params)
    loaded, opt = load_checkpoint(path)
    assert opt is None
    np.testing.assert_array_equal(loaded.weights, params.weights)
    assert loaded.spec == params.spec
    assert loaded.family == params.family
    assert loaded.sigma == params.sigma


def test_round_trip_with_optimizer(tmp_path):
    params = make_params(input_dim=3, seed=1)
    state = OptimizerState.fresh(params.spec.num_weights, eta=0.02)
    g = np.linspace(-1.0, 1.0, params.spec.num_weights)
    state, _ = ascent_step(state, params.weights, g)
    path = tmp_path / "ckpt.json"
    save_checkpoint(path, params, state)
    _, loaded = load_checkpoint(path)
    assert loaded is not None
    np.testing.assert_array_equal(loaded.m, state.m)
    np.testing.assert_array_equal(loaded.v, state.v)
    assert loaded.step_count == 1
    assert loaded.eta == 0.02
    assert loaded.bias_correction == state.bias_correction


def test_rejects_wrong_format():
    doc = checkpoint_to_dict(make_params())
    doc["format"] = "htnav-checkpoint-v9"
    with pytest.raises(CheckpointError, match="format"):
        checkpoint_from_dict(doc)


def test_rejects_missing_keys():
    doc = checkpoint_to_dict(make_params())
    del doc["weights"]
    with pytest.raises(CheckpointError, match="weights"):
        checkpoint_from_dict(doc)


def test_rejects_weight_count_mismatch():
    doc = checkpoint_to_dict(make_params(input_dim=4))
    doc["weights"] = doc["weights"][:-1]
    with pytest.raises(CheckpointError, match="weight count"):
        checkpoint_from_dict(doc)


def test_rejects_unknown_family():
    doc = checkpoint_to_dict(make_params())
    doc["family"] = "student_t"
    with pytest.raises(CheckpointError, match="family"):
        checkpoint_from_dict(doc)


def test_rejects_bad_optimizer_block():
    params = make_params()
    state = OptimizerState.fresh(params.spec.num_weights)
    doc = checkpoint_to_dict(params, state)
    doc["optimizer"]["m"] = doc["optimizer"]["m"][:-2]
    doc["optimizer"]["v"] = doc["optimizer"]["v"][:-2]
    with pytest.raises(CheckpointError, match="moment size"):
        checkpoint_from_dict(doc)
    doc = checkpoint_to_dict(params, state)
    doc["optimizer"]["m"] = doc["optimizer"]["m"][:-2]
    with pytest.raises(CheckpointError, match="optimizer block"):
        checkpoint_from_dict(doc)
    doc = checkpoint_to_dict(params, state)
    del doc["optimizer"]["eta"]
    with pytest.raises(CheckpointError, match="optimizer block"):
        checkpoint_from_dict(doc)


def test_load_rejects_corrupt_file(tmp_path):
    path = tmp_path / "ckpt.json"
    path.write_text("{lol")
    with pytest.raises(CheckpointError, match="not valid JSON"):
        load_checkpoint(path)


def test_checkpoint_dict_is_json_plain():
    import json

    doc = checkpoint_to_dict(make_params(hidden=(3,)), OptimizerState.fresh(23))
    json.dumps(doc)
    assert doc["format"] == "htnav-checkpoint-v1"
    assert all(isinstance(w, float) for w in doc["weights"])

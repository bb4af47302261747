"""Policy checkpoints: JSON documents with exact decimal weights.

A checkpoint captures everything needed to resume or evaluate a policy:
the approximator shape, the family, sigma, the flat weight vector, and
(optionally) the optimizer moments.  Floats are written via repr so a
save/load round-trip is bit-exact.
"""

import json

import numpy as np

from .net import ApproximatorSpec
from .optimizer import OptimizerState
from .policy import FAMILIES, PolicyParameters

CHECKPOINT_FORMAT = "htnav-checkpoint-v1"


class CheckpointError(ValueError):
    """The checkpoint file is missing keys, malformed, or inconsistent."""


def _floats(values) -> list[float]:
    return [float(v) for v in np.asarray(values, dtype=float)]


def checkpoint_to_dict(params: PolicyParameters, opt_state: OptimizerState | None = None) -> dict:
    doc = {
        "format": CHECKPOINT_FORMAT,
        "spec": {
            "input_dim": params.spec.input_dim,
            "hidden_layers": list(params.spec.hidden_layers),
            "activation": params.spec.activation,
            "output_dim": params.spec.output_dim,
        },
        "family": params.family,
        "sigma": float(params.sigma),
        "weights": _floats(params.weights),
    }
    if opt_state is not None:
        doc["optimizer"] = {
            "m": _floats(opt_state.m),
            "v": _floats(opt_state.v),
            "step_count": opt_state.step_count,
            "eta": opt_state.eta,
            "beta1": opt_state.beta1,
            "beta2": opt_state.beta2,
            "epsilon": opt_state.epsilon,
            "bias_correction": opt_state.bias_correction,
        }
    return doc


def save_checkpoint(path, params: PolicyParameters, opt_state: OptimizerState | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(checkpoint_to_dict(params, opt_state), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require(doc: dict, key: str):
    if key not in doc:
        raise CheckpointError(f"checkpoint is missing key {key!r}")
    return doc[key]


def checkpoint_from_dict(doc: dict) -> tuple[PolicyParameters, OptimizerState | None]:
    if not isinstance(doc, dict):
        raise CheckpointError(f"checkpoint must be a mapping, got {type(doc).__name__}")
    fmt = _require(doc, "format")
    if fmt != CHECKPOINT_FORMAT:
        raise CheckpointError(f"unsupported checkpoint format {fmt!r}")
    spec_doc = _require(doc, "spec")
    try:
        spec = ApproximatorSpec(
            input_dim=int(spec_doc["input_dim"]),
            hidden_layers=tuple(int(h) for h in spec_doc["hidden_layers"]),
            activation=spec_doc.get("activation", "tanh"),
            output_dim=int(spec_doc.get("output_dim", 2)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointError(f"bad spec block: {exc}") from exc
    family = _require(doc, "family")
    if family not in FAMILIES:
        raise CheckpointError(f"unknown family {family!r}")
    weights = np.asarray(_require(doc, "weights"), dtype=float)
    if weights.shape != (spec.num_weights,):
        raise CheckpointError(
            f"weight count {weights.shape[0]} does not match spec ({spec.num_weights})"
        )
    try:
        params = PolicyParameters(
            spec=spec, weights=weights, sigma=float(_require(doc, "sigma")), family=family
        )
    except (TypeError, ValueError) as exc:
        raise CheckpointError(str(exc)) from exc
    opt_state = None
    if "optimizer" in doc:
        o = doc["optimizer"]
        try:
            opt_state = OptimizerState(
                m=np.asarray(o["m"], dtype=float),
                v=np.asarray(o["v"], dtype=float),
                step_count=int(o["step_count"]),
                eta=float(o["eta"]),
                beta1=float(o["beta1"]),
                beta2=float(o["beta2"]),
                epsilon=float(o["epsilon"]),
                bias_correction=bool(o["bias_correction"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"bad optimizer block: {exc}") from exc
        if opt_state.m.shape != (spec.num_weights,):
            raise CheckpointError("optimizer moment size does not match the weight count")
    return params, opt_state


def load_checkpoint(path) -> tuple[PolicyParameters, OptimizerState | None]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"checkpoint {path} is not valid JSON: {exc}") from exc
    return checkpoint_from_dict(doc)

"""Model checkpoints: variant tag, shape table, bit-exact float payloads."""

from __future__ import annotations

import numpy as np

from ..errors import CheckpointError
from ..serialize import decode_array, encode_array, read_container, write_container
from .base import MappingModel
from .bilstm import BiLstmModel
from .cnn import CnnModel
from .linear import LinearModel

MODEL_KIND = "mapping-model"
MODEL_VERSION = 1

_VARIANTS = {
    "linear": LinearModel,
    "cnn": CnnModel,
    "bilstm": BiLstmModel,
}


def model_variants() -> tuple[str, ...]:
    return tuple(sorted(_VARIANTS))


def create_model(variant: str, seed: int | None = None,
                 rng: np.random.Generator | None = None, **kwargs) -> MappingModel:
    try:
        cls = _VARIANTS[variant]
    except KeyError:
        raise CheckpointError(
            f"unknown architecture {variant!r}; expected one of "
            f"{{{', '.join(model_variants())}}}") from None
    if rng is None:
        rng = np.random.default_rng(seed)
    if "windows" in kwargs:
        kwargs["windows"] = tuple(kwargs["windows"])
    return cls(rng=rng, **kwargs)


def save_model(model: MappingModel, path) -> None:
    payload = {
        "variant": model.variant,
        "config": model.config(),
        "params": {name: encode_array(p) for name, p in model.params.items()},
    }
    write_container(path, MODEL_KIND, MODEL_VERSION, payload)


def load_model(path) -> MappingModel:
    payload = read_container(path, MODEL_KIND, MODEL_VERSION)
    model = create_model(payload["variant"], seed=0, **payload["config"])
    stored = payload["params"]
    if set(stored) != set(model.params):
        raise CheckpointError(
            f"{path}: parameter names {sorted(stored)} do not match "
            f"{model.variant} ({sorted(model.params)})")
    for name in model.params:
        arr = decode_array(stored[name])
        if arr.shape != model.params[name].shape:
            raise CheckpointError(
                f"{path}: parameter {name!r} has shape {arr.shape}, "
                f"expected {model.params[name].shape}")
        model.params[name] = arr.astype(np.float64)
    model.zero_grads()
    return model

from .adam import AdamState, adam_step
from .base import MappingModel
from .bilstm import BiLstmModel
from .checkpoint import (
    MODEL_VERSION,
    create_model,
    load_model,
    model_variants,
    save_model,
)
from .cnn import CnnModel
from .linear import LinearModel

__all__ = [
    "AdamState",
    "BiLstmModel",
    "CnnModel",
    "LinearModel",
    "MappingModel",
    "MODEL_VERSION",
    "adam_step",
    "create_model",
    "load_model",
    "model_variants",
    "save_model",
]

"""Adam with the folded bias-correction step size.

Per step: alpha_t = lr * sqrt(1 - beta2^t) / (1 - beta1^t) and
theta -= alpha_t * m / (sqrt(v) + eps). The epsilon sits next to the
uncorrected sqrt(v), which pins the exact update values the tests check.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError, ShapeError


class AdamState:
    def __init__(self, params: dict[str, np.ndarray], lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step = 0
        self.m = {name: np.zeros_like(p) for name, p in params.items()}
        self.v = {name: np.zeros_like(p) for name, p in params.items()}


def adam_step(state: AdamState, params: dict[str, np.ndarray],
              grads: dict[str, np.ndarray]) -> None:
    """One in-place Adam update over every named parameter."""
    state.step += 1
    t = state.step
    alpha = state.lr * np.sqrt(1.0 - state.beta2 ** t) / (1.0 - state.beta1 ** t)
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ShapeError(
                f"gradient for {name!r} has shape {g.shape}, parameter {p.shape}")
        if not np.all(np.isfinite(g)):
            raise NumericError(f"non-finite gradient for parameter {name!r}")
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= alpha * m / (np.sqrt(v) + state.eps)

"""Linear map: flatten the phrase row-major and multiply by one matrix."""

from __future__ import annotations

import numpy as np

from .base import MappingModel, uniform_init


class LinearModel(MappingModel):
    variant = "linear"

    def __init__(self, max_len: int = 20, word_dim: int = 200, out_dim: int = 128,
                 rng: np.random.Generator | None = None):
        super().__init__(max_len, word_dim, out_dim)
        rng = rng or np.random.default_rng()
        flat = max_len * word_dim
        self.params = {"weight": uniform_init(rng, (out_dim, flat), flat)}
        self.zero_grads()

    def forward_batch(self, phrases: np.ndarray) -> np.ndarray:
        phrases = self._check_input(phrases, batched=True)
        flat = phrases.reshape(phrases.shape[0], -1)
        self._cache = flat
        return flat @ self.params["weight"].T

    def backward_batch(self, upstream: np.ndarray) -> np.ndarray:
        flat = self._take_cache()
        upstream = self._check_upstream(upstream, flat.shape[0])
        self.grads["weight"] = upstream.T @ flat
        d_flat = upstream @ self.params["weight"]
        return d_flat.reshape(flat.shape[0], self.max_len, self.word_dim)

"""Shared machinery for the three phrase-to-point architectures.

A model maps a (max_len, word_dim) phrase matrix to an out_dim vector.
Forward passes cache activations; backward consumes the cache, fills
``grads`` (overwriting, not accumulating) and returns the gradient with
respect to the phrase input. All math is float64.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError, StateError


class MappingModel:
    variant = "base"

    def __init__(self, max_len: int, word_dim: int, out_dim: int):
        self.max_len = max_len
        self.word_dim = word_dim
        self.out_dim = out_dim
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self._cache = None

    def config(self) -> dict:
        """Constructor arguments needed to rebuild an identical shell."""
        return {"max_len": self.max_len, "word_dim": self.word_dim,
                "out_dim": self.out_dim}

    def _check_input(self, x: np.ndarray, batched: bool) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        want = (self.max_len, self.word_dim)
        if batched:
            if x.ndim != 3 or x.shape[1:] != want:
                raise ShapeError(
                    f"{self.variant}: expected batch of {want} phrases, got {x.shape}")
        elif x.shape != want:
            raise ShapeError(f"{self.variant}: expected phrase {want}, got {x.shape}")
        return x

    def _check_upstream(self, up: np.ndarray, batch: int) -> np.ndarray:
        up = np.asarray(up, dtype=np.float64)
        if up.shape != (batch, self.out_dim):
            raise ShapeError(
                f"{self.variant}: expected upstream ({batch}, {self.out_dim}), got {up.shape}")
        return up

    def _take_cache(self):
        if self._cache is None:
            raise StateError(f"{self.variant}: backward called before forward")
        return self._cache

    def zero_grads(self) -> None:
        for name, p in self.params.items():
            self.grads[name] = np.zeros_like(p)

    def forward(self, phrase: np.ndarray) -> np.ndarray:
        return self.forward_batch(self._check_input(phrase, batched=False)[None])[0]

    def backward(self, upstream: np.ndarray) -> np.ndarray:
        upstream = np.asarray(upstream, dtype=np.float64)
        if upstream.shape != (self.out_dim,):
            raise ShapeError(
                f"{self.variant}: expected upstream ({self.out_dim},), got {upstream.shape}")
        return self.backward_batch(upstream[None])[0]

    def forward_batch(self, phrases: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward_batch(self, upstream: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def uniform_init(rng: np.random.Generator, shape, fan_in: int) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)

"""Convolution over word windows, ReLU, max pool, projection.

One filter bank per window size; each bank convolves over all valid
positions (no padding), the ReLU feature maps are max-pooled over
positions, the pooled blocks are concatenated and projected.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import MappingModel, uniform_init


class CnnModel(MappingModel):
    variant = "cnn"

    def __init__(self, max_len: int = 20, word_dim: int = 200, out_dim: int = 128,
                 windows: tuple[int, ...] = (1, 2, 3, 5), feature_maps: int = 128,
                 rng: np.random.Generator | None = None):
        super().__init__(max_len, word_dim, out_dim)
        if any(s < 1 or s > max_len for s in windows):
            raise ValidationError(f"window sizes {windows} out of range for max_len={max_len}")
        rng = rng or np.random.default_rng()
        self.windows = tuple(windows)
        self.feature_maps = feature_maps
        self.params = {}
        for s in self.windows:
            self.params[f"conv{s}_w"] = uniform_init(
                rng, (feature_maps, s * word_dim), s * word_dim)
            self.params[f"conv{s}_b"] = np.zeros(feature_maps)
        concat = feature_maps * len(self.windows)
        self.params["proj_w"] = uniform_init(rng, (out_dim, concat), concat)
        self.params["proj_b"] = np.zeros(out_dim)
        self.zero_grads()

    def config(self) -> dict:
        cfg = super().config()
        cfg.update({"windows": list(self.windows), "feature_maps": self.feature_maps})
        return cfg

    @staticmethod
    def _window_matrix(phrases: np.ndarray, s: int) -> np.ndarray:
        """(B, T, D) -> (B, T-s+1, s*D) sliding windows of s stacked rows."""
        batch, length, dim = phrases.shape
        positions = length - s + 1
        stacked = np.stack([phrases[:, i:i + positions] for i in range(s)], axis=2)
        return stacked.reshape(batch, positions, s * dim)

    def forward_batch(self, phrases: np.ndarray) -> np.ndarray:
        phrases = self._check_input(phrases, batched=True)
        batch = phrases.shape[0]
        pooled_blocks = []
        cache = {"batch": batch}
        for s in self.windows:
            win = self._window_matrix(phrases, s)
            z = win @ self.params[f"conv{s}_w"].T + self.params[f"conv{s}_b"]
            active = np.maximum(z, 0.0)
            argmax = active.argmax(axis=1)
            pooled = np.take_along_axis(active, argmax[:, None, :], axis=1)[:, 0, :]
            pooled_blocks.append(pooled)
            cache[s] = (win, z, argmax)
        concat = np.concatenate(pooled_blocks, axis=1)
        cache["concat"] = concat
        self._cache = cache
        return concat @ self.params["proj_w"].T + self.params["proj_b"]

    def backward_batch(self, upstream: np.ndarray) -> np.ndarray:
        cache = self._take_cache()
        batch = cache["batch"]
        upstream = self._check_upstream(upstream, batch)
        concat = cache["concat"]
        self.grads["proj_w"] = upstream.T @ concat
        self.grads["proj_b"] = upstream.sum(axis=0)
        d_concat = upstream @ self.params["proj_w"]

        d_phrases = np.zeros((batch, self.max_len, self.word_dim))
        fmaps = self.feature_maps
        for block, s in enumerate(self.windows):
            win, z, argmax = cache[s]
            d_pooled = d_concat[:, block * fmaps:(block + 1) * fmaps]
            d_active = np.zeros_like(z)
            np.put_along_axis(d_active, argmax[:, None, :], d_pooled[:, None, :], axis=1)
            d_z = d_active * (z > 0.0)
            self.grads[f"conv{s}_w"] = np.einsum("bpf,bpk->fk", d_z, win)
            self.grads[f"conv{s}_b"] = d_z.sum(axis=(0, 1))
            d_win = d_z @ self.params[f"conv{s}_w"]
            positions = win.shape[1]
            for i in range(s):
                d_phrases[:, i:i + positions] += d_win[
                    :, :, i * self.word_dim:(i + 1) * self.word_dim]
        return d_phrases

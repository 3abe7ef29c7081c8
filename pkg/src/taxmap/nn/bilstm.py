"""Bidirectional LSTM over the phrase rows, projected to the output space.

Gate layout inside the packed (4H) blocks is [input, forget, cell,
output]. The default readout concatenates the final hidden state of each
direction; per-timestep mean pooling is available via ``readout="mean"``.
Padding rows are consumed like any timestep unless ``mask_padding`` is
set, in which case all-zero rows carry the previous state through.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import MappingModel, uniform_init


def _sigmoid(x):
    return 0.5 * (np.tanh(0.5 * x) + 1.0)


def _lstm_forward(x_seq, wx, wh, b, mask):
    """x_seq (B,T,D), mask (B,T,1) -> (h_seq (B,T,H), per-step cache)."""
    batch, length, _ = x_seq.shape
    hidden = wh.shape[1]
    h = np.zeros((batch, hidden))
    c = np.zeros((batch, hidden))
    h_seq = np.empty((batch, length, hidden))
    cache = []
    for t in range(length):
        x = x_seq[:, t]
        z = x @ wx.T + h @ wh.T + b
        gi = _sigmoid(z[:, :hidden])
        gf = _sigmoid(z[:, hidden:2 * hidden])
        gg = np.tanh(z[:, 2 * hidden:3 * hidden])
        go = _sigmoid(z[:, 3 * hidden:])
        c_cand = gf * c + gi * gg
        tanh_c = np.tanh(c_cand)
        h_cand = go * tanh_c
        m = mask[:, t]
        cache.append((x, h, c, gi, gf, gg, go, tanh_c, m))
        h = m * h_cand + (1.0 - m) * h
        c = m * c_cand + (1.0 - m) * c
        h_seq[:, t] = h
    return h_seq, cache


def _lstm_backward(dh_seq, wx, wh, cache):
    """dh_seq (B,T,H) external gradients into each h_t. Returns
    (dx_seq, dwx, dwh, db)."""
    batch, length, hidden = dh_seq.shape
    dwx = np.zeros_like(wx)
    dwh = np.zeros_like(wh)
    db = np.zeros(4 * hidden)
    dx_seq = np.empty((batch, length, wx.shape[1]))
    dh_carry = np.zeros((batch, hidden))
    dc_carry = np.zeros((batch, hidden))
    for t in reversed(range(length)):
        x, h_prev, c_prev, gi, gf, gg, go, tanh_c, m = cache[t]
        dh = dh_carry + dh_seq[:, t]
        dh_cand = m * dh
        dh_skip = (1.0 - m) * dh
        dc_cand = m * dc_carry
        dc_skip = (1.0 - m) * dc_carry
        d_go = dh_cand * tanh_c
        dc_cand = dc_cand + dh_cand * go * (1.0 - tanh_c ** 2)
        d_gi = dc_cand * gg
        d_gf = dc_cand * c_prev
        d_gg = dc_cand * gi
        dc_carry = dc_cand * gf + dc_skip
        dz = np.concatenate([
            d_gi * gi * (1.0 - gi),
            d_gf * gf * (1.0 - gf),
            d_gg * (1.0 - gg ** 2),
            d_go * go * (1.0 - go),
        ], axis=1)
        dwx += dz.T @ x
        dwh += dz.T @ h_prev
        db += dz.sum(axis=0)
        dx_seq[:, t] = dz @ wx
        dh_carry = dz @ wh + dh_skip
    return dx_seq, dwx, dwh, db


class BiLstmModel(MappingModel):
    variant = "bilstm"

    def __init__(self, max_len: int = 20, word_dim: int = 200, out_dim: int = 128,
                 hidden: int = 200, readout: str = "final",
                 mask_padding: bool = False,
                 rng: np.random.Generator | None = None):
        super().__init__(max_len, word_dim, out_dim)
        if readout not in ("final", "mean"):
            raise ValidationError(f"readout must be 'final' or 'mean', got {readout!r}")
        rng = rng or np.random.default_rng()
        self.hidden = hidden
        self.readout = readout
        self.mask_padding = mask_padding
        self.params = {}
        for direction in ("fwd", "bwd"):
            self.params[f"{direction}_wx"] = uniform_init(
                rng, (4 * hidden, word_dim), word_dim)
            self.params[f"{direction}_wh"] = uniform_init(
                rng, (4 * hidden, hidden), hidden)
            bias = np.zeros(4 * hidden)
            bias[hidden:2 * hidden] = 1.0
            self.params[f"{direction}_b"] = bias
        self.params["proj_w"] = uniform_init(rng, (out_dim, 2 * hidden), 2 * hidden)
        self.params["proj_b"] = np.zeros(out_dim)
        self.zero_grads()

    def config(self) -> dict:
        cfg = super().config()
        cfg.update({"hidden": self.hidden, "readout": self.readout,
                    "mask_padding": self.mask_padding})
        return cfg

    def _mask_for(self, phrases: np.ndarray) -> np.ndarray:
        if not self.mask_padding:
            return np.ones((phrases.shape[0], phrases.shape[1], 1))
        return (np.abs(phrases).sum(axis=2, keepdims=True) > 0.0).astype(np.float64)

    def _readout_weights(self, mask: np.ndarray) -> np.ndarray:
        """(B,T,1) weights combining per-step hidden states into one vector."""
        batch, length, _ = mask.shape
        if self.readout == "final":
            w = np.zeros((batch, length, 1))
            w[:, -1] = 1.0
            return w
        counts = np.maximum(mask.sum(axis=1, keepdims=True), 1.0)
        return mask / counts

    def forward_batch(self, phrases: np.ndarray) -> np.ndarray:
        phrases = self._check_input(phrases, batched=True)
        mask = self._mask_for(phrases)
        reversed_x = phrases[:, ::-1]
        reversed_mask = mask[:, ::-1]

        h_fwd, cache_fwd = _lstm_forward(
            phrases, self.params["fwd_wx"], self.params["fwd_wh"],
            self.params["fwd_b"], mask)
        h_bwd, cache_bwd = _lstm_forward(
            reversed_x, self.params["bwd_wx"], self.params["bwd_wh"],
            self.params["bwd_b"], reversed_mask)

        w_fwd = self._readout_weights(mask)
        w_bwd = self._readout_weights(reversed_mask)
        r_fwd = (h_fwd * w_fwd).sum(axis=1)
        r_bwd = (h_bwd * w_bwd).sum(axis=1)
        concat = np.concatenate([r_fwd, r_bwd], axis=1)
        self._cache = (cache_fwd, cache_bwd, w_fwd, w_bwd, concat)
        return concat @ self.params["proj_w"].T + self.params["proj_b"]

    def backward_batch(self, upstream: np.ndarray) -> np.ndarray:
        cache_fwd, cache_bwd, w_fwd, w_bwd, concat = self._take_cache()
        batch = concat.shape[0]
        upstream = self._check_upstream(upstream, batch)

        self.grads["proj_w"] = upstream.T @ concat
        self.grads["proj_b"] = upstream.sum(axis=0)
        d_concat = upstream @ self.params["proj_w"]
        d_rf, d_rb = d_concat[:, :self.hidden], d_concat[:, self.hidden:]

        dh_seq_fwd = d_rf[:, None, :] * w_fwd
        dh_seq_bwd = d_rb[:, None, :] * w_bwd

        dx_fwd, dwx, dwh, db = _lstm_backward(
            dh_seq_fwd, self.params["fwd_wx"], self.params["fwd_wh"], cache_fwd)
        self.grads["fwd_wx"], self.grads["fwd_wh"], self.grads["fwd_b"] = dwx, dwh, db

        dx_bwd, dwx, dwh, db = _lstm_backward(
            dh_seq_bwd, self.params["bwd_wx"], self.params["bwd_wh"], cache_bwd)
        self.grads["bwd_wx"], self.grads["bwd_wh"], self.grads["bwd_b"] = dwx, dwh, db

        return dx_fwd + dx_bwd[:, ::-1]

"""Numba @njit twins of the kernels in `_kernels_np.py`.

Explicit loops, no fastmath: results must be run-to-run deterministic.
First call per signature pays JIT compilation; `warmup()` triggers it
ahead of any timed section.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_GELU_C = math.sqrt(2.0 / math.pi)
_GELU_A = 0.044715


@njit(cache=True)
def layer_norm_fwd(x, gamma, beta, eps):
    rows, d = x.shape
    y = np.empty_like(x)
    mean = np.empty(rows)
    rstd = np.empty(rows)
    for r in range(rows):
        s = 0.0
        for j in range(d):
            s += x[r, j]
        mu = s / d
        sq = 0.0
        for j in range(d):
            diff = x[r, j] - mu
            sq += diff * diff
        rs = 1.0 / math.sqrt(sq / d + eps)
        mean[r] = mu
        rstd[r] = rs
        for j in range(d):
            y[r, j] = (x[r, j] - mu) * rs * gamma[j] + beta[j]
    return y, mean, rstd


@njit(cache=True)
def layer_norm_bwd(g, x, gamma, mean, rstd):
    rows, d = x.shape
    dx = np.empty_like(x)
    dgamma = np.zeros(d)
    dbeta = np.zeros(d)
    for r in range(rows):
        mu = mean[r]
        rs = rstd[r]
        m1 = 0.0
        m2 = 0.0
        for j in range(d):
            xhat = (x[r, j] - mu) * rs
            dxh = g[r, j] * gamma[j]
            dgamma[j] += g[r, j] * xhat
            dbeta[j] += g[r, j]
            m1 += dxh
            m2 += dxh * xhat
        m1 /= d
        m2 /= d
        for j in range(d):
            xhat = (x[r, j] - mu) * rs
            dxh = g[r, j] * gamma[j]
            dx[r, j] = rs * (dxh - m1 - xhat * m2)
    return dx, dgamma, dbeta


@njit(cache=True)
def softmax_fwd(x):
    rows, d = x.shape
    y = np.empty_like(x)
    for r in range(rows):
        m = x[r, 0]
        for j in range(1, d):
            if x[r, j] > m:
                m = x[r, j]
        s = 0.0
        for j in range(d):
            z = math.exp(x[r, j] - m)
            y[r, j] = z
            s += z
        for j in range(d):
            y[r, j] /= s
    return y


@njit(cache=True)
def softmax_bwd(g, y):
    rows, d = y.shape
    dx = np.empty_like(y)
    for r in range(rows):
        dot = 0.0
        for j in range(d):
            dot += g[r, j] * y[r, j]
        for j in range(d):
            dx[r, j] = y[r, j] * (g[r, j] - dot)
    return dx


@njit(cache=True)
def gelu_fwd(x):
    n = x.shape[0]
    y = np.empty_like(x)
    for i in range(n):
        v = x[i]
        inner = _GELU_C * (v + _GELU_A * v * v * v)
        y[i] = 0.5 * v * (1.0 + math.tanh(inner))
    return y


@njit(cache=True)
def gelu_bwd(g, x):
    n = x.shape[0]
    dx = np.empty_like(x)
    for i in range(n):
        v = x[i]
        inner = _GELU_C * (v + _GELU_A * v * v * v)
        t = math.tanh(inner)
        din = _GELU_C * (1.0 + 3.0 * _GELU_A * v * v)
        dx[i] = g[i] * (0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * din)
    return dx


@njit(cache=True)
def sigmoid_fwd(x):
    n = x.shape[0]
    y = np.empty_like(x)
    for i in range(n):
        v = x[i]
        if v >= 0.0:
            y[i] = 1.0 / (1.0 + math.exp(-v))
        else:
            e = math.exp(v)
            y[i] = e / (1.0 + e)
    return y


@njit(cache=True)
def sigmoid_bwd(g, y):
    n = y.shape[0]
    dx = np.empty_like(y)
    for i in range(n):
        dx[i] = g[i] * y[i] * (1.0 - y[i])
    return dx


@njit(cache=True)
def cross_entropy_fwd(logits, idx):
    rows, d = logits.shape
    probs = np.empty_like(logits)
    losses = np.empty(rows)
    for r in range(rows):
        m = logits[r, 0]
        for j in range(1, d):
            if logits[r, j] > m:
                m = logits[r, j]
        s = 0.0
        for j in range(d):
            z = math.exp(logits[r, j] - m)
            probs[r, j] = z
            s += z
        for j in range(d):
            probs[r, j] /= s
        losses[r] = math.log(s) + m - logits[r, idx[r]]
    return losses, probs


@njit(cache=True)
def bce_logits_fwd(logits, targets):
    n = logits.shape[0]
    out = np.empty_like(logits)
    for i in range(n):
        x = logits[i]
        mx = x if x > 0.0 else 0.0
        out[i] = mx - x * targets[i] + math.log1p(math.exp(-abs(x)))
    return out


@njit(cache=True)
def adam_update(p, g, m, v, lr, beta1, beta2, eps, t):
    n = p.shape[0]
    c1 = 1.0 - beta1**t
    c2 = 1.0 - beta2**t
    for i in range(n):
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i]
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i]
        p[i] -= lr * (m[i] / c1) / (math.sqrt(v[i] / c2) + eps)


def warmup():
    """Compile every kernel on tiny inputs (keeps JIT cost out of timings)."""
    x2 = np.ones((2, 3))
    g2 = np.ones((2, 3))
    one = np.ones(3)
    y, mean, rstd = layer_norm_fwd(x2, one, np.zeros(3), 1e-5)
    layer_norm_bwd(g2, x2, one, mean, rstd)
    sm = softmax_fwd(x2)
    softmax_bwd(g2, sm)
    x1 = np.ones(4)
    gelu_bwd(x1, gelu_fwd(x1))
    sigmoid_bwd(x1, sigmoid_fwd(x1))
    cross_entropy_fwd(x2, np.zeros(2, dtype=np.int64))
    bce_logits_fwd(x1, np.zeros(4))
    adam_update(x1.copy(), x1, np.zeros(4), np.zeros(4), 1e-3, 0.9, 0.999, 1e-8, 1)

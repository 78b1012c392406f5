"""Pure-numpy reference implementations of the hot kernels.

Every function here has a numba twin in `_kernels_nb.py` with the same
signature. Shapes are pre-flattened by callers: row-wise kernels take 2-D
arrays [rows, width], elementwise kernels take 1-D arrays.
"""

from __future__ import annotations

import numpy as np

_GELU_C = np.sqrt(2.0 / np.pi)
_GELU_A = 0.044715


def layer_norm_fwd(x, gamma, beta, eps):
    mean = x.mean(axis=1)
    var = x.var(axis=1)
    rstd = 1.0 / np.sqrt(var + eps)
    xhat = (x - mean[:, None]) * rstd[:, None]
    y = xhat * gamma + beta
    return y, mean, rstd


def layer_norm_bwd(g, x, gamma, mean, rstd):
    xhat = (x - mean[:, None]) * rstd[:, None]
    dgamma = (g * xhat).sum(axis=0)
    dbeta = g.sum(axis=0)
    dxhat = g * gamma
    m1 = dxhat.mean(axis=1, keepdims=True)
    m2 = (dxhat * xhat).mean(axis=1, keepdims=True)
    dx = rstd[:, None] * (dxhat - m1 - xhat * m2)
    return dx, dgamma, dbeta


def softmax_fwd(x):
    m = x.max(axis=1, keepdims=True)
    z = np.exp(x - m)
    return z / z.sum(axis=1, keepdims=True)


def softmax_bwd(g, y):
    dot = (g * y).sum(axis=1, keepdims=True)
    return y * (g - dot)


def gelu_fwd(x):
    inner = _GELU_C * (x + _GELU_A * x**3)
    return 0.5 * x * (1.0 + np.tanh(inner))


def gelu_bwd(g, x):
    inner = _GELU_C * (x + _GELU_A * x**3)
    t = np.tanh(inner)
    din = _GELU_C * (1.0 + 3.0 * _GELU_A * x**2)
    return g * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t**2) * din)


def sigmoid_fwd(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def sigmoid_bwd(g, y):
    return g * y * (1.0 - y)


def cross_entropy_fwd(logits, idx):
    rows = np.arange(logits.shape[0])
    m = logits.max(axis=1)
    z = np.exp(logits - m[:, None])
    s = z.sum(axis=1)
    probs = z / s[:, None]
    losses = np.log(s) + m - logits[rows, idx]
    return losses, probs


def bce_logits_fwd(logits, targets):
    # max(x,0) - x*y + log1p(exp(-|x|)) is stable for any x
    return np.maximum(logits, 0.0) - logits * targets + np.log1p(np.exp(-np.abs(logits)))


def adam_update(p, g, m, v, lr, beta1, beta2, eps, t):
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)

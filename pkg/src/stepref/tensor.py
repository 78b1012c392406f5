"""Dense float64 tensors with reverse-mode gradients on a recorded tape.

A Tensor wraps a numpy array. Operations record their inputs and a
per-input vector-Jacobian closure; `backward()` walks the tape in reverse
topological order and accumulates gradients on every tensor that requires
them. Row-wise kernels (softmax, layer norm, losses) dispatch through
`kernels`, so they run on the numba or numpy backend.

Conventions: row-major data, leading axes are free batch axes, weights are
2-D `[in, out]` and applied as `x @ w`. The tape is single-threaded;
tensors without a live tape may be shared read-only.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np

from . import kernels
from .errors import DimensionError

_GRAD_ENABLED = [True]


@contextmanager
def no_grad():
    _GRAD_ENABLED.append(False)
    try:
        yield
    finally:
        _GRAD_ENABLED.pop()


def grad_enabled() -> bool:
    return _GRAD_ENABLED[-1]


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self):
        self.grad = None

    def backward(self):
        if self.data.size != 1:
            raise DimensionError("backward() requires a scalar tensor")
        topo = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(as_tensor(other), -1.0))

    def __mul__(self, other):
        return mul(self, other)

    def __matmul__(self, other):
        return matmul(self, other)


def as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _make(data, pairs):
    """Build an op output; `pairs` is [(input_tensor, vjp)] per input."""
    live = [(p, vjp) for p, vjp in pairs if p.requires_grad]
    if not _GRAD_ENABLED[-1] or not live:
        return Tensor(data)
    out = Tensor(data, requires_grad=True)
    out._parents = tuple(p for p, _ in live)

    def run(g, live=live):
        for p, vjp in live:
            contrib = vjp(g)
            if p.grad is None:
                p.grad = np.zeros_like(p.data)
            p.grad += contrib

    out._backward = run
    return out


def _unbroadcast(g, shape):
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g.reshape(shape)


# ---------------------------------------------------------------- arithmetic


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    data = a.data + b.data
    return _make(
        data,
        [
            (a, lambda g: _unbroadcast(g, a.data.shape)),
            (b, lambda g: _unbroadcast(g, b.data.shape)),
        ],
    )


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    data = a.data * b.data
    return _make(
        data,
        [
            (a, lambda g: _unbroadcast(g * b.data, a.data.shape)),
            (b, lambda g: _unbroadcast(g * a.data, b.data.shape)),
        ],
    )


def scale(a, c: float):
    a = as_tensor(a)
    c = float(c)
    return _make(a.data * c, [(a, lambda g: g * c)])


def add_const(a, c: float):
    a = as_tensor(a)
    return _make(a.data + float(c), [(a, lambda g: g)])


def sum_all(a):
    a = as_tensor(a)
    return _make(
        np.asarray(a.data.sum()),
        [(a, lambda g: np.broadcast_to(g, a.data.shape).copy())],
    )


def mean_all(a):
    return scale(sum_all(a), 1.0 / as_tensor(a).data.size)


# ------------------------------------------------------------ linear algebra


def matmul(a, b):
    """a[..., n, k] @ b[k, m] with a shared 2-D weight on the right."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim != 2:
        raise DimensionError(f"matmul expects a[...,n,k], b[k,m]; got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[0]:
        raise DimensionError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    data = a.data @ b.data

    def db(g):
        k = a.data.shape[-1]
        m = g.shape[-1]
        return a.data.reshape(-1, k).T @ g.reshape(-1, m)

    return _make(data, [(a, lambda g: g @ b.data.T), (b, db)])


def bmm(a, b):
    """Batched matmul: a[..., n, k] @ b[..., k, m], identical leading axes."""
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != b.ndim or a.shape[:-2] != b.shape[:-2] or a.shape[-1] != b.shape[-2]:
        raise DimensionError(f"bmm shape mismatch: {a.shape} @ {b.shape}")
    data = a.data @ b.data
    return _make(
        data,
        [
            (a, lambda g: g @ b.data.swapaxes(-1, -2)),
            (b, lambda g: a.data.swapaxes(-1, -2) @ g),
        ],
    )


def swap_axes(a, ax1: int, ax2: int):
    a = as_tensor(a)
    return _make(a.data.swapaxes(ax1, ax2), [(a, lambda g: g.swapaxes(ax1, ax2))])


def reshape(a, shape):
    a = as_tensor(a)
    shape = tuple(shape)
    return _make(
        a.data.reshape(shape), [(a, lambda g: g.reshape(a.data.shape))]
    )


def gather_rows(a, idx, axis: int = 0):
    """Index one axis with an int array; gradients scatter-add back."""
    a = as_tensor(a)
    idx = np.asarray(idx, dtype=np.intp)
    ax = axis if axis >= 0 else a.ndim + axis
    data = np.take(a.data, idx, axis=ax)

    def da(g):
        out = np.zeros_like(a.data)
        np.add.at(out, (slice(None),) * ax + (idx,), g)
        return out

    return _make(data, [(a, da)])


def gather_per_row(a, idx):
    """out[b] = a[b, idx[b]] for a[B, R, ...]; per-item row selection."""
    a = as_tensor(a)
    idx = np.asarray(idx, dtype=np.intp)
    rows = np.arange(a.shape[0])
    data = a.data[rows, idx]

    def da(g):
        out = np.zeros_like(a.data)
        np.add.at(out, (rows, idx), g)
        return out

    return _make(data, [(a, da)])


def select_rows(mask, a, b):
    """Exact per-item selection: out[i] = a[i] if mask[i] else b[i].

    `mask` is a constant bool/0-1 array over the leading axis; selection is
    bitwise-exact (no arithmetic on the unselected branch).
    """
    a, b = as_tensor(a), as_tensor(b)
    m = np.asarray(mask, dtype=bool).reshape((-1,) + (1,) * (a.ndim - 1))
    data = np.where(m, a.data, b.data)
    return _make(
        data,
        [
            (a, lambda g: np.where(m, g, 0.0)),
            (b, lambda g: np.where(m, 0.0, g)),
        ],
    )


# ----------------------------------------------------------------- row-wise


def softmax(x, axis: int = -1):
    x = as_tensor(x)
    ax = axis if axis >= 0 else x.ndim + axis
    moved = ax != x.ndim - 1
    data = np.moveaxis(x.data, ax, -1) if moved else x.data
    flat = np.ascontiguousarray(data.reshape(-1, data.shape[-1]))
    y = kernels.softmax_fwd(flat)
    out = y.reshape(data.shape)
    if moved:
        out = np.moveaxis(out, -1, ax)

    def dx(g):
        gm = np.moveaxis(g, ax, -1) if moved else g
        gflat = np.ascontiguousarray(gm.reshape(-1, gm.shape[-1]))
        d = kernels.softmax_bwd(gflat, y).reshape(gm.shape)
        return np.moveaxis(d, -1, ax) if moved else d

    return _make(out, [(x, dx)])


def layer_norm(x, gamma, beta, eps: float = 1e-5):
    """Normalize the last axis to zero mean / unit variance, then affine."""
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    d = x.shape[-1]
    if gamma.shape != (d,) or beta.shape != (d,):
        raise DimensionError(
            f"layer_norm affine shapes {gamma.shape}/{beta.shape} do not match width {d}"
        )
    flat = np.ascontiguousarray(x.data.reshape(-1, d))
    y, mean, rstd = kernels.layer_norm_fwd(flat, gamma.data, beta.data, eps)

    def dx(g):
        gf = np.ascontiguousarray(g.reshape(-1, d))
        dxf, _, _ = kernels.layer_norm_bwd(gf, flat, gamma.data, mean, rstd)
        return dxf.reshape(x.data.shape)

    def dgamma(g):
        gf = np.ascontiguousarray(g.reshape(-1, d))
        _, dg, _ = kernels.layer_norm_bwd(gf, flat, gamma.data, mean, rstd)
        return dg

    def dbeta(g):
        gf = g.reshape(-1, d)
        return gf.sum(axis=0)

    return _make(y.reshape(x.data.shape), [(x, dx), (gamma, dgamma), (beta, dbeta)])


def gelu(x):
    x = as_tensor(x)
    flat = np.ascontiguousarray(x.data.reshape(-1))
    y = kernels.gelu_fwd(flat)

    def dx(g):
        return kernels.gelu_bwd(np.ascontiguousarray(g.reshape(-1)), flat).reshape(x.data.shape)

    return _make(y.reshape(x.data.shape), [(x, dx)])


def sigmoid(x):
    x = as_tensor(x)
    flat = np.ascontiguousarray(x.data.reshape(-1))
    y = kernels.sigmoid_fwd(flat)

    def dx(g):
        return kernels.sigmoid_bwd(np.ascontiguousarray(g.reshape(-1)), y).reshape(x.data.shape)

    return _make(y.reshape(x.data.shape), [(x, dx)])


def cross_entropy_rows(logits, idx):
    """Per-row softmax cross-entropy: out[r] = -log softmax(logits[r])[idx[r]]."""
    logits = as_tensor(logits)
    idx = np.asarray(idx, dtype=np.int64)
    if logits.ndim != 2 or idx.shape != (logits.shape[0],):
        raise DimensionError(f"cross_entropy_rows: {logits.shape} with idx {idx.shape}")
    if idx.min(initial=0) < 0 or idx.max(initial=0) >= logits.shape[1]:
        raise IndexError("target index out of range")
    flat = np.ascontiguousarray(logits.data)
    losses, probs = kernels.cross_entropy_fwd(flat, idx)

    def dx(g):
        d = probs.copy()
        d[np.arange(d.shape[0]), idx] -= 1.0
        return d * g[:, None]

    return _make(losses, [(logits, dx)])


def bce_logits(logits, targets):
    """Elementwise sigmoid binary cross-entropy against 0/1 targets."""
    logits = as_tensor(logits)
    t = np.asarray(targets, dtype=np.float64)
    if t.shape != logits.shape:
        raise DimensionError(f"bce_logits: {logits.shape} vs targets {t.shape}")
    flat = np.ascontiguousarray(logits.data.reshape(-1))
    tflat = np.ascontiguousarray(t.reshape(-1))
    losses = kernels.bce_logits_fwd(flat, tflat)
    sig = kernels.sigmoid_fwd(flat)

    def dx(g):
        return ((sig - tflat) * g.reshape(-1)).reshape(logits.data.shape)

    return _make(losses.reshape(logits.data.shape), [(logits, dx)])


def cosine_rows(a, b):
    """Row-wise cosine similarity over the last axis; norms floored at 1e-12."""
    a, b = as_tensor(a), as_tensor(b)
    if a.shape != b.shape:
        raise DimensionError(f"cosine_rows: {a.shape} vs {b.shape}")
    ad = a.data.reshape(-1, a.shape[-1])
    bd = b.data.reshape(-1, b.shape[-1])
    na = np.maximum(np.sqrt((ad * ad).sum(axis=1)), 1e-12)
    nb = np.maximum(np.sqrt((bd * bd).sum(axis=1)), 1e-12)
    dot = (ad * bd).sum(axis=1)
    cos = dot / (na * nb)
    out_shape = a.shape[:-1]

    def da(g):
        gf = g.reshape(-1, 1)
        d = (bd / (na * nb)[:, None] - ad * (cos / (na * na))[:, None]) * gf
        return d.reshape(a.data.shape)

    def db(g):
        gf = g.reshape(-1, 1)
        d = (ad / (na * nb)[:, None] - bd * (cos / (nb * nb))[:, None]) * gf
        return d.reshape(b.data.shape)

    return _make(cos.reshape(out_shape), [(a, da), (b, db)])

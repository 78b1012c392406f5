"""Dispatch layer: exposes the active kernel set chosen in `backend`."""

from __future__ import annotations

from . import _kernels_np
from .backend import KERNEL_BACKEND

if KERNEL_BACKEND == "numba":
    from . import _kernels_nb as _impl

    def warmup():
        _impl.warmup()

else:
    _impl = _kernels_np

    def warmup():
        pass


layer_norm_fwd = _impl.layer_norm_fwd
layer_norm_bwd = _impl.layer_norm_bwd
softmax_fwd = _impl.softmax_fwd
softmax_bwd = _impl.softmax_bwd
gelu_fwd = _impl.gelu_fwd
gelu_bwd = _impl.gelu_bwd
sigmoid_fwd = _impl.sigmoid_fwd
sigmoid_bwd = _impl.sigmoid_bwd
cross_entropy_fwd = _impl.cross_entropy_fwd
bce_logits_fwd = _impl.bce_logits_fwd
adam_update = _impl.adam_update

# the reference path is always importable for backend-vs-backend checks
reference = _kernels_np

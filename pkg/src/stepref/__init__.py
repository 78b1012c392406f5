"""Step-wise candidate grounding on synthetic relational 3D scenes.

A small, self-contained pipeline: seeded scene/query generation, a numpy
tensor core with reverse-mode gradients, a prompt-encoder workspace that
writes ordered latent steps, a step-wise candidate scorer with length
masking, three-phase training, and an evaluation/ablation/trace harness.
"""

__version__ = "0.1.0"

from .rng import RngStream
from .tensor import Tensor

__all__ = ["RngStream", "Tensor", "__version__"]

"""Resonant three-wave triad laboratory.

Closed-form elliptic solution of the resonant triad amplitude system,
an independent high-accuracy ODE oracle, a split-step spectral simulator
for the full coupled modified-Schrodinger fields, and the acoustic
gravity-wave application mapping -- plus a CLI (``triad-lab``) that ties
them into reproducible experiments.
"""

from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

"""Open XXZ spin-1/2 chain with general integrable boundaries, solved by SoV.

Dense numerical realization of the model, its gauge (Vertex-IRF) transform,
the SoV bases, the T-Q spectrum and the determinant representations of
scalar products of separate states, verified against brute-force oracles.
"""

from .trig import (
    BoundaryParams,
    ModelParams,
    TrigPoly,
    canonical_root,
    random_params,
    reparam_boundary,
    varsigma,
    vdm_hat,
)

__all__ = [
    "BoundaryParams",
    "ModelParams",
    "TrigPoly",
    "canonical_root",
    "random_params",
    "reparam_boundary",
    "varsigma",
    "vdm_hat",
]

__version__ = "0.1.0"

"""2D level-set topology optimization for minimum compliance.

The level set evolves either by a reaction-diffusion update (``rd``) or by
its Nesterov-accelerated variant (``nlhp``), both solved with P1 finite
elements on triangulated rectangles.
"""
from .config import RunConfig, parse_config
from .exceptions import (
    ConfigError, GeometryError, LstoError, MergeMismatchError, ModelError, SolverError,
)
from .mesh2d import MODELS, TriMesh, build_model, build_rect_grid, merge_meshes
from .optimizer import OptParams, OptResult, run

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "GeometryError", "LstoError", "MergeMismatchError", "ModelError",
    "SolverError", "MODELS", "TriMesh", "build_model", "build_rect_grid", "merge_meshes",
    "OptParams", "OptResult", "RunConfig", "parse_config", "run",
]

"""Quasicontinuum ghost-force lattice models with a planar interface."""
from .lattice import BC, GridError, GridSpec, Model, NodeIndex, ScalarField, build_grid
from .stencil import StencilSystem

__all__ = ["BC", "GridError", "GridSpec", "Model", "NodeIndex", "ScalarField", "StencilSystem", "build_grid"]

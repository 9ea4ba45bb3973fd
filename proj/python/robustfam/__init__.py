"""Maximal graphs in H^{p,q}, hyperbolic affine spheres and their property checks."""

from ._robustfam import (
    AffineHypersurface,
    InputError,
    QuadraticForm,
    SpacelikeGraph,
    boost,
    boosted_totally_geodesic,
    check,
    graph_from_text,
    hyperboloid,
    poincare_embed,
    pseudo_distance,
    solve_affine,
    solve_maximal,
    totally_geodesic,
)

__all__ = [
    "AffineHypersurface",
    "InputError",
    "QuadraticForm",
    "SpacelikeGraph",
    "boost",
    "boosted_totally_geodesic",
    "check",
    "graph_from_text",
    "hyperboloid",
    "poincare_embed",
    "pseudo_distance",
    "solve_affine",
    "solve_maximal",
    "totally_geodesic",
]

"""Two-sided vector fields across a discontinuity surface and the point taxonomy.

Classification of a surface point uses only the inner products of the two
field values with the unit normal (the normal rates), banded by a tolerance
so that near-tangent configurations are reported as boundary cases rather
than resolved arbitrarily.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .geometry import Array, Diffeo, SurfaceChart, pushforward

ON_SURFACE_TOL = 1e-9
CLASSIFY_TOL = 1e-9


class RegionKind(Enum):
    """What the two normal rates (a, b) say about a surface point.

    CROSSING: both fields push to the same side; trajectories pass through.
    ATTRACTING_SLIDING: the lower field pushes up, the upper pushes down;
        motion is trapped on the surface.
    REPELLING_SLIDING: both fields pull away from the surface.
    SINGULAR_EQUAL_NORMALS: the rates coincide; no sliding rule applies.
    TANGENCY_BOUNDARY: one rate vanishes; edge of the sliding set.
    """

    CROSSING = "crossing"
    ATTRACTING_SLIDING = "attracting"
    REPELLING_SLIDING = "repelling"
    SINGULAR_EQUAL_NORMALS = "singular"
    TANGENCY_BOUNDARY = "tangency"


SLIDING_KINDS = frozenset({
    RegionKind.ATTRACTING_SLIDING,
    RegionKind.REPELLING_SLIDING,
    RegionKind.TANGENCY_BOUNDARY,
})


@dataclass(frozen=True)
class PiecewiseField:
    """A pair of vector fields meeting along a surface.

    ``lower`` governs the region below the graph, ``upper`` the region
    above.  Both closures must be continuous up to the surface and total on
    R^n (continuous extensions); they are never branched on the side of the
    surface, so evaluation on the surface itself is unambiguous.
    """

    surface: SurfaceChart
    lower: Callable[[Array], Array]
    upper: Callable[[Array], Array]

    def gap(self, x) -> float:
        return self.surface.gap(x)


def require_on_surface(surface: SurfaceChart, x, tol: float = ON_SURFACE_TOL) -> Array:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = surface.gap(x)
    if abs(g) > tol * (1.0 + float(np.linalg.norm(x))):
        raise ValueError(f"point is off the surface (gap={g:.3e})")
    return x


def normal_components(pf: PiecewiseField, x) -> tuple[float, float]:
    """Normal rates of the two fields at a surface point: ``(n.lower, n.upper)``."""
    x = require_on_surface(pf.surface, x)
    n = pf.surface.normal(x[:-1])
    a = float(n @ np.asarray(pf.lower(x), dtype=float))
    b = float(n @ np.asarray(pf.upper(x), dtype=float))
    return a, b


def classify_pair(a: float, b: float, tol: float = CLASSIFY_TOL) -> RegionKind:
    """Taxonomy as a function of the two normal rates alone, banded by ``tol``."""
    if abs(a - b) <= tol:
        return RegionKind.SINGULAR_EQUAL_NORMALS
    if a * b > tol * tol:
        return RegionKind.CROSSING
    if a > tol and b < -tol:
        return RegionKind.ATTRACTING_SLIDING
    if a < -tol and b > tol:
        return RegionKind.REPELLING_SLIDING
    # remaining cases have at least one rate inside the zero band
    return RegionKind.TANGENCY_BOUNDARY


def classify(pf: PiecewiseField, x, tol: float = CLASSIFY_TOL) -> RegionKind:
    a, b = normal_components(pf, x)
    return classify_pair(a, b, tol)


def pushforward_pair(d: Diffeo, pf: PiecewiseField,
                     surface: SurfaceChart = None) -> PiecewiseField:
    """Transport both sides of a piecewise field along a coordinate change.

    ``surface`` is the chart of the image surface and defaults to the
    original one (appropriate for surface-preserving maps).
    """
    return PiecewiseField(surface if surface is not None else pf.surface,
                          pushforward(d, pf.lower),
                          pushforward(d, pf.upper))

"""Sliding rules: chart kernels and their lift to tangent vectors on the surface.

A kernel acts on the chart images of the two field values at a surface
point.  Flattening through the surface chart sends the lower value to
``(p, q)`` and the upper value to ``(r, s)``, where q and s are the rates
normal to the plane; the kernel returns the tangential velocity of the
motion constrained to the surface.  Kernels are defined exactly on the set

    q * s <= 0  and  q != s,

i.e. one field pushes toward the surface while the other pushes away (or is
tangent) and the two normal rates differ.  Evaluation outside that set is an
error; near-equal rates are rejected rather than extrapolated.

``sliding_velocity`` conjugates a kernel by the chart: flatten both field
values, blend, append a zero normal rate, and shear the result back onto the
surface.  ``filippov_sliding`` implements the convex combination whose
normal component vanishes directly in ambient coordinates; the two routes
are independent on purpose and are cross-checked in the test suite.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fields import SLIDING_KINDS, CLASSIFY_TOL, PiecewiseField, classify_pair, \
    normal_components, require_on_surface
from .geometry import Array, TangentVector

EQUAL_RATE_TOL = 1e-12


def in_kernel_domain(q: float, s: float) -> bool:
    """True when the normal-rate pair admits a sliding kernel."""
    if q * s > 0.0:
        return False
    return abs(q - s) >= EQUAL_RATE_TOL * max(abs(q), abs(s), 1.0)


def require_in_kernel_domain(q: float, s: float) -> None:
    if q * s > 0.0:
        raise ValueError(
            f"kernel undefined: normal rates q={q!r} and s={s!r} push to the same side")
    if abs(q - s) < EQUAL_RATE_TOL * max(abs(q), abs(s), 1.0):
        raise ValueError(
            f"kernel undefined: normal rates q={q!r} and s={s!r} are (nearly) equal")


@dataclass(frozen=True)
class SlidingLaw:
    """A named sliding rule in chart coordinates.

    ``kernel(p, q, r, s)`` maps the flattened lower value (p, q) and upper
    value (r, s) to the tangential sliding velocity.
    """

    name: str
    kernel: Callable

    def blend(self, p, q: float, r, s: float) -> Array:
        """Evaluate the kernel after validating the domain."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        r = np.atleast_1d(np.asarray(r, dtype=float))
        q = float(q)
        s = float(s)
        require_in_kernel_domain(q, s)
        return np.atleast_1d(np.asarray(self.kernel(p, q, r, s), dtype=float))


def filippov_blend(p, q: float, r, s: float) -> Array:
    """Convex combination ``lam*p + (1-lam)*r`` with ``lam = s/(s-q)``.

    Written as ``r + lam*(p - r)`` so that agreeing tangential parts are
    returned exactly.
    """
    lam = s / (s - q)
    return r + lam * (p - r)


def mean_blend(p, q: float, r, s: float) -> Array:
    """Plain average of the tangential parts, ignoring the normal rates."""
    return 0.5 * (p + r)


FILIPPOV = SlidingLaw("filippov", filippov_blend)
MEAN = SlidingLaw("mean", mean_blend)


def scaled_filippov(c: float) -> SlidingLaw:
    """The Filippov blend multiplied by a constant ``c != 1``.

    Satisfies the algebraic axioms but lands the wrong continuous limit; kept
    in the catalog as a falsification target.
    """
    c = float(c)
    if not np.isfinite(c):
        raise ValueError("scale must be finite")
    if c == 1.0:
        raise ValueError("scale c = 1 is the plain filippov law")
    return SlidingLaw(f"scaled_filippov({c:g})",
                      lambda p, q, r, s: c * filippov_blend(p, q, r, s))


_SCALED_RE = re.compile(r"^scaled_filippov\(([^)]+)\)$")


def law_catalog() -> dict:
    """The built-in laws addressable by name (``scaled_filippov(<c>)`` is parsed)."""
    return {"filippov": FILIPPOV, "mean": MEAN}


def resolve_law(name: str) -> SlidingLaw:
    """Look up a law by name: ``filippov``, ``mean``, or ``scaled_filippov(<c>)``."""
    key = name.strip()
    catalog = law_catalog()
    if key in catalog:
        return catalog[key]
    m = _SCALED_RE.match(key)
    if m:
        try:
            c = float(m.group(1))
        except ValueError:
            raise ValueError(f"bad scale in law name {name!r}") from None
        return scaled_filippov(c)
    raise ValueError(
        f"unknown law {name!r}; available: filippov, mean, scaled_filippov(<c>)")


# ---------------------------------------------------------------------------
# evaluation on a piecewise field


def chart_values(pf: PiecewiseField, x) -> tuple[Array, float, Array, float]:
    """Flatten both field values at a surface point into ``(p, q, r, s)``.

    The tangential parts pass through unchanged; the chart rates are
    ``v_n - grad u . v~`` for each field value v.
    """
    x = require_on_surface(pf.surface, x)
    g = np.atleast_1d(np.asarray(pf.surface.slope(x[:-1]), dtype=float))
    lo = np.atleast_1d(np.asarray(pf.lower(x), dtype=float))
    up = np.atleast_1d(np.asarray(pf.upper(x), dtype=float))
    p, q = lo[:-1], float(lo[-1] - g @ lo[:-1])
    r, s = up[:-1], float(up[-1] - g @ up[:-1])
    return p, q, r, s


def chart_velocity(law: SlidingLaw, pf: PiecewiseField, x) -> Array:
    """Tangential (chart) sliding velocity of ``law`` at a surface point."""
    p, q, r, s = chart_values(pf, x)
    return law.blend(p, q, r, s)


def _require_sliding(a: float, b: float, tol: float) -> None:
    if classify_pair(a, b, tol) not in SLIDING_KINDS:
        raise ValueError(f"not in sliding region (normal rates {a!r}, {b!r})")


def sliding_velocity(law: SlidingLaw, pf: PiecewiseField, x,
                     tol: float = CLASSIFY_TOL) -> TangentVector:
    """Sliding velocity of ``law`` at a surface point, as an ambient tangent vector.

    Blends the flattened field values, appends a zero normal rate, and
    shears the result back onto the surface; the output is tangent to the
    surface by construction.
    """
    x = require_on_surface(pf.surface, x)
    a, b = normal_components(pf, x)
    _require_sliding(a, b, tol)
    w = chart_velocity(law, pf, x)
    g = np.atleast_1d(np.asarray(pf.surface.slope(x[:-1]), dtype=float))
    vec = np.concatenate([w, [float(g @ w)]])
    return TangentVector(base=x, vec=vec)


def filippov_coefficient(a: float, b: float) -> float:
    """Weight of the lower field in the tangent convex combination: ``b/(b-a)``."""
    require_in_kernel_domain(a, b)
    return b / (b - a)


def filippov_sliding(pf: PiecewiseField, x, tol: float = CLASSIFY_TOL) -> TangentVector:
    """Convex combination of the two field values whose normal rate vanishes.

    Direct ambient-coordinate construction; lies in [lower(x), upper(x)] and
    is tangent to the surface.  Kept independent of the chart route through
    ``sliding_velocity`` so the two can be compared.
    """
    x = require_on_surface(pf.surface, x)
    a, b = normal_components(pf, x)
    _require_sliding(a, b, tol)
    require_in_kernel_domain(a, b)
    lo = np.atleast_1d(np.asarray(pf.lower(x), dtype=float))
    up = np.atleast_1d(np.asarray(pf.upper(x), dtype=float))
    lam = b / (b - a)
    return TangentVector(base=x, vec=up + lam * (lo - up))

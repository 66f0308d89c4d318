"""Geometry of graph-type discontinuity surfaces and coordinate changes.

A surface is the graph ``{x_n = u(x_1, ..., x_{n-1})}`` of a C1 height
function u over the tangential coordinates.  The canonical chart shears the
hyperplane ``{x_n = 0}`` onto the graph by adding the height to the last
coordinate; its inverse flattens the graph back onto the plane.  Coordinate
changes are carried around as explicit closures (forward, inverse, Jacobian)
so that compositions and vector-field transport stay at round-off accuracy;
numerical inversion is deliberately avoided.

The ambient dimension n may be 1, in which case the tangential coordinate
vector is empty and the surface is the single point ``{u()}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Array = np.ndarray


def _vec(x) -> Array:
    return np.atleast_1d(np.asarray(x, dtype=float))


def central_gradient(f: Callable, x, rel_step: float = 1e-6) -> Array:
    """Central-difference gradient of a scalar function.

    The step in coordinate i is ``rel_step * max(1, |x_i|)``.
    """
    x = _vec(x)
    g = np.empty(x.size)
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        e = np.zeros(x.size)
        e[i] = h
        g[i] = (float(f(x + e)) - float(f(x - e))) / (2.0 * h)
    return g


def central_jacobian(f: Callable, x, rel_step: float = 1e-6) -> Array:
    """Central-difference Jacobian of a map R^k -> R^m, one column per coordinate."""
    x = _vec(x)
    if x.size == 0:
        return np.zeros((_vec(f(x)).size, 0))
    cols = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        e = np.zeros(x.size)
        e[i] = h
        cols.append((_vec(f(x + e)) - _vec(f(x - e))) / (2.0 * h))
    return np.stack(cols, axis=1)


@dataclass(frozen=True)
class Diffeo:
    """A C1 coordinate change of R^n with explicit inverse and Jacobian.

    ``forward`` and ``inverse`` are mutually inverse maps and ``jacobian``
    evaluates the derivative of ``forward``.  Every construction in this
    module (lifts, translations, linear maps, shears, warps) supplies all
    three in closed form.
    """

    forward: Callable[[Array], Array]
    inverse: Callable[[Array], Array]
    jacobian: Callable[[Array], Array]
    name: str = "diffeo"

    def __call__(self, x) -> Array:
        return _vec(self.forward(_vec(x)))


@dataclass(frozen=True)
class TangentVector:
    """A vector attached to an ambient base point."""

    base: Array
    vec: Array


@dataclass(frozen=True)
class SurfaceChart:
    """A discontinuity surface given as the graph of a height function.

    ``dim`` is the ambient dimension n >= 1, ``height`` maps the tangential
    coordinates (length n-1) to the last coordinate of the surface, and
    ``slope`` is its gradient.  When no analytic slope is supplied, a
    central finite-difference fallback is installed; analytic gradients keep
    downstream tolerances tight.
    """

    dim: int
    height: Callable[[Array], float]
    slope: Callable[[Array], Array] = None
    name: str = "surface"

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"ambient dimension must be >= 1, got {self.dim}")
        if self.slope is None:
            u = self.height
            object.__setattr__(self, "slope", lambda xt: central_gradient(u, xt))

    def gap(self, x) -> float:
        """Signed surface coordinate ``x_n - u(x~)``.

        Negative in the lower region, positive in the upper region, zero
        exactly on the surface.
        """
        x = _vec(x)
        return float(x[-1]) - float(self.height(x[:-1]))

    def normal(self, xt) -> Array:
        """Unit normal ``(-grad u, 1) / sqrt(1 + |grad u|^2)`` at a chart point.

        The last component is strictly positive: the normal always points
        into the upper region.
        """
        g = _vec(self.slope(_vec(xt)))
        n = np.concatenate([-g, [1.0]])
        return n / np.linalg.norm(n)

    def point(self, xt) -> Array:
        """Ambient surface point above a chart base point."""
        xt = _vec(xt)
        return np.concatenate([xt, [float(self.height(xt))]])

    def lift(self, x) -> Array:
        """Add the height to the last coordinate; sends ``{x_n = 0}`` onto the surface."""
        x = _vec(x)
        out = x.copy()
        out[-1] = x[-1] + float(self.height(x[:-1]))
        return out

    def flatten(self, y) -> Array:
        """Subtract the height from the last coordinate (inverse of ``lift``)."""
        y = _vec(y)
        out = y.copy()
        out[-1] = y[-1] - float(self.height(y[:-1]))
        return out

    def lift_jacobian(self, x) -> Array:
        """Jacobian of ``lift``: identity except the last row, which is (grad u, 1)."""
        x = _vec(x)
        J = np.eye(self.dim)
        J[-1, :-1] = _vec(self.slope(x[:-1]))
        return J

    def lift_map(self) -> Diffeo:
        """The lift as an explicit coordinate change of R^n."""
        return Diffeo(self.lift, self.flatten, self.lift_jacobian,
                      name=f"lift[{self.name}]")

    def flatten_map(self) -> Diffeo:
        """The flattening as an explicit coordinate change (inverse of ``lift_map``)."""

        def jac(y):
            y = _vec(y)
            J = np.eye(self.dim)
            J[-1, :-1] = -_vec(self.slope(y[:-1]))
            return J

        return Diffeo(self.flatten, self.lift, jac, name=f"flatten[{self.name}]")


def tangency_defect(surface: SurfaceChart, tv: TangentVector) -> float:
    """``|normal . vec| / |vec|``; zero for vectors tangent to the surface (0/0 -> 0)."""
    n = surface.normal(_vec(tv.base)[:-1])
    v = _vec(tv.vec)
    nv = float(np.linalg.norm(v))
    return abs(float(n @ v)) / nv if nv > 0.0 else 0.0


# ---------------------------------------------------------------------------
# diffeomorphism constructors


def identity_diffeo(dim: int) -> Diffeo:
    eye = np.eye(dim)
    return Diffeo(lambda x: _vec(x).copy(),
                  lambda y: _vec(y).copy(),
                  lambda x: eye.copy(),
                  name="identity")


def linear_diffeo(A) -> Diffeo:
    """``x -> A x`` for a regular matrix A (raises for singular input)."""
    A = np.asarray(A, dtype=float)
    A_inv = np.linalg.inv(A)
    return Diffeo(lambda x: A @ _vec(x),
                  lambda y: A_inv @ _vec(y),
                  lambda x: A.copy(),
                  name="linear")


def translation_diffeo(delta) -> Diffeo:
    delta = _vec(delta)
    eye = np.eye(delta.size)
    return Diffeo(lambda x: _vec(x) + delta,
                  lambda y: _vec(y) - delta,
                  lambda x: eye.copy(),
                  name="translation")


def vertical_shear(fn: Callable, grad_fn: Callable = None) -> Diffeo:
    """``(x~, x_n) -> (x~, x_n + fn(x~))``: shift the last coordinate by a function
    of the others.  Maps the graph of u onto the graph of u + fn.
    """
    g = grad_fn if grad_fn is not None else (lambda xt: central_gradient(fn, xt))

    def fwd(x):
        x = _vec(x)
        out = x.copy()
        out[-1] = x[-1] + float(fn(x[:-1]))
        return out

    def inv(y):
        y = _vec(y)
        out = y.copy()
        out[-1] = y[-1] - float(fn(y[:-1]))
        return out

    def jac(x):
        x = _vec(x)
        J = np.eye(x.size)
        J[-1, :-1] = _vec(g(x[:-1]))
        return J

    return Diffeo(fwd, inv, jac, name="vertical-shear")


def plane_warp(coeffs) -> Diffeo:
    """Componentwise monotone warp of the tangential coordinates.

    ``x_i -> sinh(c_i x_i) / c_i`` for i < n-1 (identity where c_i = 0),
    fixing the last coordinate: a nonlinear diffeomorphism of R^n that
    preserves the hyperplane ``{x_n = 0}``.
    """
    c = _vec(coeffs)
    m = c != 0.0

    def fwd(x):
        x = _vec(x)
        out = x.copy()
        out[:-1][m] = np.sinh(c[m] * x[:-1][m]) / c[m]
        return out

    def inv(y):
        y = _vec(y)
        out = y.copy()
        out[:-1][m] = np.arcsinh(c[m] * y[:-1][m]) / c[m]
        return out

    def jac(x):
        x = _vec(x)
        d = np.ones(x.size)
        d[:-1][m] = np.cosh(c[m] * x[:-1][m])
        return np.diag(d)

    return Diffeo(fwd, inv, jac, name="plane-warp")


def compose(outer: Diffeo, inner: Diffeo) -> Diffeo:
    """``outer`` after ``inner``, with the chain-rule Jacobian."""

    def jac(x):
        x = _vec(x)
        mid = _vec(inner.forward(x))
        return np.asarray(outer.jacobian(mid), float) @ np.asarray(inner.jacobian(x), float)

    return Diffeo(lambda x: _vec(outer.forward(_vec(inner.forward(_vec(x))))),
                  lambda y: _vec(inner.inverse(_vec(outer.inverse(_vec(y))))),
                  jac,
                  name=f"{outer.name}*{inner.name}")


def pushforward(d: Diffeo, field: Callable[[Array], Array]) -> Callable[[Array], Array]:
    """Transport a vector field along a coordinate change.

    The transported field at y is ``J(x) X(x)`` with ``x = inverse(y)`` and
    J the Jacobian of the forward map; transporting along a composition
    equals transporting twice.
    """

    def moved(y):
        x = _vec(d.inverse(_vec(y)))
        return np.asarray(d.jacobian(x), float) @ _vec(field(x))

    return moved


def factor_through_plane(surface: SurfaceChart, d: Diffeo, *,
                         samples: int = 32, tol: float = 1e-9) -> Diffeo:
    """Split a map carrying ``{x_n = 0}`` into the surface through the canonical lift.

    Returns the unique plane-preserving map whose composition with the
    surface lift reproduces ``d``.  The containment of the image in the
    surface is verified on sampled plane points; closures are opaque, so the
    check is necessarily best-effort.
    """
    rng = np.random.default_rng(0)
    for _ in range(samples):
        x = np.concatenate([rng.uniform(-2.0, 2.0, surface.dim - 1), [0.0]])
        y = _vec(d.forward(x))
        if abs(surface.gap(y)) > tol * (1.0 + float(np.linalg.norm(y))):
            raise ValueError("map does not carry the plane {x_n = 0} into the surface")
    return compose(surface.flatten_map(), d)


# ---------------------------------------------------------------------------
# surface catalog


def flat_surface(dim: int = 2) -> SurfaceChart:
    """Height identically zero: the coordinate hyperplane ``{x_n = 0}``."""
    zeros = np.zeros(dim - 1)
    return SurfaceChart(dim, lambda xt: 0.0, lambda xt: zeros.copy(), name="flat")


def tilt_surface(slope) -> SurfaceChart:
    """Affine surface ``x_n = slope . x~`` through the origin."""
    m = _vec(slope)
    return SurfaceChart(m.size + 1,
                        lambda xt: float(m @ _vec(xt)),
                        lambda xt: m.copy(),
                        name="tilt")


def paraboloid_surface(curvature) -> SurfaceChart:
    """Quadratic bowl ``x_n = sum_i c_i x_i^2``."""
    c = _vec(curvature)
    return SurfaceChart(c.size + 1,
                        lambda xt: float(c @ (_vec(xt) ** 2)),
                        lambda xt: 2.0 * c * _vec(xt),
                        name="paraboloid")


def make_surface(name: str, dim: int, params: dict = None) -> SurfaceChart:
    """Build a catalog surface by name: ``flat``, ``tilt`` (slope), ``paraboloid``
    (curvature).  Scalar parameters broadcast across the tangential coordinates.
    """
    params = dict(params or {})

    def tangential_param(key, default):
        v = params.get(key, default)
        arr = np.full(dim - 1, float(v)) if np.isscalar(v) else _vec(v)
        if arr.size != dim - 1:
            raise ValueError(f"parameter {key!r} must have length {dim - 1}, got {arr.size}")
        return arr

    if name == "flat":
        return flat_surface(dim)
    if name == "tilt":
        return tilt_surface(tangential_param("slope", 1.0))
    if name == "paraboloid":
        return paraboloid_surface(tangential_param("curvature", 1.0))
    raise ValueError(f"unknown surface {name!r}; catalog: flat, tilt, paraboloid")

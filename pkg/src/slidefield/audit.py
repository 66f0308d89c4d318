"""Randomized audits of the sliding-rule axioms.

Each check draws seeded random configurations, evaluates both sides of an
identity the correct rule must satisfy, and reports the worst relative
deviation together with up to ten witnesses.  Sampling is deterministic:
trial i of a check uses ``default_rng([crc32(check), seed, i])``, so the
reduction is independent of evaluation order and repeated runs are
byte-identical.

The checks and what they falsify:

* ``matrix-equivariance``: commuting with plane-preserving linear maps
  (padded kernel output transforms like the inputs).  The mean rule fails
  whenever the map couples the normal direction into the tangential ones.
* ``homogeneity-linearity``: invariance under positive scaling of the
  normal rates, joint homogeneity in the tangential parts, and additivity
  in the tangential parts at fixed rates.
* ``linear-dependence``: the blend of two anti-aligned (or degenerate-
  aligned) chart values must vanish.  Fails for the mean rule.
* ``continuous-limit``: as both rates shrink to zero with agreeing
  tangential parts, the blend must converge to that common part.  Fails for
  any rescaled rule.
* ``parametrization-consistency``: transporting the sliding velocity along
  a surface-preserving change of coordinates must agree with evaluating the
  rule on the transported fields.
* ``pointwise``: the output at a point may depend only on the two field
  values there, tested with perturbations vanishing at the point.
* ``sliding-region-invariance`` (law-independent): the sign and equality
  predicates classifying a surface point survive transport along any
  graph-to-graph change of coordinates, even though the rate magnitudes do
  not.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .fields import (SLIDING_KINDS, PiecewiseField, classify, normal_components,
                     pushforward_pair)
from .geometry import (SurfaceChart, compose, flat_surface, linear_diffeo,
                       paraboloid_surface, plane_warp, tilt_surface,
                       translation_diffeo, vertical_shear)
from .laws import SlidingLaw, chart_values, in_kernel_domain, sliding_velocity

WITNESS_CAP = 10

CHECK_TOLERANCES = {
    "matrix-equivariance": 1e-8,
    "homogeneity-linearity": 1e-8,
    "linear-dependence": 1e-8,
    "continuous-limit": 1e-8,
    "parametrization-consistency": 1e-7,
    "pointwise": 1e-9,
    "sliding-region-invariance": 1e-7,
}

LAW_CHECKS = ("matrix-equivariance", "homogeneity-linearity", "linear-dependence",
              "continuous-limit", "parametrization-consistency", "pointwise")


@dataclass(frozen=True)
class SamplerConfig:
    seed: int
    trials: int
    dim: int = 2
    magnitude_range: tuple = (0.1, 4.0)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        lo, hi = self.magnitude_range
        if not (0.0 < lo < hi):
            raise ValueError("magnitude_range must satisfy 0 < lo < hi")


@dataclass
class AuditReport:
    law: str
    check: str
    trials: int
    failures: int
    worst_violation: float
    tolerance: float
    seed: int
    dim: int
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "check": self.check,
            "trials": self.trials,
            "failures": self.failures,
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "dim": self.dim,
            "witnesses": self.witnesses,
        }


def trial_rng(cfg: SamplerConfig, check: str, trial: int) -> np.random.Generator:
    tag = zlib.crc32(check.encode("utf-8"))
    return np.random.default_rng([tag, cfg.seed & 0xFFFFFFFFFFFFFFFF, trial])


def relative_deviation(lhs, rhs) -> float:
    l = np.atleast_1d(np.asarray(lhs, dtype=float))
    r = np.atleast_1d(np.asarray(rhs, dtype=float))
    return float(np.linalg.norm(l - r)) / max(1.0, float(np.linalg.norm(l)),
                                              float(np.linalg.norm(r)))


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


def _run_trials(law_name: str, check: str, cfg: SamplerConfig, trial_fn) -> AuditReport:
    tolerance = CHECK_TOLERANCES[check]
    failures = 0
    worst = 0.0
    witnesses = []
    for i in range(cfg.trials):
        rng = trial_rng(cfg, check, i)
        violation, inputs, lhs, rhs = trial_fn(rng)
        worst = max(worst, violation)
        if violation > tolerance:
            failures += 1
            if len(witnesses) < WITNESS_CAP:
                witnesses.append({
                    "trial": i,
                    "inputs": _jsonable(inputs),
                    "lhs": _jsonable(lhs),
                    "rhs": _jsonable(rhs),
                    "violation": float(violation),
                })
    return AuditReport(law=law_name, check=check, trials=cfg.trials,
                       failures=failures, worst_violation=worst,
                       tolerance=tolerance, seed=cfg.seed, dim=cfg.dim,
                       witnesses=witnesses)


# ---------------------------------------------------------------------------
# samplers


def _signed_magnitudes(rng, size: int, lo: float, hi: float) -> np.ndarray:
    return rng.uniform(lo, hi, size) * np.where(rng.random(size) < 0.5, -1.0, 1.0)


def sample_normal_rates(rng, lo: float, hi: float) -> tuple[float, float]:
    """A kernel-domain rate pair: opposite (or one-sided zero) signs, never equal."""
    kind = int(rng.integers(0, 8))
    orient = 1.0 if rng.random() < 0.5 else -1.0
    if kind == 0:
        return 0.0, float(orient * rng.uniform(lo, hi))
    if kind == 1:
        return float(orient * rng.uniform(lo, hi)), 0.0
    return (float(orient * rng.uniform(lo, hi)),
            float(-orient * rng.uniform(lo, hi)))


def sample_domain_point(rng, m: int, lo: float, hi: float, interior: bool = False):
    """Chart values in the kernel domain; ``interior`` forces strictly
    opposite rate signs (no tangency boundary)."""
    p = _signed_magnitudes(rng, m, lo, hi)
    r = _signed_magnitudes(rng, m, lo, hi)
    if interior:
        orient = 1.0 if rng.random() < 0.5 else -1.0
        q = float(orient * rng.uniform(lo, hi))
        s = float(-orient * rng.uniform(lo, hi))
    else:
        q, s = sample_normal_rates(rng, lo, hi)
    return p, q, r, s


def sample_plane_matrix(rng, n: int) -> np.ndarray:
    """A well-conditioned regular matrix whose last row is (0, ..., 0, d)."""
    while True:
        A = rng.uniform(-1.5, 1.5, (n, n))
        A[-1, :] = 0.0
        A[-1, -1] = rng.uniform(0.5, 2.0) * (1.0 if rng.random() < 0.5 else -1.0)
        A[np.arange(n - 1), np.arange(n - 1)] += np.sign(
            A[np.arange(n - 1), np.arange(n - 1)]) * 0.5
        if np.linalg.cond(A) < 20.0:
            return A


def sample_surface(rng, dim: int) -> SurfaceChart:
    m = dim - 1
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return flat_surface(dim)
    if kind == 1:
        return tilt_surface(rng.uniform(-1.0, 1.0, m))
    return paraboloid_surface(rng.uniform(-0.5, 0.5, m))


def _constant(v: np.ndarray):
    return lambda x, v=v: v


def sample_sliding_scene(rng, dim: int, lo: float, hi: float):
    """A surface, a point on it, and constant fields whose chart values are a
    sampled interior sliding tuple; the point is then strictly inside the
    sliding set by construction (boundary rates would not survive the
    round-off of the ambient reconstruction)."""
    surf = sample_surface(rng, dim)
    zt = rng.uniform(-2.0, 2.0, dim - 1)
    x = surf.point(zt)
    p, q, r, s = sample_domain_point(rng, dim - 1, lo, hi, interior=True)
    J = surf.lift_jacobian(x)
    v1 = J @ np.append(p, q)
    v2 = J @ np.append(r, s)
    pf = PiecewiseField(surf, _constant(v1), _constant(v2))
    return pf, x, (p, q, r, s)


def sample_plane_preserving(rng, dim: int):
    """A random element of the plane-preserving catalog: translations along
    the plane, linear maps with last row (0, ..., 0, d), componentwise warps."""
    m = dim - 1
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return translation_diffeo(np.append(rng.uniform(-1.0, 1.0, m), 0.0))
    if kind == 1:
        return linear_diffeo(sample_plane_matrix(rng, dim))
    return plane_warp(rng.uniform(0.2, 1.0, m))


def sample_graph_map(rng, surf: SurfaceChart):
    """A random graph-to-graph change of coordinates together with the chart
    of the image surface."""
    dim = surf.dim
    m = dim - 1
    kind = int(rng.integers(0, 5))
    if kind == 0:
        delta = rng.uniform(-1.0, 1.0, dim)
        dt, dn = delta[:-1], delta[-1]
        moved = SurfaceChart(
            dim,
            lambda yt, u=surf.height, dt=dt, dn=dn: float(u(yt - dt)) + dn,
            lambda yt, g=surf.slope, dt=dt: np.atleast_1d(np.asarray(g(yt - dt), float)),
            name=f"{surf.name}+shift")
        return translation_diffeo(delta), moved
    if kind == 1:
        c0 = float(rng.uniform(-1.0, 1.0))
        c1 = rng.uniform(-1.0, 1.0, m)
        c2 = rng.uniform(-0.5, 0.5, m)
        psi = lambda xt: c0 + float(c1 @ xt) + float(c2 @ (xt ** 2))
        dpsi = lambda xt: c1 + 2.0 * c2 * xt
        lifted = SurfaceChart(
            dim,
            lambda yt, u=surf.height: float(u(yt)) + psi(yt),
            lambda yt, g=surf.slope: np.atleast_1d(np.asarray(g(yt), float)) + dpsi(yt),
            name=f"{surf.name}+shear")
        return vertical_shear(psi, dpsi), lifted
    if kind == 2 and m >= 1:
        while True:
            B = rng.uniform(-1.5, 1.5, (m, m))
            diag = np.arange(m)
            B[diag, diag] += np.where(B[diag, diag] < 0.0, -0.5, 0.5)
            if np.linalg.cond(B) < 20.0:
                break
        B_inv = np.linalg.inv(B)
        A = np.eye(dim)
        A[:m, :m] = B
        warped = SurfaceChart(
            dim,
            lambda yt, u=surf.height: float(u(B_inv @ yt)),
            lambda yt, g=surf.slope: B_inv.T @ np.atleast_1d(
                np.asarray(g(B_inv @ yt), float)),
            name=f"{surf.name}+reparam")
        return linear_diffeo(A), warped
    if kind == 3:
        target = sample_surface(rng, dim)
        return compose(target.lift_map(), surf.flatten_map()), target
    bar = sample_plane_preserving(rng, dim)
    phi = compose(surf.lift_map(), compose(bar, surf.flatten_map()))
    return phi, surf


# ---------------------------------------------------------------------------
# law checks


def check_matrix_equivariance(law: SlidingLaw, cfg: SamplerConfig) -> AuditReport:
    lo, hi = cfg.magnitude_range
    m = cfg.dim - 1

    def trial(rng):
        while True:
            p, q, r, s = sample_domain_point(rng, m, lo, hi)
            A = sample_plane_matrix(rng, cfg.dim)
            v1 = A @ np.append(p, q)
            v2 = A @ np.append(r, s)
            if in_kernel_domain(float(v1[-1]), float(v2[-1])):
                break
        lhs = A @ np.append(law.blend(p, q, r, s), 0.0)
        rhs = np.append(law.blend(v1[:-1], v1[-1], v2[:-1], v2[-1]), 0.0)
        inputs = {"matrix": A, "p": p, "q": q, "r": r, "s": s}
        return relative_deviation(lhs, rhs), inputs, lhs, rhs

    return _run_trials(law.name, "matrix-equivariance", cfg, trial)


def check_homogeneity_linearity(law: SlidingLaw, cfg: SamplerConfig) -> AuditReport:
    lo, hi = cfg.magnitude_range
    m = cfg.dim - 1

    def trial(rng):
        p, q, r, s = sample_domain_point(rng, m, lo, hi)
        k = float(rng.uniform(lo, hi))
        p2 = _signed_magnitudes(rng, m, lo, hi)
        r2 = _signed_magnitudes(rng, m, lo, hi)
        base = law.blend(p, q, r, s)
        cases = (
            ("rate-scaling", law.blend(p, k * q, r, k * s), base),
            ("tangential-scaling", law.blend(k * p, q, k * r, s), k * base),
            ("additivity", law.blend(p + p2, q, r + r2, s),
             base + law.blend(p2, q, r2, s)),
        )
        name, lhs, rhs = max(cases, key=lambda c: relative_deviation(c[1], c[2]))
        inputs = {"p": p, "q": q, "r": r, "s": s, "k": k, "p2": p2, "r2": r2,
                  "worst_case": name}
        return relative_deviation(lhs, rhs), inputs, lhs, rhs

    return _run_trials(law.name, "homogeneity-linearity", cfg, trial)


def check_linear_dependence(law: SlidingLaw, cfg: SamplerConfig) -> AuditReport:
    lo, hi = cfg.magnitude_range
    m = cfg.dim - 1

    def trial(rng):
        k = _signed_magnitudes(rng, m, lo, hi)
        l = float(rng.uniform(lo, hi))
        c1, c2 = sample_normal_rates(rng, lo, hi)
        p, q = c1 * k, c1 * l
        r, s = c2 * k, c2 * l
        lhs = law.blend(p, q, r, s)
        rhs = np.zeros(m)
        scale = max(1.0,
                    float(np.linalg.norm(np.append(p, q))),
                    float(np.linalg.norm(np.append(r, s))))
        inputs = {"k": k, "l": l, "c1": c1, "c2": c2}
        return float(np.linalg.norm(lhs)) / scale, inputs, lhs, rhs

    return _run_trials(law.name, "linear-dependence", cfg, trial)


def check_continuous_limit(law: SlidingLaw, cfg: SamplerConfig) -> AuditReport:
    lo, hi = cfg.magnitude_range
    m = cfg.dim - 1

    def trial(rng):
        p = _signed_magnitudes(rng, m, lo, hi)
        # rho below ~0.1 would trip the equal-rates guard at the last index,
        # where |q - s| = 2^-40 (1 + rho) approaches the 1e-12 rejection band
        rho = float(rng.uniform(0.15, 2.0))
        first = last = None
        lhs = p
        for mm in range(1, 41):
            eps = 2.0 ** -mm
            lhs = law.blend(p, eps, p, -eps * rho)
            d = float(np.linalg.norm(lhs - p))
            if mm == 1:
                first = d
            last = d
        denom = float(np.linalg.norm(p))
        violation = last / denom if denom > 0.0 else 0.0
        inputs = {"p": p, "rho": rho, "deviation_first": first,
                  "deviation_last": last}
        return violation, inputs, lhs, p

    return _run_trials(law.name, "continuous-limit", cfg, trial)


def check_parametrization_consistency(law: SlidingLaw, cfg: SamplerConfig,
                                      pf: PiecewiseField = None) -> AuditReport:
    lo, hi = cfg.magnitude_range

    def trial(rng):
        pf_t, x = _scene_or_sample(rng, cfg, pf, lo, hi)
        surf = pf_t.surface
        bar = sample_plane_preserving(rng, cfg.dim)
        phi = compose(surf.lift_map(), compose(bar, surf.flatten_map()))
        v = sliding_velocity(law, pf_t, x).vec
        lhs = np.asarray(phi.jacobian(x), float) @ v
        moved = pushforward_pair(phi, pf_t)
        y = phi(x)
        rhs = sliding_velocity(law, moved, y).vec
        inputs = {"x": x, "map": f"{bar.name} (chart-conjugated)",
                  "surface": surf.name}
        return relative_deviation(lhs, rhs), inputs, lhs, rhs

    return _run_trials(law.name, "parametrization-consistency", cfg, trial)


def check_pointwise(law: SlidingLaw, cfg: SamplerConfig) -> AuditReport:
    lo, hi = cfg.magnitude_range

    def trial(rng):
        pf_t, x, _ = sample_sliding_scene(rng, cfg.dim, lo, hi)
        w1 = rng.uniform(-2.0, 2.0, cfg.dim)
        w2 = rng.uniform(-2.0, 2.0, cfg.dim)
        style = int(rng.integers(0, 2))
        if style == 0:
            weight = lambda y: pf_t.surface.gap(y)  # vanishes on the surface
            tag = "gap-weighted"
        else:
            x_ref = x.copy()
            weight = lambda y: float(np.sum((y - x_ref) ** 2))  # vanishes at x only
            tag = "quadratic-distance"
        perturbed = PiecewiseField(
            pf_t.surface,
            lambda y, f=pf_t.lower: np.asarray(f(y), float) + weight(y) * w1,
            lambda y, f=pf_t.upper: np.asarray(f(y), float) + weight(y) * w2)
        lhs = sliding_velocity(law, pf_t, x).vec
        rhs = sliding_velocity(law, perturbed, x).vec
        inputs = {"x": x, "perturbation": tag, "w1": w1, "w2": w2}
        return relative_deviation(lhs, rhs), inputs, lhs, rhs

    return _run_trials(law.name, "pointwise", cfg, trial)


def _scene_or_sample(rng, cfg: SamplerConfig, pf, lo: float, hi: float):
    if pf is None:
        pf_t, x, _ = sample_sliding_scene(rng, cfg.dim, lo, hi)
        return pf_t, x
    surf = pf.surface
    for _ in range(200):
        x = surf.point(rng.uniform(-2.0, 2.0, surf.dim - 1))
        if classify(pf, x) in SLIDING_KINDS:
            _, q, _, s = chart_values(pf, x)
            if in_kernel_domain(q, s):
                return pf, x
    raise RuntimeError("could not sample a sliding-set point of the supplied field")


# ---------------------------------------------------------------------------
# law-independent taxonomy check


def _sample_any_rates(rng, lo: float, hi: float) -> tuple[float, float]:
    """Rate pairs covering the whole taxonomy, kept away from band edges."""
    kind = int(rng.integers(0, 6))
    orient = 1.0 if rng.random() < 0.5 else -1.0
    a = float(rng.uniform(lo, hi))
    b = float(rng.uniform(lo, hi))
    if kind == 0:
        return orient * a, -orient * b        # sliding (attracting or repelling)
    if kind == 1:
        return -orient * a, orient * b
    if kind == 2:
        return orient * a, orient * b         # crossing
    if kind == 3:
        return 0.0, orient * b                # tangency
    if kind == 4:
        return orient * a, 0.0
    return orient * a, orient * a             # equal rates, exactly


def _predicates(a: float, b: float, tol: float) -> tuple[int, bool]:
    scale = max(1.0, abs(a), abs(b))
    prod = a * b
    band = tol * scale * scale
    sign = 0 if abs(prod) <= band else (1 if prod > 0.0 else -1)
    equal = abs(a - b) <= tol * scale
    return sign, equal


def check_sliding_region_invariance(cfg: SamplerConfig,
                                    pf: PiecewiseField = None) -> AuditReport:
    lo, hi = cfg.magnitude_range
    lo = max(lo, 0.3)  # keep transported rates clear of the predicate bands
    tol = CHECK_TOLERANCES["sliding-region-invariance"]

    def trial(rng):
        if pf is None:
            surf = sample_surface(rng, cfg.dim)
            zt = rng.uniform(-2.0, 2.0, cfg.dim - 1)
            x = surf.point(zt)
            q, s = _sample_any_rates(rng, lo, hi)
            p = _signed_magnitudes(rng, cfg.dim - 1, lo, hi)
            r = _signed_magnitudes(rng, cfg.dim - 1, lo, hi)
            J = surf.lift_jacobian(x)
            pf_t = PiecewiseField(surf, _constant(J @ np.append(p, q)),
                                  _constant(J @ np.append(r, s)))
        else:
            pf_t = pf
            surf = pf.surface
            x = surf.point(rng.uniform(-2.0, 2.0, surf.dim - 1))
        a0, b0 = normal_components(pf_t, x)
        phi, target = sample_graph_map(rng, surf)
        moved = pushforward_pair(phi, pf_t, surface=target)
        y = phi(x)
        a1, b1 = normal_components(moved, y)
        same = _predicates(a0, b0, tol) == _predicates(a1, b1, tol)
        inputs = {"x": x, "rates_before": (a0, b0), "rates_after": (a1, b1),
                  "map": phi.name, "surface": surf.name, "image": target.name}
        return (0.0 if same else 1.0), inputs, (a0, b0), (a1, b1)

    return _run_trials("(any)", "sliding-region-invariance", cfg, trial)


# ---------------------------------------------------------------------------
# dispatch


_LAW_CHECK_FNS = {
    "matrix-equivariance": check_matrix_equivariance,
    "homogeneity-linearity": check_homogeneity_linearity,
    "linear-dependence": check_linear_dependence,
    "continuous-limit": check_continuous_limit,
    "parametrization-consistency": check_parametrization_consistency,
    "pointwise": check_pointwise,
}


def run_check(name: str, law: SlidingLaw, cfg: SamplerConfig,
              pf: PiecewiseField = None) -> AuditReport:
    """Run one named check; ``all`` is handled by ``run_all``."""
    if name == "sliding-region-invariance":
        return check_sliding_region_invariance(cfg, pf=pf)
    if name not in _LAW_CHECK_FNS:
        raise ValueError(f"unknown check {name!r}; "
                         f"available: {', '.join([*LAW_CHECKS, 'sliding-region-invariance'])}")
    if name == "parametrization-consistency":
        return check_parametrization_consistency(law, cfg, pf=pf)
    return _LAW_CHECK_FNS[name](law, cfg)


def run_all(law: SlidingLaw, cfg: SamplerConfig) -> list:
    """The six law-dependent checks, in catalog order."""
    return [run_check(name, law, cfg) for name in LAW_CHECKS]

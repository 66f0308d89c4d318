"""Event-driven integration of piecewise fields.

Free flight uses a fixed-step classical Runge-Kutta step on whichever side
of the surface the state lives; surface hits are localized by bisecting the
gap along the dense output of the last step.  Constrained (sliding) motion
is integrated in the chart: the reduced state is the tangential coordinate
vector, the right-hand side is the law's chart velocity, and ambient states
are recovered by lifting, which confines the trajectory to the surface up to
round-off.  Sliding persists while the normal rates keep the sign pattern
established at entry (lower rate positive and upper rate negative for an
attracting segment, the opposite for a repelling one); the first pattern
break is localized and the run resumes on the side whose field then points
away from the surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .fields import PiecewiseField, RegionKind, classify_pair, normal_components
from .geometry import Array
from .laws import EQUAL_RATE_TOL, SlidingLaw, chart_values


class Mode(Enum):
    """Phase of the hybrid run; values are the codes used in trajectory files."""

    FREE_LOWER = "1"
    FREE_UPPER = "2"
    SLIDING = "S"


class EventKind(Enum):
    SURFACE_HIT = "SurfaceHit"
    SLIDING_ENTRY = "SlidingEntry"
    SLIDING_EXIT = "SlidingExit"
    CROSSING_THROUGH = "CrossingThrough"
    SINGULAR_STOP = "SingularStop"
    TIME_END = "TimeEnd"


@dataclass(frozen=True)
class EventRecord:
    time: float
    state: Array
    kind: EventKind
    normal_rates: Optional[tuple[float, float]] = None


@dataclass(frozen=True)
class Segment:
    """One maximal single-mode piece of a trajectory."""

    mode: Mode
    times: Array
    states: Array


@dataclass
class Trajectory:
    segments: list = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def final_time(self) -> Optional[float]:
        if self.segments:
            return float(self.segments[-1].times[-1])
        return float(self.events[-1].time) if self.events else None

    @property
    def final_state(self) -> Optional[Array]:
        if self.segments:
            return self.segments[-1].states[-1]
        return self.events[-1].state if self.events else None

    @property
    def final_mode(self) -> Optional[Mode]:
        return self.segments[-1].mode if self.segments else None

    def events_of(self, kind: EventKind) -> list:
        return [e for e in self.events if e.kind is kind]


@dataclass(frozen=True)
class IntegratorOptions:
    step: float
    t_end: float
    event_tol: float = 1e-10
    sliding_tol: float = 1e-7
    max_events: int = 1000

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and np.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not np.isfinite(self.t_end):
            raise ValueError("t_end must be finite")
        if not (self.event_tol > 0.0 and self.sliding_tol > 0.0):
            raise ValueError("tolerances must be positive")
        if self.max_events < 1:
            raise ValueError("max_events must be at least 1")


class IntegrationError(RuntimeError):
    """Integration failure; carries the partial trajectory when one exists."""

    def __init__(self, message: str, trajectory: Optional[Trajectory] = None):
        super().__init__(message)
        self.trajectory = trajectory


def rk4_step(fld: Callable[[Array], Array], x: Array, h: float) -> Array:
    """One classical fourth-order Runge-Kutta step for an autonomous field."""
    x = np.asarray(x, dtype=float)
    k1 = np.asarray(fld(x), dtype=float)
    k2 = np.asarray(fld(x + (0.5 * h) * k1), dtype=float)
    k3 = np.asarray(fld(x + (0.5 * h) * k2), dtype=float)
    k4 = np.asarray(fld(x + h * k3), dtype=float)
    return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def locate_event(f: Callable[[float], float], t_lo: float, t_hi: float,
                 rel_tol: float = 1e-10) -> float:
    """Bisect a sign change of ``f`` on [t_lo, t_hi] to a bracket of width
    ``rel_tol * (t_hi - t_lo)``; returns the bracket midpoint.
    """
    if not t_hi > t_lo:
        raise ValueError("need t_hi > t_lo")
    f_lo = float(f(t_lo))
    f_hi = float(f(t_hi))
    if f_lo == 0.0:
        return t_lo
    if f_hi == 0.0:
        return t_hi
    if f_lo * f_hi > 0.0:
        raise ValueError("no sign change on the bracket")
    width_goal = rel_tol * (t_hi - t_lo)
    for _ in range(200):
        if t_hi - t_lo <= width_goal:
            break
        mid = 0.5 * (t_lo + t_hi)
        if mid <= t_lo or mid >= t_hi:
            break
        f_mid = float(f(mid))
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            t_hi = mid
        else:
            t_lo, f_lo = mid, f_mid
    return 0.5 * (t_lo + t_hi)


def _segment(mode: Mode, times: list, states: list) -> Segment:
    return Segment(mode, np.asarray(times, dtype=float), np.vstack(states))


def integrate(pf: PiecewiseField, law: SlidingLaw, x0, t0: float,
              opts: IntegratorOptions) -> Trajectory:
    """Run the hybrid system from ``x0`` at ``t0`` until ``opts.t_end``.

    Events are recorded in order: every arrival on the surface emits a
    SurfaceHit followed by its resolution (CrossingThrough, SlidingEntry, or
    SingularStop); runs that start on the surface emit the same pair at t0.
    A SingularStop halts the run; otherwise a TimeEnd closes it.  Exceeding
    ``max_events`` raises with the partial trajectory attached.
    """
    surf = pf.surface
    x = np.atleast_1d(np.asarray(x0, dtype=float))
    if x.size != surf.dim:
        raise ValueError(f"state has size {x.size}, surface lives in R^{surf.dim}")
    if not np.all(np.isfinite(x)):
        raise IntegrationError("non-finite initial state")
    t = float(t0)
    t_end = float(opts.t_end)
    if t_end < t:
        raise ValueError("t_end lies before t0")
    traj = Trajectory()
    if t_end == t:
        return traj

    time_scale = 1e-14 * (1.0 + abs(t_end))

    def emit(kind: EventKind, tt: float, xx: Array, rates=None) -> None:
        if len(traj.events) >= opts.max_events:
            raise IntegrationError("max_events exceeded", trajectory=traj)
        traj.events.append(EventRecord(float(tt), np.array(xx, dtype=float), kind, rates))

    def snap(xx: Array) -> Array:
        # place exactly on the surface: zero height in the chart
        return surf.point(xx[:-1])

    def clamp(tt: float) -> float:
        return t_end if abs(tt - t_end) <= time_scale else tt

    # -- free flight -------------------------------------------------------

    def run_free(mode: Mode, t: float, x: Array, from_surface: bool):
        fld = pf.lower if mode is Mode.FREE_LOWER else pf.upper
        sgn = -1.0 if mode is Mode.FREE_LOWER else 1.0
        times, states = [t], [x]
        first = from_surface
        while t < t_end - time_scale:
            h = min(opts.step, t_end - t)
            x1 = rk4_step(fld, x, h)
            if not np.all(np.isfinite(x1)):
                raise IntegrationError("non-finite state during free flight", traj)
            g1 = surf.gap(x1)
            if first:
                if g1 * sgn <= 0.0:
                    raise IntegrationError(
                        "trajectory failed to leave the surface "
                        "(reduce the step or check the field)", traj)
                first = False
            elif g1 * sgn < 0.0 or g1 == 0.0:
                x_frozen = x

                def gap_along(tau: float) -> float:
                    return surf.gap(rk4_step(fld, x_frozen, tau)) if tau > 0.0 \
                        else surf.gap(x_frozen)

                tau = locate_event(gap_along, 0.0, h, rel_tol=opts.event_tol)
                t_hit = clamp(t + tau)
                x_hit = snap(rk4_step(fld, x, tau))
                times.append(t_hit)
                states.append(x_hit)
                traj.segments.append(_segment(mode, times, states))
                rates = normal_components(pf, x_hit)
                emit(EventKind.SURFACE_HIT, t_hit, x_hit, rates)
                return "surface", t_hit, x_hit, rates
            t, x = clamp(t + h), x1
            times.append(t)
            states.append(x)
        traj.segments.append(_segment(mode, times, states))
        return "end", t_end, x, None

    # -- sliding -----------------------------------------------------------

    def run_sliding(t: float, x: Array, rates: tuple):
        a0, b0 = rates
        # sign pattern that keeps sliding alive; at a tangency entry the
        # pattern is derived from the rate that is bounded away from zero
        attracting = a0 > 0.0 if abs(a0) >= abs(b0) else b0 < 0.0
        sa, sb = (1.0, -1.0) if attracting else (-1.0, 1.0)
        z = x[:-1].copy()

        def rhs(zz: Array) -> Array:
            # trial stages during exit localization may step just past the
            # sliding set; evaluate the kernel as a continuous extension
            # there (only states on the valid side are ever accepted) and
            # stop hard if the rates collide
            p, q, r, s = chart_values(pf, surf.point(zz))
            if abs(q - s) < EQUAL_RATE_TOL * max(abs(q), abs(s), 1.0):
                raise IntegrationError(
                    "sliding reached the singular set (equal normal rates)", traj)
            return np.atleast_1d(np.asarray(law.kernel(p, q, r, s), dtype=float))

        def rate_along(index: int, sig: float):
            z_frozen = z

            def f(tau: float) -> float:
                zz = rk4_step(rhs, z_frozen, tau) if tau > 0.0 else z_frozen
                return sig * normal_components(pf, surf.point(zz))[index]

            return f

        times, states = [t], [x]
        cur = (a0, b0)
        while t < t_end - time_scale:
            h = min(opts.step, t_end - t)
            z1 = rk4_step(rhs, z, h)
            x1 = surf.point(z1)
            if not np.all(np.isfinite(x1)):
                raise IntegrationError("non-finite state during sliding", traj)
            a1, b1 = normal_components(pf, x1)
            crossings = []
            for index, sig, v0, v1 in ((0, sa, cur[0], a1), (1, sb, cur[1], b1)):
                if sig * v1 < 0.0:
                    if sig * v0 <= opts.event_tol:
                        crossings.append((0.0, index))  # entered at the boundary
                    else:
                        crossings.append(
                            (locate_event(rate_along(index, sig), 0.0, h,
                                          rel_tol=opts.event_tol), index))
            if crossings:
                tau, index = min(crossings)
                t_exit = clamp(t + tau)
                z_exit = rk4_step(rhs, z, tau) if tau > 0.0 else z
                x_exit = surf.point(z_exit)
                if tau > 0.0:
                    times.append(t_exit)
                    states.append(x_exit)
                traj.segments.append(_segment(Mode.SLIDING, times, states))
                exit_rates = normal_components(pf, x_exit)
                emit(EventKind.SLIDING_EXIT, t_exit, x_exit, exit_rates)
                # resume on the side whose field now points away
                if index == 0:
                    mode = Mode.FREE_LOWER if sa > 0.0 else Mode.FREE_UPPER
                else:
                    mode = Mode.FREE_UPPER if sb < 0.0 else Mode.FREE_LOWER
                return "free", t_exit, x_exit, mode
            g = surf.gap(x1)
            if abs(g) > opts.sliding_tol * (1.0 + float(np.linalg.norm(x1))):
                raise IntegrationError("sliding state drifted off the surface", traj)
            t, z, x, cur = clamp(t + h), z1, x1, (a1, b1)
            times.append(t)
            states.append(x)
        traj.segments.append(_segment(Mode.SLIDING, times, states))
        return "end", t_end, x, None

    # -- surface dispatch and the outer mode loop ---------------------------

    def on_surface(t: float, x: Array, rates: tuple):
        a, b = rates
        kind = classify_pair(a, b)
        if kind is RegionKind.CROSSING:
            emit(EventKind.CROSSING_THROUGH, t, x, rates)
            return "free", t, x, (Mode.FREE_UPPER if a > 0.0 else Mode.FREE_LOWER), True
        if kind is RegionKind.SINGULAR_EQUAL_NORMALS:
            emit(EventKind.SINGULAR_STOP, t, x, rates)
            return "halt", t, x, None, None
        emit(EventKind.SLIDING_ENTRY, t, x, rates)
        return "sliding", t, x, rates, None

    g0 = surf.gap(x)
    if abs(g0) <= opts.sliding_tol * (1.0 + float(np.linalg.norm(x))):
        x = snap(x)
        rates = normal_components(pf, x)
        emit(EventKind.SURFACE_HIT, t, x, rates)
        phase = on_surface(t, x, rates)
    else:
        mode = Mode.FREE_LOWER if g0 < 0.0 else Mode.FREE_UPPER
        phase = ("free", t, x, mode, False)

    while True:
        tag = phase[0]
        if tag == "halt":
            return traj
        if tag == "free":
            _, t, x, mode, from_surface = phase
            res = run_free(mode, t, x, from_surface)
        else:
            _, t, x, rates, _ = phase
            res = run_sliding(t, x, rates)
        if res[0] == "surface":
            _, t, x, rates = res
            phase = on_surface(t, x, rates)
        elif res[0] == "free":
            _, t, x, mode = res
            phase = ("free", t, x, mode, True)
        else:
            t, x = res[1], res[2]
            break

    final_rates = None
    if traj.segments and traj.segments[-1].mode is Mode.SLIDING:
        final_rates = normal_components(pf, x)
    emit(EventKind.TIME_END, t, x, final_rates)
    return traj

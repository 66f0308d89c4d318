"""Sliding vector fields on discontinuity surfaces.

Piecewise-continuous fields meeting along the graph of a height function,
sliding rules (convex-combination and alternatives) evaluated either in the
surface chart or directly in ambient coordinates, a randomized audit
harness for the axioms such rules must satisfy, and an event-driven hybrid
integrator with a dry-friction demonstration scenario.
"""

__version__ = "0.1.0"

from .audit import AuditReport, SamplerConfig, run_all, run_check
from .fields import (PiecewiseField, RegionKind, classify, classify_pair,
                     normal_components, pushforward_pair)
from .geometry import (Diffeo, SurfaceChart, TangentVector, compose,
                       factor_through_plane, flat_surface, identity_diffeo,
                       linear_diffeo, make_surface, paraboloid_surface,
                       plane_warp, pushforward, tangency_defect, tilt_surface,
                       translation_diffeo, vertical_shear)
from .integrator import (EventKind, EventRecord, IntegrationError,
                         IntegratorOptions, Mode, Segment, Trajectory,
                         integrate, locate_event, rk4_step)
from .laws import (FILIPPOV, MEAN, SlidingLaw, chart_values, chart_velocity,
                   filippov_coefficient, filippov_sliding, law_catalog,
                   resolve_law, scaled_filippov, sliding_velocity)
from .scenarios import (ConfigError, ScenarioConfig, build_scenario,
                        load_config, parse_config, scenario_constant_tilt,
                        scenario_friction)

__all__ = [
    "__version__",
    "AuditReport", "SamplerConfig", "run_all", "run_check",
    "PiecewiseField", "RegionKind", "classify", "classify_pair",
    "normal_components", "pushforward_pair",
    "Diffeo", "SurfaceChart", "TangentVector", "compose",
    "factor_through_plane", "flat_surface", "identity_diffeo", "linear_diffeo",
    "make_surface", "paraboloid_surface", "plane_warp", "pushforward",
    "tangency_defect", "tilt_surface", "translation_diffeo", "vertical_shear",
    "EventKind", "EventRecord", "IntegrationError", "IntegratorOptions",
    "Mode", "Segment", "Trajectory", "integrate", "locate_event", "rk4_step",
    "FILIPPOV", "MEAN", "SlidingLaw", "chart_values", "chart_velocity",
    "filippov_coefficient", "filippov_sliding", "law_catalog", "resolve_law",
    "scaled_filippov", "sliding_velocity",
    "ConfigError", "ScenarioConfig", "build_scenario", "load_config",
    "parse_config", "scenario_constant_tilt", "scenario_friction",
]

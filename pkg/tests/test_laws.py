import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from slidefield.fields import PiecewiseField
from slidefield.geometry import flat_surface, paraboloid_surface, tangency_defect, tilt_surface
from slidefield.laws import (
    EQUAL_RATE_TOL,
    FILIPPOV,
    MEAN,
    SlidingLaw,
    chart_values,
    chart_velocity,
    filippov_blend,
    filippov_coefficient,
    filippov_sliding,
    in_kernel_domain,
    law_catalog,
    mean_blend,
    require_in_kernel_domain,
    resolve_law,
    scaled_filippov,
    sliding_velocity,
)

rate = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)
tangential = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False)


def constant(v):
    arr = np.asarray(v, dtype=float)
    return lambda x: arr.copy()


# --- domain -----------------------------------------------------------------


def test_kernel_domain_membership():
    assert in_kernel_domain(1.0, -1.0)
    assert in_kernel_domain(-2.0, 0.5)
    assert in_kernel_domain(0.0, -1.0)  # tangent lower field is allowed
    assert in_kernel_domain(1.0, 0.0)
    assert not in_kernel_domain(1.0, 2.0)  # same side
    assert not in_kernel_domain(-1.0, -0.5)
    assert not in_kernel_domain(1.0, 1.0)  # equal
    assert not in_kernel_domain(0.0, 0.0)
    assert not in_kernel_domain(1.0, 1.0 + 5e-13)  # within the relative guard


def test_require_in_kernel_domain_messages():
    with pytest.raises(ValueError, match="same side"):
        require_in_kernel_domain(1.0, 2.0)
    # same-sign equal rates hit the same-side check first
    with pytest.raises(ValueError, match="same side"):
        require_in_kernel_domain(0.5, 0.5)
    with pytest.raises(ValueError, match="equal"):
        require_in_kernel_domain(0.0, 0.0)
    with pytest.raises(ValueError, match="equal"):
        require_in_kernel_domain(1e-14, -1e-14)
    require_in_kernel_domain(1.0, -1.0)  # no raise


def test_equal_rate_guard_is_relative():
    # a gap of 1e-10 between rates of size 1e3 is still "nearly equal"
    assert not in_kernel_domain(1e3, 1e3 + 1e-10)
    assert in_kernel_domain(1e-6, -1e-6)


# --- kernels ----------------------------------------------------------------


def test_filippov_blend_frozen_value():
    assert filippov_blend(np.array([2.0]), 1.0, np.array([4.0]), -1.0) == pytest.approx(3.0)


def test_filippov_blend_exact_when_tangentials_agree():
    p = np.array([0.1 + 0.2, -1.7])  # deliberately non-representable sum
    out = filippov_blend(p, 0.3, p.copy(), -2.1)
    assert np.array_equal(out, p)


@given(tangential, rate, tangential, rate)
def test_filippov_blend_is_convex(p, q, r, s):
    assume(q * s <= 0.0 and abs(q - s) > 1e-6)
    w = filippov_blend(np.array([p]), q, np.array([r]), s)[0]
    assert min(p, r) - 1e-12 <= w <= max(p, r) + 1e-12


def test_mean_blend_frozen_value():
    assert mean_blend(np.array([1.0]), 2.0, np.array([-0.5]), -1.0)[0] == 0.25


def test_blend_validates_domain():
    with pytest.raises(ValueError, match="same side"):
        FILIPPOV.blend([1.0], 1.0, [2.0], 2.0)
    with pytest.raises(ValueError, match="equal"):
        MEAN.blend([1.0], 0.0, [2.0], 0.0)
    out = FILIPPOV.blend([2.0], 1.0, [4.0], -1.0)
    assert out.shape == (1,) and out[0] == pytest.approx(3.0)


def test_dependent_values_give_zero_for_filippov_but_not_mean():
    # both chart values on one line through the origin: (1, 1) and (-2, -2)
    fil = FILIPPOV.blend([1.0], 1.0, [-2.0], -2.0)
    avg = MEAN.blend([1.0], 1.0, [-2.0], -2.0)
    assert fil[0] == pytest.approx(0.0, abs=1e-15)
    assert avg[0] == pytest.approx(-0.5)


def test_scaled_filippov_construction():
    law = scaled_filippov(2)
    assert law.name == "scaled_filippov(2)"
    base = filippov_blend(np.array([2.0]), 1.0, np.array([4.0]), -1.0)
    assert law.blend([2.0], 1.0, [4.0], -1.0)[0] == pytest.approx(2.0 * base[0])
    with pytest.raises(ValueError):
        scaled_filippov(1.0)
    with pytest.raises(ValueError):
        scaled_filippov(float("nan"))


def test_law_catalog_and_resolution():
    assert set(law_catalog()) == {"filippov", "mean"}
    assert resolve_law("filippov") is FILIPPOV
    assert resolve_law(" mean ") is MEAN
    law = resolve_law("scaled_filippov(2.5)")
    assert isinstance(law, SlidingLaw) and law.name == "scaled_filippov(2.5)"
    with pytest.raises(ValueError, match="bad scale"):
        resolve_law("scaled_filippov(abc)")
    with pytest.raises(ValueError, match="unknown law"):
        resolve_law("bogus")
    with pytest.raises(ValueError):
        resolve_law("scaled_filippov(1)")


# --- evaluation on piecewise fields ----------------------------------------


def test_chart_values_frozen():
    # tilt slope 1 at (0.5, 0.5): rate is v2 - v1
    pf = PiecewiseField(tilt_surface([1.0]), constant([1.0, 2.0]), constant([0.5, -1.0]))
    p, q, r, s = chart_values(pf, [0.5, 0.5])
    assert p[0] == 1.0 and q == pytest.approx(1.0)
    assert r[0] == 0.5 and s == pytest.approx(-1.5)


def test_chart_velocity_matches_blend_of_chart_values():
    pf = PiecewiseField(tilt_surface([1.0]), constant([1.0, 2.0]), constant([0.5, -1.0]))
    x = [0.5, 0.5]
    p, q, r, s = chart_values(pf, x)
    assert np.allclose(chart_velocity(FILIPPOV, pf, x), FILIPPOV.blend(p, q, r, s))


def test_sliding_velocity_flat_frozen():
    pf = PiecewiseField(flat_surface(2), constant([1.0, 1.0]), constant([1.0, -1.0]))
    tv = sliding_velocity(FILIPPOV, pf, [0.0, 0.0])
    assert np.allclose(tv.vec, [1.0, 0.0], atol=1e-15)
    direct = filippov_sliding(pf, [0.0, 0.0])
    assert np.allclose(direct.vec, [1.0, 0.0], atol=1e-15)


def test_sliding_velocity_repelling_and_tangency():
    surf = flat_surface(2)
    repel = PiecewiseField(surf, constant([1.0, -1.0]), constant([1.0, 1.0]))
    assert np.allclose(sliding_velocity(FILIPPOV, repel, [0.0, 0.0]).vec, [1.0, 0.0])
    # upper rate exactly zero: the blend collapses onto the upper value
    tang = PiecewiseField(surf, constant([1.0, 1.0]), constant([2.0, 0.0]))
    assert np.allclose(sliding_velocity(FILIPPOV, tang, [0.0, 0.0]).vec, [2.0, 0.0])
    assert np.allclose(filippov_sliding(tang, [0.0, 0.0]).vec, [2.0, 0.0])


def test_sliding_velocity_rejects_crossing_and_singular():
    surf = flat_surface(2)
    cross = PiecewiseField(surf, constant([0.0, 1.0]), constant([0.0, 2.0]))
    with pytest.raises(ValueError, match="not in sliding region"):
        sliding_velocity(FILIPPOV, cross, [0.0, 0.0])
    with pytest.raises(ValueError, match="not in sliding region"):
        filippov_sliding(cross, [0.0, 0.0])
    equal = PiecewiseField(surf, constant([0.0, 1.0]), constant([0.0, 1.0]))
    with pytest.raises(ValueError, match="not in sliding region"):
        sliding_velocity(FILIPPOV, equal, [0.0, 0.0])


def test_filippov_coefficient():
    assert filippov_coefficient(1.0, -1.0) == pytest.approx(0.5)
    assert filippov_coefficient(3.0, -1.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        filippov_coefficient(1.0, 2.0)


@given(rate, rate)
def test_filippov_coefficient_in_unit_interval(a, b):
    assume(a * b <= 0.0 and abs(a - b) > 1e-6)
    lam = filippov_coefficient(a, b)
    assert -1e-12 <= lam <= 1.0 + 1e-12


def dual_route_fields():
    rng = np.random.default_rng(29)
    surfaces = [flat_surface(2), tilt_surface([1.0]), tilt_surface([-0.7]),
                paraboloid_surface(0.5)]
    for _ in range(200):
        surf = surfaces[rng.integers(len(surfaces))]
        z = rng.uniform(-1.5, 1.5, size=1)
        x = surf.point(z)
        n = surf.normal(z)
        a = rng.uniform(0.2, 3.0)
        b = -rng.uniform(0.2, 3.0)
        if rng.integers(2):
            a, b = b, a
        t1 = rng.uniform(-2.0, 2.0, size=2)
        t2 = rng.uniform(-2.0, 2.0, size=2)
        lo = t1 - (t1 @ n) * n + a * n
        up = t2 - (t2 @ n) * n + b * n
        yield PiecewiseField(surf, constant(lo), constant(up)), x


def test_dual_routes_agree_for_filippov():
    # chart-conjugated kernel versus the direct ambient convex combination
    for pf, x in dual_route_fields():
        via_chart = sliding_velocity(FILIPPOV, pf, x)
        direct = filippov_sliding(pf, x)
        scale = max(1.0, float(np.linalg.norm(direct.vec)))
        assert np.linalg.norm(via_chart.vec - direct.vec) / scale <= 1e-8


def test_sliding_velocity_is_tangent():
    for pf, x in dual_route_fields():
        tv = sliding_velocity(FILIPPOV, pf, x)
        assert tangency_defect(pf.surface, tv) <= 1e-9
        tv2 = filippov_sliding(pf, x)
        assert tangency_defect(pf.surface, tv2) <= 1e-9


def test_mean_law_lifts_but_disagrees_with_direct_route():
    # the mean kernel still produces a tangent vector, it just is not the
    # convex combination (rates chosen so the filippov weight is 0.75)
    pf = PiecewiseField(tilt_surface([1.0]), constant([1.0, 2.0]), constant([-3.0, -6.0]))
    tv = sliding_velocity(MEAN, pf, [0.0, 0.0])
    assert tangency_defect(pf.surface, tv) <= 1e-12
    direct = filippov_sliding(pf, [0.0, 0.0])
    assert not np.allclose(tv.vec, direct.vec, atol=1e-6)

import cmath
import math

import numpy as np
import pytest

import oracles
from maxcone import integrate as I
from maxcone.errors import NonConvergent, PathThroughSingularity

TWO_PI = 2.0 * math.pi


def test_basepoint_maps_to_origin(p10):
    s = I.immersion(p10.default_basepoint(), p10)
    assert s.f == (0.0, 0.0, 0.0)


def test_real_axis_displacement_frozen(p10):
    # frozen from the composite Gauss-Legendre oracle (128 panels, order 20)
    disp, err = I.integrate_path(I.PathSpec(waypoints=(3.0 + 0j, 4.0 + 0j)), p10)
    expect = (-0.29809400516116313, 0.0, 0.077196830120309465)
    assert disp == pytest.approx(expect, abs=1e-9)
    assert err < 1e-9


def _segment_clearance(u, v, p):
    """Distance from segment (u, v) to the nearest branch point or 0."""
    d = v - u
    out = math.inf
    for c in list(p.branch_points()) + [0.0]:
        t = ((c - u) * d.conjugate()).real / abs(d) ** 2
        t = min(max(t, 0.0), 1.0)
        out = min(out, abs(u + t * d - c))
    return out


def test_path_oracle_agreement_random_paths(p21):
    # fixed-order composite Gauss is only trustworthy away from branch
    # points, so the sampled segments keep a clearance from them
    rng = np.random.default_rng(11)
    from maxcone import core

    pts = core.regular_sample_points(p21, 60, rng, margin=0.05)
    count = 0
    for k in range(0, len(pts) - 1, 2):
        wps = (complex(pts[k]), complex(pts[k + 1]))
        if _segment_clearance(wps[0], wps[1], p21) < 0.1:
            continue
        try:
            disp, err = I.integrate_path(I.PathSpec(waypoints=wps), p21)
        except PathThroughSingularity:
            continue
        ref = oracles.composite_gauss_segments(list(wps), p21)
        assert np.max(np.abs(np.asarray(disp) - ref)) <= 1e-8
        count += 1
    assert count >= 10


def test_error_estimates_bound_oracle_difference(p22):
    rng = np.random.default_rng(13)
    from maxcone import core

    pts = core.regular_sample_points(p22, 300, rng, margin=0.02)
    checked = 0
    for k in range(0, len(pts) - 1, 2):
        if checked >= 50:
            break
        wps = (complex(pts[k]), complex(pts[k + 1]))
        if _segment_clearance(wps[0], wps[1], p22) < 0.1:
            continue
        try:
            disp, err = I.integrate_path(I.PathSpec(waypoints=wps), p22)
        except PathThroughSingularity:
            continue
        ref = oracles.composite_gauss_segments(list(wps), p22, n_panels=96)
        true_err = float(np.max(np.abs(np.asarray(disp) - ref)))
        assert true_err <= max(err, 1e-12)
        checked += 1
    assert checked >= 50


def test_path_independence_homotopic(p10):
    z0, z1 = 3.0 + 0.5j, 0.2 + 2.5j
    direct = I.integrate_path(I.PathSpec(waypoints=(z0, z1)), p10)[0]
    detour = I.integrate_path(I.PathSpec(waypoints=(z0, 2.8 + 2.8j, 1.5 + 3j, z1)), p10)[0]
    assert np.asarray(direct) == pytest.approx(np.asarray(detour), abs=1e-8)


def test_path_independence_20_random_pairs(p21):
    # homotopic pairs: both routes stay in the upper half-plane, so no
    # singular interval or winding difference can separate them
    rng = np.random.default_rng(17)
    checked = 0
    while checked < 20:
        r0, r1 = rng.uniform(0.3, 6.0, size=2)
        t0, t1 = rng.uniform(0.15, math.pi - 0.15, size=2)
        z0 = r0 * cmath.exp(1j * t0)
        z1 = r1 * cmath.exp(1j * t1)
        mid1 = 0.5 * (z0 + z1) + rng.uniform(0.1, 1.0) * 1j
        mid2 = 0.5 * (z0 + z1) + rng.uniform(1.2, 2.5) * 1j
        try:
            a = I.integrate_path(I.PathSpec(waypoints=(z0, mid1, z1)), p21)[0]
            b = I.integrate_path(I.PathSpec(waypoints=(z0, mid2, z1)), p21)[0]
        except PathThroughSingularity:
            continue
        assert np.asarray(a) == pytest.approx(np.asarray(b), abs=1e-8)
        checked += 1


def test_f2_is_minus_arg(p10):
    for z in (0.7j, -0.5 + 0.3j, 3.0 + 0j, -4.0 + 0j, 0.25 - 0.6j):
        s = I.immersion(z, p10)
        assert s.f[1] == pytest.approx(-cmath.phase(z), abs=1e-10)


def test_winding_shifts_f2_by_2pi(p10):
    # closed polyline around 0 once: f2 shifts by -2pi, f1 and f3 return
    th = np.linspace(0.0, 2 * np.pi, 65)
    circle = [0.5 * cmath.exp(1j * t) for t in th]
    path = I.PathSpec(waypoints=tuple(circle))
    disp, _ = I.integrate_path(path, p10)
    assert disp[1] == pytest.approx(-TWO_PI, abs=1e-8)
    assert abs(disp[0]) <= 1e-8 and abs(disp[2]) <= 1e-8
    assert I.winding_of_path(path) == pytest.approx(1.0, abs=1e-12)


def test_mirror_symmetry_of_immersion(p21):
    for z in (0.8 + 0.6j, -1.5 + 0.9j, 4.0 + 2.0j):
        fu = np.asarray(I.immersion(z, p21).f)
        fl = np.asarray(I.immersion(z.conjugate(), p21).f)
        assert fu == pytest.approx(fl * np.array([1.0, -1.0, 1.0]), abs=1e-8)


def test_x2_extent_is_pi(p10):
    # positive and negative real axis rows sit pi apart in x2
    s_pos = I.immersion(3.0 + 0j, p10)
    s_neg = I.immersion(-3.0 + 0j, p10)
    assert s_pos.f[1] - s_neg.f[1] == pytest.approx(math.pi, abs=1e-10)


def test_loop_period_around_zero(p10, p22):
    for p in (p10, p22):
        pv = I.loop_period(0, p)
        assert np.asarray(pv.v) == pytest.approx([0.0, -TWO_PI, 0.0], abs=1e-8)


def test_loop_period_around_infinity(p10, p22):
    for p in (p10, p22):
        pv = I.loop_period(math.inf, p)
        assert np.asarray(pv.v) == pytest.approx([0.0, TWO_PI, 0.0], abs=1e-8)


def test_residue_closure(p21):
    v0 = np.asarray(I.loop_period(0, p21).v)
    vi = np.asarray(I.loop_period(math.inf, p21).v)
    assert v0 + vi == pytest.approx([0.0, 0.0, 0.0], abs=1e-8)


def test_loop_period_matches_oracle(p21):
    pv = I.loop_period(0, p21)
    ref = oracles.composite_gauss_circle(0.5 * p21.inner_radius(), p21)
    assert np.asarray(pv.v) == pytest.approx(ref, abs=1e-10)


def test_apex_four_sides_agree(p10):
    vals = {}
    for side in ("above", "below", "left", "right"):
        v, resid = I.apex((1.0, 2.0), side, p10)
        vals[side] = np.asarray(v)
        assert resid < 1e-6
    for a in vals.values():
        for b in vals.values():
            assert np.max(np.abs(a - b)) <= 1e-6


def test_apex_frozen_value(p10):
    # frozen from a 6-level extrapolation at eps0 = 1e-4
    v, _ = I.apex((1.0, 2.0), "above", p10)
    assert np.asarray(v) == pytest.approx(
        [0.59749287522094152, 0.0, -0.38841809960603774], abs=1e-8
    )


def test_apex_constant_along_interval(p10):
    # two interior points approached from above give the same limit
    mid_l, _ = I.apex((1.0, 1.4), "above", p10, eps0=1e-4)
    mid_r, _ = I.apex((1.6, 2.0), "above", p10, eps0=1e-4)
    assert np.asarray(mid_l) == pytest.approx(np.asarray(mid_r), abs=1e-6)


def test_apex_x2_is_minus_arg(p10, p11):
    v, _ = I.apex((1.0, 2.0), "above", p10)
    assert v[1] == pytest.approx(0.0, abs=1e-8)
    v, _ = I.apex((-2.0, -1.0), "above", p11)
    assert v[1] == pytest.approx(-math.pi, abs=1e-8)


def test_direct_branch_point_integration_hits_apex(p10):
    # endpoint integration through the sqrt substitution is an independent
    # route to the apex value
    apex_v, _ = I.apex((1.0, 2.0), "above", p10)
    for endpoint in (1.0, 2.0):
        s = I.immersion(complex(endpoint), p10)
        assert np.asarray(s.f) == pytest.approx(np.asarray(apex_v), abs=1e-6)


def test_apex_all_components(p22):
    for lo, hi in p22.intervals():
        vals = [np.asarray(I.apex((lo, hi), s, p22)[0]) for s in ("above", "below", "left", "right")]
        for a in vals:
            for b in vals:
                assert np.max(np.abs(a - b)) <= 1e-6


def test_apex_nonconvergent_raises(p10):
    with pytest.raises(NonConvergent):
        I.apex((1.0, 2.0), "above", p10, tol=1e-18)


def test_immersion_rejects_singular_targets(p10):
    with pytest.raises(PathThroughSingularity):
        I.immersion(1.5 + 0j, p10)
    with pytest.raises(PathThroughSingularity):
        I.immersion(0j, p10)


def test_pathspec_validation(p10):
    with pytest.raises(PathThroughSingularity):
        I.PathSpec(waypoints=(1 + 1j,))
    with pytest.raises(PathThroughSingularity):
        I.PathSpec(waypoints=(1 + 1j, 1 + 1j))
    # interior waypoint on a branch point
    with pytest.raises(PathThroughSingularity):
        I.integrate_path(I.PathSpec(waypoints=(3 + 0j, 2 + 0j, 3 + 1j)), p10)
    # segment crossing the singular interval
    with pytest.raises(PathThroughSingularity):
        I.integrate_path(I.PathSpec(waypoints=(1.5 + 1j, 1.5 - 1j)), p10)
    # segment lying on the interval
    with pytest.raises(PathThroughSingularity):
        I.integrate_path(I.PathSpec(waypoints=(0.5 + 0j, 1.7 + 0j)), p10)


def test_winding_consistency_multiple_turns(p10):
    th = np.linspace(0.0, 2 * np.pi, 129)
    loop = [0.4 * cmath.exp(1j * t) for t in th[:-1]]
    wps = tuple([0.4 + 0j] + loop[1:] + [0.4 + 0j] + loop[1:] + [0.4 + 0j])
    disp, _ = I.integrate_path(I.PathSpec(waypoints=wps), p10)
    assert disp[1] == pytest.approx(-2 * TWO_PI, abs=1e-8)
    assert abs(disp[0]) <= 1e-8 and abs(disp[2]) <= 1e-8

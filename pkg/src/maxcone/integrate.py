"""Contour integration of the form triple.

The immersion f(z) = Re of the path integral of (phi1, phi2, phi3) is
computed by adaptive Gauss-Kronrod quadrature over paths composed of legs:
radial segments and circular arcs centered at 0 (automatic routing),
straight segments (user paths), and a square-root reparametrized approach
leg for endpoints sitting exactly on a branch point. Arc/radial routing
keeps the integrand analytic along every leg and makes winding bookkeeping
exact, so f2 = -(accumulated angle) + Arg(basepoint) holds to quadrature
accuracy.

Loop periods around the two ends, apex limits of singular intervals
(Richardson extrapolation in sqrt(offset)), and polyline path integrals all
live here.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass

import numpy as np

from .core import phi_from_w, w_values
from .errors import NonConvergent, PathThroughSingularity, QuadratureFailure
from .params import SurfaceParams

# Gauss-7 / Kronrod-15 pair on [-1, 1] (QUADPACK abscissae and weights).
_XK = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_WK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_WG = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)
_GAUSS_IDX = np.arange(1, 15, 2)  # Gauss-7 nodes inside the Kronrod set

DEFAULT_SEGMENT_TOL = 1e-10
MAX_DEPTH = 40


@dataclass(frozen=True)
class PathSpec:
    """Polyline integration path with a branch-point clearance radius.

    avoidance_radius constrains interior waypoints only; None resolves to
    1e-3 times the smallest gap between consecutive branch points of the
    surface being integrated.
    """

    waypoints: tuple[complex, ...]
    avoidance_radius: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(complex(w) for w in self.waypoints))
        if len(self.waypoints) < 2:
            raise PathThroughSingularity("a path needs at least two waypoints")
        if self.avoidance_radius is not None and self.avoidance_radius <= 0:
            raise PathThroughSingularity("avoidance_radius must be positive")
        for u, v in zip(self.waypoints, self.waypoints[1:]):
            if u == v:
                raise PathThroughSingularity("consecutive waypoints must be distinct")

    def resolved_avoidance(self, p: SurfaceParams) -> float:
        if self.avoidance_radius is not None:
            return self.avoidance_radius
        return 1e-3 * p.min_gap()


@dataclass(frozen=True)
class ImmersionSample:
    """Domain point with its image in R^3 and a quadrature error estimate."""

    z: complex
    f: tuple[float, float, float]
    quad_error: float


@dataclass(frozen=True)
class PeriodVector:
    """Real part of a loop integral around one end (0 or inf)."""

    v: tuple[float, float, float]
    loop_center: float  # 0.0 or math.inf
    quad_error: float


# ---------------------------------------------------------------------------
# legs


class _Leg:
    """One smooth parametrized piece of a path, t in [0, 1]."""

    def points(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (z(t), dz/dt(t))."""
        raise NotImplementedError


@dataclass(frozen=True)
class ArcLeg(_Leg):
    r: float
    theta_a: float
    theta_b: float

    def points(self, t):
        th = self.theta_a + (self.theta_b - self.theta_a) * t
        z = self.r * np.exp(1j * th)
        return z, 1j * (self.theta_b - self.theta_a) * z


@dataclass(frozen=True)
class RadialLeg(_Leg):
    theta: float
    r_a: float
    r_b: float

    def points(self, t):
        rho = self.r_a + (self.r_b - self.r_a) * t
        e = cmath.exp(1j * self.theta)
        return rho * e, np.full_like(t, (self.r_b - self.r_a)) * e


@dataclass(frozen=True)
class SegmentLeg(_Leg):
    z_a: complex
    z_b: complex

    def points(self, t):
        dz = self.z_b - self.z_a
        return self.z_a + dz * t, np.full_like(t, dz, dtype=complex)


@dataclass(frozen=True)
class SqrtApproachLeg(_Leg):
    """Straight approach into a branch point c, reparametrized z = c + d t^2.

    The substitution turns the 1/sqrt(z - c) singularity of the forms into a
    bounded integrand; t runs from 1 (outer point) to 0 (the branch point),
    and quadrature nodes never touch t = 0.
    """

    c: complex
    z_outer: complex

    def points(self, t):
        s = 1.0 - t  # t=0 at z_outer, t=1 at the branch point
        d = self.z_outer - self.c
        return self.c + d * s**2, -2.0 * s * d * np.ones_like(t)


# ---------------------------------------------------------------------------
# quadrature


def adaptive_leg(leg: _Leg, coeff_fn, tol: float) -> tuple[np.ndarray, float]:
    """Adaptive G7/K15 over one leg; returns (complex 3-vector, error estimate).

    coeff_fn(z) evaluates the (3, N) form coefficients at the leg nodes.
    Interval halving against a global absolute budget: the worst panel is
    split until the summed |K15 - G7| estimate drops below tol. Panel width
    is capped at 2^-MAX_DEPTH; hitting the cap with the budget still blown
    signals a mis-routed path.
    """

    def panel(t0: float, t1: float):
        mid = 0.5 * (t0 + t1)
        half = 0.5 * (t1 - t0)
        t = mid + half * _XK
        z, dz = leg.points(t)
        vals = coeff_fn(z) * dz  # (3, 15)
        k15 = half * (vals @ _WK)
        g7 = half * (vals[:, _GAUSS_IDX] @ _WG)
        e = float(np.sum(np.abs(k15 - g7)))
        return e, t0, t1, k15

    counter = 0
    e, t0, t1, k15 = panel(0.0, 1.0)
    if e <= tol:
        return k15, e
    heap = [(-e, counter, t0, t1, k15)]
    err_sum = e
    min_width = 2.0**-MAX_DEPTH
    while err_sum > tol:
        neg_e, _, t0, t1, k15 = heapq.heappop(heap)
        if t1 - t0 <= min_width:
            raise QuadratureFailure(
                f"segment tolerance {tol:g} not reached at max depth "
                f"(err {err_sum:g}); the path may pass too close to a singularity"
            )
        err_sum += neg_e  # remove the split panel's estimate
        mid = 0.5 * (t0 + t1)
        for lo, hi in ((t0, mid), (mid, t1)):
            e, a, b, v = panel(lo, hi)
            counter += 1
            heapq.heappush(heap, (-e, counter, a, b, v))
            err_sum += e
    total = np.zeros(3, dtype=complex)
    for neg_e, _, _, _, v in heap:
        total += v
    return total, err_sum


def _integrate_leg(leg: _Leg, p: SurfaceParams, tol: float) -> tuple[np.ndarray, float]:
    """Adaptive quadrature of the maximal-surface form triple over one leg."""
    return adaptive_leg(leg, lambda z: phi_from_w(z, w_values(z, p)), tol)


def _integrate_legs(legs, p: SurfaceParams, tol: float) -> tuple[np.ndarray, float]:
    total = np.zeros(3, dtype=complex)
    err = 0.0
    for leg in legs:
        v, e = _integrate_leg(leg, p, tol)
        total += v
        err += e
    return total, err


# ---------------------------------------------------------------------------
# routing


def _nearest_branch_point(z: complex, p: SurfaceParams) -> tuple[float, float]:
    bps = p.branch_points()
    d = [abs(z - c) for c in bps]
    i = int(np.argmin(d))
    return bps[i], d[i]


def _patch_radius(c: float, p: SurfaceParams) -> float:
    """Local sqrt-substitution patch size: 1e-2 of the adjacent gap."""
    others = [x for x in p.branch_points() if x != c] + [0.0]
    gap = min(abs(c - x) for x in others)
    return 1e-2 * gap


def _route_legs(z: complex, p: SurfaceParams, basepoint: complex) -> list[_Leg]:
    """Arc/radial route from the basepoint to z.

    Standard route: arc at |z0| from Arg(z0) to +-pi/2, radial to |z|, arc to
    Arg(z). It crosses the real axis only at its endpoints, so it never meets
    a singular interval; the accumulated angle equals Arg(z) - Arg(z0).
    """
    r0, th0 = abs(basepoint), cmath.phase(basepoint)
    r1, th1 = abs(z), cmath.phase(z)
    hemi = math.pi / 2 if th1 >= 0 else -math.pi / 2
    legs: list[_Leg] = []
    if th0 != hemi:
        legs.append(ArcLeg(r=r0, theta_a=th0, theta_b=hemi))
    if r0 != r1:
        legs.append(RadialLeg(theta=hemi, r_a=r0, r_b=r1))
    if th1 != hemi:
        legs.append(ArcLeg(r=r1, theta_a=hemi, theta_b=th1))
    return legs


def _route_to_branch_point(c: float, p: SurfaceParams, basepoint: complex) -> list[_Leg]:
    """Route ending exactly on a branch point via the sqrt-substitution leg.

    Approaches along the real axis from the adjacent gap side, away from the
    interval that owns c.
    """
    rho = _patch_radius(c, p)
    # approach from whichever side of c lies in a gap, not in an interval
    side = 1.0
    if p.contains_real(c + side * rho * 0.5):
        side = -1.0
    if p.contains_real(c + side * rho * 0.5):
        raise PathThroughSingularity(f"no regular approach side at branch point {c}")
    outer = c + side * rho
    legs = _route_legs(complex(outer), p, basepoint)
    legs.append(SqrtApproachLeg(c=complex(c), z_outer=complex(outer)))
    return legs


def immersion(
    z: complex,
    p: SurfaceParams,
    basepoint: complex | None = None,
    tol: float = DEFAULT_SEGMENT_TOL,
) -> ImmersionSample:
    """f(z) = Re of the path integral from the basepoint, with auto routing.

    The default basepoint is a_{2m} + 1 on the positive real axis, giving
    f(basepoint) = 0 and f2(z) = -Arg(z). Branch-point targets are reached
    through the square-root substitution leg; interior points of singular
    intervals are rejected.
    """
    z = complex(z)
    if z == 0:
        raise PathThroughSingularity("z = 0 is an end, not a surface point")
    if basepoint is None:
        basepoint = p.default_basepoint()
    if z == basepoint:
        return ImmersionSample(z=z, f=(0.0, 0.0, 0.0), quad_error=0.0)
    c, dist = _nearest_branch_point(z, p)
    if dist == 0.0:
        legs = _route_to_branch_point(c, p, basepoint)
    else:
        if z.imag == 0.0 and p.contains_real(z.real):
            raise PathThroughSingularity(
                f"z={z} lies inside a singular interval; use apex() for its image"
            )
        legs = _route_legs(z, p, basepoint)
    total, err = _integrate_legs(legs, p, tol)
    return ImmersionSample(z=z, f=tuple(total.real), quad_error=err)


def integrate_path(
    path: PathSpec, p: SurfaceParams, tol: float = DEFAULT_SEGMENT_TOL
) -> tuple[tuple[float, float, float], float]:
    """Re of the integral of the form triple along a user polyline.

    Interior waypoints must keep avoidance_radius clearance from 0 and all
    branch points; segments may not touch or cross singular intervals.
    Endpoints sitting exactly on a branch point are integrated through the
    square-root substitution.
    """
    pts = path.waypoints
    bps = p.branch_points()
    avoid = path.resolved_avoidance(p)
    for w in pts[1:-1]:
        if abs(w) < avoid:
            raise PathThroughSingularity(f"interior waypoint {w} too close to 0")
        for c in bps:
            if abs(w - c) < avoid:
                raise PathThroughSingularity(f"interior waypoint {w} too close to branch point {c}")
    legs: list[_Leg] = []
    for i, (u, v) in enumerate(zip(pts, pts[1:])):
        first, last = i == 0, i == len(pts) - 2
        _check_segment_clear(u, v, p, allow_branch_endpoints=(first, last))
        u_bp = first and any(u == c for c in bps)
        v_bp = last and any(v == c for c in bps)
        if u_bp and v_bp:
            raise PathThroughSingularity("segment joins two branch points")
        if v_bp:
            legs.extend(_split_branch_segment(u, v, p, into=True))
        elif u_bp:
            legs.extend(_split_branch_segment(v, u, p, into=False))
        else:
            legs.append(SegmentLeg(z_a=u, z_b=v))
    total, err = _integrate_legs(legs, p, tol)
    return tuple(total.real), err


def _split_branch_segment(z_far: complex, c: complex, p: SurfaceParams, into: bool) -> list["_Leg"]:
    """Straight segment with one endpoint on a branch point, patched near c."""
    rho = _patch_radius(c.real, p)
    d = z_far - c
    if abs(d) <= rho:
        outer = z_far
        head = []
    else:
        outer = c + d * (rho / abs(d))
        head = [SegmentLeg(z_a=z_far, z_b=outer)]
    approach = SqrtApproachLeg(c=c, z_outer=outer)
    if into:
        return head + [approach]
    return [_ReversedLeg(approach)] + [SegmentLeg(z_a=l.z_b, z_b=l.z_a) for l in head]


@dataclass(frozen=True)
class _ReversedLeg(_Leg):
    inner: _Leg

    def points(self, t):
        z, dz = self.inner.points(1.0 - t)
        return z, -dz


def _check_segment_clear(u: complex, v: complex, p: SurfaceParams, allow_branch_endpoints):
    """Reject segments meeting the singular set away from allowed endpoints."""
    if u == 0 or v == 0:
        raise PathThroughSingularity("path touches the puncture z = 0")
    # crossing of the real axis inside a closed interval
    if (u.imag > 0) != (v.imag > 0) and u.imag != v.imag:
        t = u.imag / (u.imag - v.imag)
        if 0.0 <= t <= 1.0:
            x = u.real + t * (v.real - u.real)
            if p.contains_real(x):
                raise PathThroughSingularity(f"segment crosses singular interval at x={x}")
    # segment lying on the real axis passing through an interval
    if u.imag == 0 and v.imag == 0:
        lo, hi = min(u.real, v.real), max(u.real, v.real)
        for ilo, ihi in p.intervals():
            inter_lo, inter_hi = max(lo, ilo), min(hi, ihi)
            if inter_lo < inter_hi:
                first_ok = allow_branch_endpoints[0] and u.real in (ilo, ihi)
                last_ok = allow_branch_endpoints[1] and v.real in (ilo, ihi)
                if not (first_ok or last_ok):
                    raise PathThroughSingularity(
                        f"segment overlaps singular interval [{ilo}, {ihi}]"
                    )


def winding_of_path(path: PathSpec) -> float:
    """Total signed angle swept by a polyline, in units of full turns."""
    total = 0.0
    for u, v in zip(path.waypoints, path.waypoints[1:]):
        total += cmath.phase(v / u)
    return total / (2.0 * math.pi)


# ---------------------------------------------------------------------------
# loop periods


def loop_period(
    center, p: SurfaceParams, tol: float = DEFAULT_SEGMENT_TOL, radius: float | None = None
) -> PeriodVector:
    """Re of the closed loop integral around one end.

    center = 0 integrates counterclockwise around the puncture at 0 inside
    the innermost branch point; center = inf integrates counterclockwise as
    seen from infinity (clockwise in the plane) outside all branch points.
    """
    at_zero = center == 0
    if at_zero:
        r = radius if radius is not None else 0.5 * p.inner_radius()
        if not 0 < r < p.inner_radius():
            raise PathThroughSingularity(f"loop radius {r} does not separate 0")
        leg = ArcLeg(r=r, theta_a=0.0, theta_b=2.0 * math.pi)
    else:
        r = radius if radius is not None else 2.0 * p.scale()
        if not r > p.scale():
            raise PathThroughSingularity(f"loop radius {r} does not enclose all branch points")
        leg = ArcLeg(r=r, theta_a=0.0, theta_b=-2.0 * math.pi)
    total, err = _integrate_leg(leg, p, tol)
    return PeriodVector(
        v=tuple(total.real),
        loop_center=0.0 if at_zero else math.inf,
        quad_error=err,
    )


# ---------------------------------------------------------------------------
# apex limits


_SIDES = ("above", "below", "left", "right")


def apex(
    interval: tuple[float, float],
    side: str,
    p: SurfaceParams,
    basepoint: complex | None = None,
    eps0: float | None = None,
    levels: int = 5,
    tol: float = 1e-6,
    quad_tol: float = DEFAULT_SEGMENT_TOL,
) -> tuple[tuple[float, float, float], float]:
    """Limit of f approaching a singular interval from one side.

    Evaluates f at offsets eps0 / 2^i and Richardson-extrapolates in
    sqrt(eps); the along-axis approaches (left/right) have genuine
    half-power expansions at the branch-point endpoints, the transverse ones
    (above/below) are analytic in eps and converge even faster. Returns
    (apex, extrapolation residual); raises NonConvergent when the residual
    exceeds tol.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}, got {side!r}")
    length = hi - lo
    if eps0 is None:
        eps0 = 1e-3 * length
    eps0 = _clamp_eps(eps0, lo, hi, side, p)
    mid = 0.5 * (lo + hi)
    values = []
    for i in range(levels):
        e = eps0 / 2.0**i
        if side == "above":
            z = complex(mid, e)
        elif side == "below":
            z = complex(mid, -e)
        elif side == "left":
            z = complex(lo - e, 0.0)
        else:
            z = complex(hi + e, 0.0)
        values.append(np.asarray(immersion(z, p, basepoint, tol=quad_tol).f))
    est, resid = _richardson_sqrt(values)
    if resid > tol:
        raise NonConvergent(
            f"apex extrapolation residual {resid:g} above tolerance {tol:g} "
            f"for interval [{lo}, {hi}] side {side}"
        )
    # f is defined modulo the period (0, 2pi, 0); report the fundamental
    # representative (x2 matching -Arg of the interval plus the basepoint
    # constant), so below-side approaches to negative-axis intervals agree
    # with the other sides instead of landing one period away
    bp = basepoint if basepoint is not None else p.default_basepoint()
    expected_x2 = cmath.phase(bp) - cmath.phase(complex(mid))
    k = round((est[1] - expected_x2) / (2.0 * math.pi))
    est[1] -= 2.0 * math.pi * k
    return tuple(est), resid


def _clamp_eps(eps0: float, lo: float, hi: float, side: str, p: SurfaceParams) -> float:
    """Keep the whole offset ladder inside the adjacent gap."""
    if side in ("above", "below"):
        return eps0
    x = lo if side == "left" else hi
    direction = -1.0 if side == "left" else 1.0
    others = [c for c in p.branch_points() if c != x] + [0.0]
    ahead = [abs(c - x) for c in others if (c - x) * direction > 0]
    gap = min(ahead) if ahead else math.inf
    return min(eps0, 0.25 * gap)


def _richardson_sqrt(values: list[np.ndarray]) -> tuple[np.ndarray, float]:
    """Richardson table in h = sqrt(eps) for offsets halved per level.

    values[i] is the sample at eps0 / 2^i, so consecutive h ratios are
    sqrt(2). Returns the last diagonal entry and the gap to the previous one
    as the residual estimate.
    """
    r = math.sqrt(2.0)
    rows = [np.asarray(v, dtype=float) for v in values]
    diag = [rows[0]]
    for col in range(1, len(values)):
        factor = r**col
        rows = [
            (factor * rows[i + 1] - rows[i]) / (factor - 1.0)
            for i in range(len(rows) - 1)
        ]
        diag.append(rows[-1])
    resid = float(np.max(np.abs(diag[-1] - diag[-2])))
    return diag[-1], resid

"""Singular set, cone-like verification, and direction classification.

The singular set of a surface is the closed-form union of the intervals
[a_{2j-1}, a_{2j}] and [b_{2k}, b_{2k-1}]; this module cross-checks that
locus against the numeric |G| = 1 condition, verifies the non-degeneracy
criterion dG/(G dh) in R \\ {0} on every component, classifies each cone as
pointing up or down by comparing apex height with nearby graph heights, and
carries the stereographic projection used to tie G to the Gauss vector.

Direction conventions are a known sore point: the classification here is
numeric, and each report records the two sign conventions printed in the
source material (they disagree); the numeric result is the arbiter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core
from .errors import (
    AmbiguousDirection,
    DegenerateSingularity,
    NotOnHyperboloid,
    VerificationFailure,
)
from .integrate import DEFAULT_SEGMENT_TOL, apex, immersion
from .params import SurfaceParams


@dataclass(frozen=True)
class SingularComponent:
    """One closed singular interval on the real axis."""

    lo: float
    hi: float
    axis: str  # "pos" or "neg"
    index: int  # 1-based j (positive axis) or k (negative axis)
    sign: int  # alpha_j or beta_k

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class ConeReport:
    """Verification record for one cone-like singular component."""

    component: SingularComponent
    apex: tuple[float, float, float]
    direction: str  # "up" or "down", numeric classification
    dg_over_gdh_samples: tuple[float, ...]
    nondegenerate: bool
    embedded_neighborhood_check: bool
    theorem_direction: str  # sign convention of the main theorem
    lemma_statement_direction: str  # the conflicting lemma wording
    matches_theorem: bool
    matches_lemma_statement: bool
    apex_spread: float
    endpoint_gauss_ok: bool

    def to_dict(self) -> dict:
        return {
            "axis": self.component.axis,
            "index": self.component.index,
            "interval": [self.component.lo, self.component.hi],
            "sign": self.component.sign,
            "apex": list(self.apex),
            "direction": self.direction,
            "theorem_direction": self.theorem_direction,
            "lemma_statement_direction": self.lemma_statement_direction,
            "matches_theorem": self.matches_theorem,
            "matches_lemma_statement": self.matches_lemma_statement,
            "nondegenerate": self.nondegenerate,
            "embedded_neighborhood_proxy": self.embedded_neighborhood_check,
            "apex_spread": self.apex_spread,
            "dg_over_gdh_range": [min(self.dg_over_gdh_samples), max(self.dg_over_gdh_samples)],
            "endpoint_gauss_ok": self.endpoint_gauss_ok,
        }


def components(p: SurfaceParams) -> list[SingularComponent]:
    """Closed-form singular components, no numeric verification."""
    out = [
        SingularComponent(lo=lo, hi=hi, axis="pos", index=j + 1, sign=p.alpha[j])
        for j, (lo, hi) in enumerate(p.positive_intervals())
    ]
    out += [
        SingularComponent(lo=lo, hi=hi, axis="neg", index=k + 1, sign=p.beta[k])
        for k, (lo, hi) in enumerate(p.negative_intervals())
    ]
    return out


def singular_set(
    p: SurfaceParams,
    verify: bool = True,
    on_samples: int = 40,
    off_samples: int = 1000,
    seed: int = 7,
) -> list[SingularComponent]:
    """The m + n closed singular intervals, numerically cross-checked.

    Verification samples each interval (||G| - 1| <= 1e-10 required) and
    off-interval real-axis points (|G| must stay clear of 1). Raises
    VerificationFailure when the numeric locus contradicts the closed form.
    """
    comps = components(p)
    if not verify:
        return comps
    for c in comps:
        xs = np.linspace(c.lo, c.hi, on_samples)[1:-1]
        for x in xs:
            g = core.gauss(complex(x), p).G
            if abs(abs(g) - 1.0) > 1e-10:
                raise VerificationFailure(
                    f"|G| = {abs(g)} off 1 at x={x} inside [{c.lo}, {c.hi}]"
                )
    for x in off_axis_probe_points(p, off_samples, seed=seed):
        g = core.gauss(complex(x), p).G
        if abs(abs(g) - 1.0) <= 1e-10:
            raise VerificationFailure(f"numeric singular hit at off-interval x={x}")
    return comps


def off_axis_probe_points(p: SurfaceParams, count: int, seed: int = 7) -> np.ndarray:
    """Real-axis sample points outside the closed singular set.

    Spread over the gaps between intervals, the stretch toward 0, and the
    outer tails on both axes, with a relative clearance from the interval
    endpoints so square-root behavior cannot alias as a hit.
    """
    rng = np.random.default_rng(seed)
    ivs = p.intervals()
    scale = p.scale()
    segments = []  # (lo, hi) open gaps, clipped away from endpoints
    guard = 1e-3
    points_all = [-20.0 * scale] + [v for iv in ivs for v in iv] + [20.0 * scale]
    walls = sorted(points_all)
    for lo, hi in zip(walls[:-1], walls[1:]):
        if any(abs(lo - ilo) < 1e-15 and abs(hi - ihi) < 1e-15 for ilo, ihi in ivs):
            continue
        pad = guard * max(abs(lo), abs(hi), scale)
        glo, ghi = lo + pad, hi - pad
        if ghi > glo:
            segments.append((glo, ghi))
    # drop the gap spanning zero into two pieces clear of the puncture
    out = []
    per = max(1, count // max(1, len(segments)))
    for glo, ghi in segments:
        xs = rng.uniform(glo, ghi, size=per)
        xs = xs[np.abs(xs) > 1e-6 * scale]
        out.append(xs)
    xs = np.concatenate(out) if out else np.array([])
    while len(xs) < count:
        glo, ghi = segments[rng.integers(len(segments))]
        extra = rng.uniform(glo, ghi, size=count - len(xs))
        extra = extra[np.abs(extra) > 1e-6 * scale]
        xs = np.concatenate([xs, extra])
    return xs[:count]


def nondegeneracy(
    component: SingularComponent,
    p: SurfaceParams,
    n_samples: int = 9,
    offset: float | None = None,
    fd_step: float | None = None,
    imag_rtol: float = 1e-8,
    floor: float = 1e-6,
) -> list[float]:
    """Samples of dG/(G dh) on the component, asserted real and nonzero.

    dG/dz is taken as a one-sided limit from the upper half-plane: central
    differences along the interval direction at height `offset` above the
    axis. Raises DegenerateSingularity when any sample has a relative
    imaginary part above imag_rtol or modulus below floor.
    """
    length = component.length
    if offset is None:
        offset = 1e-9 * length
    if fd_step is None:
        fd_step = 1e-5 * length
    xs = np.linspace(component.lo, component.hi, n_samples + 2)[1:-1]
    out = []
    for x in xs:
        z = complex(x, offset)
        gp = _gauss_value(z + fd_step, p)
        gm = _gauss_value(z - fd_step, p)
        dg = (gp - gm) / (2.0 * fd_step)
        w = core.branch_w(z, p).w
        g = (1.0 + w) / (1.0 - w)
        dh = -0.5 * (1.0 / w - w) / z
        val = dg / (g * dh)
        if abs(val.imag) > imag_rtol * abs(val):
            raise DegenerateSingularity(
                f"dG/(G dh) = {val} not real at x={x} on [{component.lo}, {component.hi}]"
            )
        if abs(val) < floor:
            raise DegenerateSingularity(
                f"|dG/(G dh)| = {abs(val)} below floor {floor} at x={x}"
            )
        out.append(float(val.real))
    return out


def _gauss_value(z: complex, p: SurfaceParams) -> complex:
    return core.gauss(z, p).G


def gauss_on_component(
    component: SingularComponent, p: SurfaceParams, n_samples: int = 16
) -> np.ndarray:
    """G sampled on the open component; values lie on the unit circle."""
    xs = np.linspace(component.lo, component.hi, n_samples + 2)[1:-1]
    return np.array([core.gauss(complex(x), p).G for x in xs])


def dh_over_g_on_component(
    component: SingularComponent, p: SurfaceParams, n_samples: int = 16
) -> np.ndarray:
    """dh/G coefficient samples on the component (must not vanish)."""
    xs = np.linspace(component.lo, component.hi, n_samples + 2)[1:-1]
    out = []
    for x in xs:
        w = core.branch_w(complex(x), p).w
        g = (1.0 + w) / (1.0 - w)
        dh = -0.5 * (1.0 / w - w) / complex(x)
        out.append(dh / g)
    return np.array(out)


def endpoint_gauss_check(component: SingularComponent, p: SurfaceParams, tol: float = 1e-8) -> bool:
    """Endpoint values of G against the sign table.

    Positive axis: G(a_{2j-1}) = -alpha_j, G(a_{2j}) = alpha_j.
    Negative axis: G(b_{2k}) = -beta_k, G(b_{2k-1}) = beta_k.
    On both axes the lower endpoint expects -sign and the upper +sign.
    Checked at the endpoints (the pointwise convention agrees with the real
    axis limit) and loosely at a finite offset for continuity.
    """
    s = component.sign
    expect_lo, expect_hi = -s, s
    g_lo = core.gauss(complex(component.lo), p).G
    g_hi = core.gauss(complex(component.hi), p).G
    if abs(g_lo - expect_lo) > tol or abs(g_hi - expect_hi) > tol:
        return False
    eps = 1e-12 * max(1.0, component.length)
    g_lo_lim = core.gauss(complex(component.lo + eps), p).G
    g_hi_lim = core.gauss(complex(component.hi - eps), p).G
    return abs(g_lo_lim - expect_lo) < 1e-4 and abs(g_hi_lim - expect_hi) < 1e-4


def theorem_direction(component: SingularComponent) -> str:
    """Main-theorem sign convention: pos axis up iff alpha = -1, neg axis up iff beta = +1."""
    if component.axis == "pos":
        return "up" if component.sign == -1 else "down"
    return "up" if component.sign == 1 else "down"


def lemma_statement_direction(component: SingularComponent) -> str:
    """The conflicting lemma wording (opposite of the theorem convention)."""
    return "down" if theorem_direction(component) == "up" else "up"


def classify_cone(
    component: SingularComponent,
    p: SurfaceParams,
    basepoint: complex | None = None,
    eps_outer: float | None = None,
    apex_tol: float = 1e-6,
    quad_tol: float = DEFAULT_SEGMENT_TOL,
    embedded_samples: int = 64,
) -> ConeReport:
    """Numeric up/down classification plus the verification bundle.

    The apex x3 is compared with f3 at real-axis points just outside both
    endpoints, at eps and eps/10 (the two must agree); up means the apex is
    strictly the local maximum of the timelike coordinate. The report also
    records both printed sign conventions and whether the numeric result
    matches each.
    """
    iv = (component.lo, component.hi)
    apex_f, spread = _apex_with_spread(iv, p, basepoint, apex_tol, quad_tol)
    if eps_outer is None:
        eps_outer = 1e-2 * component.length
    eps_outer = _clamp_outer(eps_outer, component, p)
    votes = []
    for eps in (eps_outer, eps_outer / 10.0):
        f3s = []
        for x in (component.lo - eps, component.hi + eps):
            f3s.append(immersion(complex(x), p, basepoint, tol=quad_tol).f[2])
        d_lo = apex_f[2] - f3s[0]
        d_hi = apex_f[2] - f3s[1]
        margin = 1e-12 * max(1.0, abs(apex_f[2]))
        if d_lo > margin and d_hi > margin:
            votes.append("up")
        elif d_lo < -margin and d_hi < -margin:
            votes.append("down")
        else:
            raise AmbiguousDirection(
                f"x3 differences ({d_lo:g}, {d_hi:g}) below tolerance on "
                f"[{component.lo}, {component.hi}] at eps={eps:g}"
            )
    if votes[0] != votes[1]:
        raise AmbiguousDirection(
            f"direction votes disagree across eps scales: {votes} on "
            f"[{component.lo}, {component.hi}]"
        )
    direction = votes[0]
    samples = tuple(nondegeneracy(component, p))
    thm = theorem_direction(component)
    lem = lemma_statement_direction(component)
    return ConeReport(
        component=component,
        apex=tuple(apex_f),
        direction=direction,
        dg_over_gdh_samples=samples,
        nondegenerate=True,
        embedded_neighborhood_check=embedded_neighborhood_proxy(
            component, p, basepoint, n_samples=embedded_samples, quad_tol=quad_tol
        ),
        theorem_direction=thm,
        lemma_statement_direction=lem,
        matches_theorem=direction == thm,
        matches_lemma_statement=direction == lem,
        apex_spread=spread,
        endpoint_gauss_ok=endpoint_gauss_check(component, p),
    )


def _apex_with_spread(iv, p, basepoint, apex_tol, quad_tol):
    vals = []
    for side in ("above", "below", "left", "right"):
        v, _ = apex(iv, side, p, basepoint=basepoint, tol=apex_tol, quad_tol=quad_tol)
        vals.append(np.asarray(v))
    spread = float(max(np.max(np.abs(a - b)) for a in vals for b in vals))
    return vals[0], spread


def _clamp_outer(eps: float, component: SingularComponent, p: SurfaceParams) -> float:
    gaps = []
    for x, direction in ((component.lo, -1.0), (component.hi, 1.0)):
        others = [c for c in p.branch_points() if c != x] + [0.0]
        ahead = [abs(c - x) for c in others if (c - x) * direction > 0]
        gaps.append(min(ahead) if ahead else math.inf)
    return min(eps, 0.4 * min(gaps))


def embedded_neighborhood_proxy(
    component: SingularComponent,
    p: SurfaceParams,
    basepoint: complex | None = None,
    distance: float | None = None,
    n_samples: int = 64,
    quad_tol: float = DEFAULT_SEGMENT_TOL,
) -> bool:
    """Finite proxy for the embedded punctured neighborhood condition.

    Projects the image of a stadium-shaped loop around the component to the
    x1x2-plane and checks the polyline is simple. A pass is evidence, not a
    proof; reports label it as a proxy.
    """
    if distance is None:
        distance = _clamp_outer(0.2 * component.length, component, p)
    loop = _stadium_points(component, distance, n_samples)
    pts = np.array(
        [immersion(z, p, basepoint, tol=quad_tol).f[:2] for z in loop]
    )
    return not _polyline_self_intersects(pts)


def _stadium_points(component: SingularComponent, d: float, n: int) -> np.ndarray:
    """Closed loop at distance d around the interval: two caps, two sides."""
    lo, hi = component.lo, component.hi
    n_side = max(4, n // 4)
    n_cap = max(4, n // 4)
    xs = np.linspace(lo, hi, n_side)
    top = xs + 1j * d
    bot = xs[::-1] - 1j * d
    th_r = np.linspace(0.5 * np.pi, -0.5 * np.pi, n_cap, endpoint=False)
    cap_r = hi + d * np.exp(1j * th_r)
    th_l = np.linspace(-0.5 * np.pi, -1.5 * np.pi, n_cap, endpoint=False)
    cap_l = lo + d * np.exp(1j * th_l)
    return np.concatenate([top, cap_r[1:], bot, cap_l[1:]])


def _polyline_self_intersects(pts: np.ndarray) -> bool:
    """Brute-force proper-intersection test for a closed polyline."""
    n = len(pts)
    segs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent around the wrap
            if _segments_cross(*segs[i], *segs[j]):
                return True
    return False


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def stereographic(x) -> complex:
    """Stereographic projection (x1 + i x2)/(1 - x3) from the hyperboloid.

    Input must satisfy <x, x> = -1 in the (+, +, -) metric; the apex
    (0, 0, 1) maps to complex infinity. Inverse relation: sigma(nu(z)) = G(z)
    at regular points, with nu the hyperboloid-valued Gauss map.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        raise NotOnHyperboloid(f"expected a 3-vector, got shape {x.shape}")
    q = x[0] ** 2 + x[1] ** 2 - x[2] ** 2
    if abs(q + 1.0) > 1e-9 * max(1.0, float(np.max(np.abs(x)) ** 2)):
        raise NotOnHyperboloid(f"<x, x> = {q}, not -1")
    if x[2] == 1.0:
        return core.INF
    return complex(x[0], x[1]) / (1.0 - x[2])


def hyperboloid_point(G: complex) -> np.ndarray:
    """Gauss vector on the hyperboloid <x, x> = -1 from a Gauss map value.

    Defined for |G| != 1; this is the sigma-preimage of G.
    """
    a2 = abs(G) ** 2
    if a2 == 1.0:
        raise NotOnHyperboloid(f"|G| = 1 has no hyperboloid preimage (G={G})")
    return np.array([-2.0 * G.real, -2.0 * G.imag, a2 + 1.0]) / (a2 - 1.0)

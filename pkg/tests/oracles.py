"""Independent reference implementations used as test oracles.

Everything here is deliberately separate from the package internals: its
own branch selection, its own form coefficients, fixed-order composite
Gauss-Legendre quadrature instead of the adaptive scheme, plain finite
differences, and a quadratic-cost triangle overlap test. Values frozen
into the tests were computed with these routines.
"""

from __future__ import annotations

import numpy as np


def w2_ref(z, p):
    """Rational product for w^2, written directly from the sign data."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for k in range(p.m):
        out = out * ((z - p.a[2 * k + 1]) / (z - p.a[2 * k])) ** p.alpha[k]
    for k in range(p.n):
        out = out * ((z - p.b[2 * k]) / (z - p.b[2 * k + 1])) ** p.beta[k]
    return out


def w_ref(z, p):
    """Branch with Re w >= 0 chosen by comparing both square roots."""
    z = np.asarray(z, dtype=complex)
    r = np.sqrt(w2_ref(z, p))
    flip = (r.real < 0) | ((r.real == 0) & (r.imag < 0))
    return np.where(flip, -r, r)


def gauss_ref(z, p):
    return (1.0 + w_ref(z, p)) / (1.0 - w_ref(z, p))


def phi_ref(z, p):
    """Form coefficients (3, N), independent expression."""
    z = np.asarray(z, dtype=complex)
    w = w_ref(z, p)
    return np.stack(
        [
            -(w + 1.0 / w) / (2.0 * z),
            1j / z,
            (1.0 / w - w) / (2.0 * z),
        ]
    )


def metric_phi_form_ref(z, p):
    """Metric factor from the (|phi1|^2 + |phi2|^2 - |phi3|^2)/2 expression."""
    c = phi_ref(np.asarray([z]), p)[:, 0]
    return 0.5 * (abs(c[0]) ** 2 + abs(c[1]) ** 2 - abs(c[2]) ** 2)


def composite_gauss_segments(points, p, n_panels=64, order=20, coeff=None):
    """Fixed-order composite Gauss-Legendre along a polyline, Re part.

    Roughly 10x the node density of the adaptive scheme on smooth legs;
    no error estimation, no adaptivity.
    """
    if coeff is None:
        coeff = phi_ref
    x, wts = np.polynomial.legendre.leggauss(order)
    total = np.zeros(3, dtype=complex)
    for z_a, z_b in zip(points, points[1:]):
        for k in range(n_panels):
            t0 = k / n_panels
            t1 = (k + 1) / n_panels
            mid = 0.5 * (t0 + t1)
            half = 0.5 * (t1 - t0)
            t = mid + half * x
            z = z_a + (z_b - z_a) * t
            vals = coeff(z, p) * (z_b - z_a)
            total += half * (vals @ wts)
    return total.real


def composite_gauss_circle(radius, p, clockwise=False, n_panels=128, order=20, coeff=None):
    """Composite Gauss-Legendre over a full circle centered at 0, Re part."""
    if coeff is None:
        coeff = phi_ref
    x, wts = np.polynomial.legendre.leggauss(order)
    total = np.zeros(3, dtype=complex)
    sweep = -2.0 * np.pi if clockwise else 2.0 * np.pi
    for k in range(n_panels):
        th0 = sweep * k / n_panels
        th1 = sweep * (k + 1) / n_panels
        mid = 0.5 * (th0 + th1)
        half = 0.5 * (th1 - th0)
        th = mid + half * x
        z = radius * np.exp(1j * th)
        vals = coeff(z, p) * (1j * z)
        total += half * (vals @ wts)
    return total.real


def gauss_derivative_fd(z, p, h=1e-5):
    """Central finite differences of the Gauss map."""
    return (gauss_ref(z + h, p) - gauss_ref(z - h, p)) / (2.0 * h)


def dg_over_gdh_interval_ref(x, p):
    """Closed-form dG/(G dh) on a singular interval: -2 z P'/(1 - P)^2.

    Derived by eliminating w from the defining expressions; P is the w^2
    rational product. Real for real x with P(x) < 0.
    """
    x = complex(x)
    h = 1e-7
    P = complex(w2_ref(x, p))
    dP = complex((w2_ref(x + h, p) - w2_ref(x - h, p)) / (2 * h))
    return -2.0 * x * dP / (1.0 - P) ** 2


def brute_force_overlaps(vertices, triangles, eps=0.0):
    """O(T^2) projected-triangle proper-overlap count (coarse meshes only)."""
    P = np.asarray(vertices)[:, :2]
    T = np.asarray(triangles)
    count = 0
    for i in range(len(T)):
        for j in range(i + 1, len(T)):
            if set(T[i]) & set(T[j]):
                continue
            if _tri_overlap(P[T[i]], P[T[j]], eps):
                count += 1
    return count


def _tri_overlap(A, B, eps):
    for src, oth in ((A, B), (B, A)):
        for e in range(3):
            p0, p1 = src[e], src[(e + 1) % 3]
            n = np.array([-(p1[1] - p0[1]), p1[0] - p0[0]])
            norm = np.hypot(*n)
            if norm == 0:
                continue
            n = n / norm
            pa = src @ n
            pb = oth @ n
            if pb.min() >= pa.max() - eps or pa.min() >= pb.max() - eps:
                return False
    return True


def omega_ref(z, p, orientation):
    """Omega-triple coefficients for the minimal counterpart."""
    z = np.asarray(z, dtype=complex)
    w = w_ref(z, p)
    if orientation == "vertical-ends":
        return np.stack(
            [(1 / w - w) / (2 * z), 1j * (1 / w + w) / (2 * z), np.ones_like(z) / z]
        )
    return np.stack(
        [1j * (1 / w + w) / (2 * z), np.ones_like(z) / z, (1 / w - w) / (2 * z)]
    )

"""Surface parameter vectors: validation, intervals, JSON round trip.

A surface is determined by m cones on the positive real axis and n cones on
the negative real axis, with branch points

    b_{2n} < ... < b_1 < 0 < a_1 < ... < a_{2m}

and sign vectors alpha (length m) and beta (length n) with entries +-1.
The a list is stored ascending, the b list descending toward -inf, matching
the index order b_1, ..., b_{2n}.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import LengthMismatch, OrderingViolation, SignDomain


@dataclass(frozen=True)
class SurfaceParams:
    """Validated parameter vector (m, n, a, b, alpha, beta).

    Construction validates lengths, sign domains, and the strict ordering of
    branch points around 0; invalid data raises a typed error. Instances are
    immutable and hashable, so they are safe to share across threads.
    """

    m: int
    n: int
    a: tuple[float, ...]
    b: tuple[float, ...] = ()
    alpha: tuple[int, ...] = ()
    beta: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        object.__setattr__(self, "b", tuple(float(x) for x in self.b))
        object.__setattr__(self, "alpha", tuple(int(s) for s in self.alpha))
        object.__setattr__(self, "beta", tuple(int(s) for s in self.beta))
        _validate(self)

    # -- derived geometry -------------------------------------------------

    def positive_intervals(self) -> list[tuple[float, float]]:
        """Closed intervals [a_{2j-1}, a_{2j}] for j = 1..m."""
        return [(self.a[2 * j], self.a[2 * j + 1]) for j in range(self.m)]

    def negative_intervals(self) -> list[tuple[float, float]]:
        """Closed intervals [b_{2k}, b_{2k-1}] for k = 1..n."""
        return [(self.b[2 * k + 1], self.b[2 * k]) for k in range(self.n)]

    def intervals(self) -> list[tuple[float, float]]:
        """All singular intervals, negative axis first, ordered left to right."""
        return sorted(self.negative_intervals() + self.positive_intervals())

    def branch_points(self) -> tuple[float, ...]:
        """All branch points in ascending order."""
        return tuple(sorted(self.b)) + self.a

    def scale(self) -> float:
        """Largest branch-point magnitude; sets absolute tolerances."""
        return max(abs(x) for x in self.branch_points())

    def inner_radius(self) -> float:
        """Distance from 0 to the nearest branch point."""
        return min(abs(x) for x in self.branch_points())

    def min_gap(self) -> float:
        """Smallest gap between consecutive branch points."""
        pts = self.branch_points()
        return min(b - a for a, b in zip(pts, pts[1:]))

    def default_basepoint(self) -> complex:
        """Integration basepoint a_{2m} + 1 on the positive real axis."""
        return complex(self.a[-1] + 1.0, 0.0)

    def contains_real(self, x: float) -> bool:
        """True when x lies in a closed singular interval."""
        return any(lo <= x <= hi for lo, hi in self.intervals())

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "a": list(self.a),
            "b": list(self.b),
            "alpha": list(self.alpha),
            "beta": list(self.beta),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SurfaceParams":
        missing = {"m", "n", "a", "alpha"} - set(d)
        if missing:
            raise LengthMismatch(f"missing parameter fields: {sorted(missing)}")
        return cls(
            m=d["m"],
            n=d["n"],
            a=tuple(d["a"]),
            b=tuple(d.get("b", ())),
            alpha=tuple(d["alpha"]),
            beta=tuple(d.get("beta", ())),
        )

    @classmethod
    def from_json(cls, s: str) -> "SurfaceParams":
        return cls.from_dict(json.loads(s))


def _validate(p: SurfaceParams) -> None:
    if not isinstance(p.m, int) or p.m < 1:
        raise LengthMismatch(f"m must be a positive integer, got {p.m!r}")
    if not isinstance(p.n, int) or p.n < 0:
        raise LengthMismatch(f"n must be a nonnegative integer, got {p.n!r}")
    if len(p.a) != 2 * p.m:
        raise LengthMismatch(f"expected {2 * p.m} a-points, got {len(p.a)}")
    if len(p.b) != 2 * p.n:
        raise LengthMismatch(f"expected {2 * p.n} b-points, got {len(p.b)}")
    if len(p.alpha) != p.m:
        raise LengthMismatch(f"expected {p.m} alpha signs, got {len(p.alpha)}")
    if len(p.beta) != p.n:
        raise LengthMismatch(f"expected {p.n} beta signs, got {len(p.beta)}")
    for name, signs in (("alpha", p.alpha), ("beta", p.beta)):
        for s in signs:
            if s not in (1, -1):
                raise SignDomain(f"{name} entries must be +1 or -1, got {s}")
    for x in p.a + p.b:
        if not math.isfinite(x):
            raise OrderingViolation(f"branch points must be finite, got {x}")
    # chain: b_{2n} < ... < b_1 < 0 < a_1 < ... < a_{2m}
    for i in range(len(p.a) - 1):
        if not p.a[i] < p.a[i + 1]:
            raise OrderingViolation(
                f"a must be strictly ascending: a[{i + 1}]={p.a[i]} >= a[{i + 2}]={p.a[i + 1]}"
            )
    if p.a and not p.a[0] > 0:
        raise OrderingViolation(f"a_1 must be positive, got {p.a[0]}")
    for i in range(len(p.b) - 1):
        if not p.b[i] > p.b[i + 1]:
            raise OrderingViolation(
                f"b must be listed b_1 > b_2 > ...: b[{i + 1}]={p.b[i]} <= b[{i + 2}]={p.b[i + 1]}"
            )
    if p.b and not p.b[0] < 0:
        raise OrderingViolation(f"b_1 must be negative, got {p.b[0]}")


def validate_params(raw) -> SurfaceParams:
    """Validate a candidate parameter vector.

    Accepts a mapping with keys m, n, a, b, alpha, beta (b and beta optional
    when n = 0) or an existing SurfaceParams. Raises OrderingViolation,
    LengthMismatch, or SignDomain on bad input.
    """
    if isinstance(raw, SurfaceParams):
        return raw
    if isinstance(raw, str):
        return SurfaceParams.from_json(raw)
    return SurfaceParams.from_dict(dict(raw))

"""Hyperbolic plane primitives in the hyperboloid model.

Points live on the upper sheet ``x^2 + y^2 - z^2 = -1, z > 0``. Isometries are
3x3 matrices preserving the Minkowski form ``diag(1, 1, -1)``. The Poincare
disk is only used for drawing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EPS_HYP = 1e-9

J = np.diag([1.0, 1.0, -1.0])

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def minkowski(a, b):
    """Minkowski inner product along the last axis (broadcasts)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] - a[..., 2] * b[..., 2]


def normalize(v):
    """Project coordinates (or an array of them) back onto the hyperboloid."""
    v = np.asarray(v, dtype=float)
    q = v[..., 2] ** 2 - v[..., 0] ** 2 - v[..., 1] ** 2
    scale = 1.0 / np.sqrt(np.maximum(q, 1e-300))
    out = v * scale[..., None]
    # stay on the upper sheet
    return np.where(out[..., 2:3] < 0, -out, out)


def residual(v):
    """Relative deviation from the hyperboloid constraint."""
    v = np.asarray(v, dtype=float)
    r = v[..., 0] ** 2 + v[..., 1] ** 2 - v[..., 2] ** 2 + 1.0
    return np.abs(r) / np.maximum(1.0, v[..., 2] ** 2)


@dataclass(frozen=True)
class HypPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.z < 1.0 - EPS_HYP or residual(self.coords) > EPS_HYP:
            raise ValueError(f"not on the hyperboloid: {self.coords!r}")

    @classmethod
    def from_array(cls, v) -> HypPoint:
        x, y, z = (float(t) for t in v)
        return cls(x, y, z)

    @classmethod
    def from_polar(cls, t: float, theta: float = 0.0) -> HypPoint:
        """Point at distance ``t`` from the origin in direction ``theta``."""
        s = math.sinh(t)
        return cls(s * math.cos(theta), s * math.sin(theta), math.cosh(t))

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


ORIGIN = HypPoint(0.0, 0.0, 1.0)


def _as_coords(p):
    if isinstance(p, HypPoint):
        return p.coords
    return np.asarray(p, dtype=float)


def dist(a, b):
    """Hyperbolic distance. Accepts HypPoints or coordinate arrays."""
    ip = minkowski(_as_coords(a), _as_coords(b))
    d = np.arccosh(np.maximum(-ip, 1.0))
    return float(d) if np.ndim(d) == 0 else d


def disk_area(r: float) -> float:
    """Area of a hyperbolic disk of radius ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    # 2*pi*(cosh r - 1) written to avoid cancellation near 0
    return 4.0 * math.pi * math.sinh(r / 2.0) ** 2


def disk_perimeter(r: float) -> float:
    """Circumference of a hyperbolic disk of radius ``r``."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return 2.0 * math.pi * math.sinh(r)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Linear map preserving the Minkowski form.

    ``reflection`` must be set for orientation-reversing matrices.
    """

    matrix: np.ndarray
    reflection: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.shape != (3, 3):
            raise ValueError("isometry must be 3x3")
        scale = max(1.0, float(np.abs(m).max()) ** 2)
        if np.abs(m.T @ J @ m - J).max() > EPS_HYP * scale:
            raise ValueError("matrix does not preserve the Minkowski form")
        det = np.linalg.det(m)
        if (det < 0) != self.reflection:
            raise ValueError("determinant sign does not match reflection flag")
        if m[2, 2] < 0:
            raise ValueError("matrix swaps the sheets of the hyperboloid")

    def __matmul__(self, other: Isometry) -> Isometry:
        return Isometry(self.matrix @ other.matrix, self.reflection != other.reflection)

    def inverse(self) -> Isometry:
        return Isometry(J @ self.matrix.T @ J, self.reflection)


def identity() -> Isometry:
    return Isometry(np.eye(3))


def translation_x(t: float) -> Isometry:
    """Translation by ``t`` along the x axis geodesic."""
    c, s = math.cosh(t), math.sinh(t)
    return Isometry(np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]]))


def rotation(theta: float) -> Isometry:
    """Rotation about the origin by ``theta`` radians."""
    c, s = math.cos(theta), math.sin(theta)
    return Isometry(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def reflection_y() -> Isometry:
    """Reflection in the x axis geodesic (y -> -y)."""
    return Isometry(np.diag([1.0, -1.0, 1.0]), reflection=True)


def apply(iso: Isometry, p):
    """Apply an isometry and renormalize onto the hyperboloid."""
    out = normalize(_as_coords(p) @ iso.matrix.T)
    if isinstance(p, HypPoint):
        return HypPoint.from_array(out)
    return out


def geodesic_point(a, b, t):
    """Point at fraction ``t`` (scalar or array) of the way from ``a`` to ``b``."""
    a = _as_coords(a)
    b = _as_coords(b)
    L = np.arccosh(np.maximum(-minkowski(a, b), 1.0))
    t = np.asarray(t, dtype=float)
    L = np.asarray(L)[..., None]
    t = t[..., None]
    small = L < 1e-12
    sL = np.where(small, 1.0, np.sinh(L))
    wa = np.where(small, 1.0 - t, np.sinh((1.0 - t) * L) / sL)
    wb = np.where(small, t, np.sinh(t * L) / sL)
    return normalize(wa * a + wb * b)


@dataclass(frozen=True)
class Segment:
    a: HypPoint
    b: HypPoint

    def __post_init__(self):
        if dist(self.a, self.b) <= EPS_HYP:
            raise ValueError("degenerate segment")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


def point_segment_distances(p, a, b, tol: float = 1e-10):
    """Vectorized distance from points ``p`` to geodesic segments ``[a, b]``.

    Golden-section search over the arc parameter; the cosh of the distance
    is convex along a geodesic, so the search is exact up to ``tol``.
    """
    p, a, b = np.broadcast_arrays(
        np.asarray(p, dtype=float), np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    )
    shape = p.shape[:-1]
    alpha = np.maximum(-minkowski(p, a), 1.0)
    beta = np.maximum(-minkowski(p, b), 1.0)
    L = np.arccosh(np.maximum(-minkowski(a, b), 1.0))
    sL = np.where(L < 1e-12, 1.0, np.sinh(L))

    def f(t):
        # cosh of the distance from p to the point at parameter t
        return (np.sinh((1.0 - t) * L) * alpha + np.sinh(t * L) * beta) / sL

    lo = np.zeros(shape)
    hi = np.ones(shape)
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    n_iter = int(math.ceil(math.log(tol) / math.log(_INV_PHI))) + 1
    for _ in range(n_iter):
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        nx1 = np.where(left, hi - _INV_PHI * (hi - lo), x2)
        nx2 = np.where(left, x1, lo + _INV_PHI * (hi - lo))
        nf1 = np.where(left, f(nx1), f2)
        nf2 = np.where(left, f1, f(nx2))
        x1, x2, f1, f2 = nx1, nx2, nf1, nf2
    best = np.minimum(np.minimum(f1, f2), np.minimum(alpha, beta))
    best = np.minimum(best, f((lo + hi) / 2.0))
    return np.arccosh(np.maximum(best, 1.0))


def point_segment_distance(p, s: Segment) -> float:
    """Distance from ``p`` to the nearest point of the segment ``s``."""
    return float(point_segment_distances(_as_coords(p), s.a.coords, s.b.coords))


def _orient(a, b, c):
    # sign of det[a, b, c] = orientation of the Klein-model triangle (z > 0)
    return np.einsum("...i,...i->...", np.cross(a, b), c)


def segments_cross_many(a1, b1, a2, b2, eps: float = 1e-12):
    """Vectorized proper-crossing test for geodesic segments.

    Geodesics are planes through the origin in the hyperboloid model, so the
    test reduces to strict orientation checks. Touching or collinear
    configurations are not crossings.
    """
    a1, b1, a2, b2 = (np.asarray(v, dtype=float) for v in (a1, b1, a2, b2))
    # scale every vector to z = 1 (Klein model) so eps is comparable
    a1, b1, a2, b2 = (v / v[..., 2:3] for v in (a1, b1, a2, b2))
    d1 = _orient(a1, b1, a2)
    d2 = _orient(a1, b1, b2)
    d3 = _orient(a2, b2, a1)
    d4 = _orient(a2, b2, b1)
    return (
        (np.abs(d1) > eps) & (np.abs(d2) > eps) & (np.abs(d3) > eps) & (np.abs(d4) > eps)
        & (np.sign(d1) != np.sign(d2)) & (np.sign(d3) != np.sign(d4))
    )


def segments_cross(s1: Segment, s2: Segment) -> bool:
    """True iff the segments meet at a point interior to both."""
    ends1 = (s1.a.coords, s1.b.coords)
    for e in (s2.a.coords, s2.b.coords):
        if any(dist(e, f) <= EPS_HYP for f in ends1):
            return False
    return bool(segments_cross_many(s1.a.coords, s1.b.coords, s2.a.coords, s2.b.coords))


def to_poincare(p):
    """Project to the Poincare disk: ``(x, y) / (1 + z)``."""
    v = _as_coords(p)
    uv = v[..., :2] / (1.0 + v[..., 2:3])
    if isinstance(p, HypPoint):
        return float(uv[0]), float(uv[1])
    return uv


def direction(center, target) -> float:
    """Angle, in the tangent plane at ``center``, of the geodesic towards ``target``."""
    c = _as_coords(center)
    t = _as_coords(target)
    # move center to the origin: rotate then translate back along x
    r = math.hypot(c[0], c[1])
    if r < 1e-15:
        local = t
    else:
        th = math.atan2(c[1], c[0])
        dist_c = math.asinh(r)
        m = translation_x(-dist_c).matrix @ rotation(-th).matrix
        local = m @ t
        local = rotation(th).matrix @ local
    return math.atan2(local[1], local[0])


def frame_at(center) -> Isometry:
    """An orientation-preserving isometry taking the origin to ``center``.

    Built as rotation(th) . translation_x(t) . rotation(-th), so tangent
    directions at ``center`` agree with :func:`direction`.
    """
    c = _as_coords(center)
    r = math.hypot(c[0], c[1])
    if r < 1e-15:
        return identity()
    th = math.atan2(c[1], c[0])
    return rotation(th) @ translation_x(math.asinh(r)) @ rotation(-th)

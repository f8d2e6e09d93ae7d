"""Closed analytic boundary curves and their differential geometry.

Curves are 2pi-periodic, counterclockwise, and regular (nonvanishing
speed). The frame at a parameter t carries the point, derivatives,
speed, unit tangent, outward unit normal, and signed curvature

    kappa(t) = (y1' y2'' - y1'' y2') / |y'(t)|^3,

with n_y(t) = (y2', -y1') / |y'(t)| outward for counterclockwise
orientation.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np


class CurveError(ValueError):
    """Invalid or degenerate curve."""


class FlatPointError(CurveError):
    """Curvature too small for curvature-scaled coordinates."""


class ProjectionError(RuntimeError):
    """Closest-point search failed to converge."""


FLAT_KAPPA = 1e-8

CurveFrame = namedtuple(
    "CurveFrame", ["point", "d1", "d2", "speed", "tangent", "normal", "kappa"]
)


class BoundaryCurve:
    """Closed curve given by a circle, a polar cosine star, or callables.

    kind is one of "circle" (radius a), "star" (r(t) = c0 + c1*cos(k*t)),
    or "generic" (y, dy, d2y callables returning shape (..., 2)). Input
    parameterizations that run clockwise are reversed on construction so
    the outward-normal and curvature sign conventions always hold.
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = params
        self._reversed = False
        self._kappa_max = None
        if kind == "circle":
            a = params["a"]
            if a <= 0:
                raise CurveError("circle radius must be positive")
        elif kind == "star":
            c0, c1 = params["c0"], params["c1"]
            if c0 - abs(c1) <= 0:
                raise CurveError("polar radius must stay positive")
        elif kind == "generic":
            for key in ("y", "dy", "d2y"):
                if key not in params:
                    raise CurveError("generic curve needs y, dy, d2y callables")
        else:
            raise CurveError("unknown curve kind %r" % (kind,))
        self._validate()

    @classmethod
    def circle(cls, a):
        return cls("circle", a=a)

    @classmethod
    def star(cls, c0, c1, k):
        return cls("star", c0=c0, c1=c1, k=int(k))

    @classmethod
    def from_functions(cls, y, dy, d2y):
        return cls("generic", y=y, dy=dy, d2y=d2y)

    def _validate(self):
        t = np.linspace(0.0, 2 * np.pi, 2048, endpoint=False)
        p = self.point(t)
        d1 = self.derivative(t)
        speed = np.hypot(d1[..., 0], d1[..., 1])
        if np.min(speed) < 1e-14:
            raise CurveError("degenerate speed on the curve")
        # signed area via the shoelace integral; negative means clockwise
        area = 0.5 * np.mean(p[:, 0] * d1[:, 1] - p[:, 1] * d1[:, 0]) * 2 * np.pi
        if area < 0:
            self._reversed = True
            area = -area
        if area == 0:
            raise CurveError("curve encloses no area")

    def _t(self, t):
        t = np.asarray(t, dtype=float)
        return (2 * np.pi - t) % (2 * np.pi) if self._reversed else t

    def point(self, t):
        t = self._t(t)
        if self.kind == "circle":
            a = self.params["a"]
            return np.stack([a * np.cos(t), a * np.sin(t)], axis=-1)
        if self.kind == "star":
            r = self._r(t)
            return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)
        return np.asarray(self.params["y"](t), dtype=float)

    def _r(self, t):
        return self.params["c0"] + self.params["c1"] * np.cos(self.params["k"] * t)

    def _r1(self, t):
        k = self.params["k"]
        return -self.params["c1"] * k * np.sin(k * t)

    def _r2(self, t):
        k = self.params["k"]
        return -self.params["c1"] * k * k * np.cos(k * t)

    def derivative(self, t):
        s = -1.0 if self._reversed else 1.0
        t = self._t(t)
        if self.kind == "circle":
            a = self.params["a"]
            d = np.stack([-a * np.sin(t), a * np.cos(t)], axis=-1)
        elif self.kind == "star":
            r, r1 = self._r(t), self._r1(t)
            ct, st = np.cos(t), np.sin(t)
            d = np.stack([r1 * ct - r * st, r1 * st + r * ct], axis=-1)
        else:
            d = np.asarray(self.params["dy"](t), dtype=float)
        return s * d

    def second_derivative(self, t):
        t = self._t(t)
        if self.kind == "circle":
            a = self.params["a"]
            return np.stack([-a * np.cos(t), -a * np.sin(t)], axis=-1)
        if self.kind == "star":
            r, r1, r2 = self._r(t), self._r1(t), self._r2(t)
            ct, st = np.cos(t), np.sin(t)
            return np.stack(
                [r2 * ct - 2 * r1 * st - r * ct, r2 * st + 2 * r1 * ct - r * st],
                axis=-1,
            )
        return np.asarray(self.params["d2y"](t), dtype=float)

    def frame(self, t):
        p = self.point(t)
        d1 = self.derivative(t)
        d2 = self.second_derivative(t)
        speed = np.hypot(d1[..., 0], d1[..., 1])
        if np.min(speed) < 1e-14:
            raise CurveError("degenerate speed at evaluation parameter")
        tangent = d1 / speed[..., None]
        normal = np.stack([d1[..., 1], -d1[..., 0]], axis=-1) / speed[..., None]
        kappa = (d1[..., 0] * d2[..., 1] - d2[..., 0] * d1[..., 1]) / speed**3
        return CurveFrame(p, d1, d2, speed, tangent, normal, kappa)

    def nodes(self, N):
        return 2 * np.pi * np.arange(N) / N

    def kappa_max(self, n=4096):
        if self._kappa_max is None:
            t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
            self._kappa_max = float(np.max(np.abs(self.frame(t).kappa)))
        return self._kappa_max

    def bounding_box(self, n=2048):
        p = self.point(np.linspace(0.0, 2 * np.pi, n, endpoint=False))
        return p[:, 0].min(), p[:, 0].max(), p[:, 1].min(), p[:, 1].max()

    def contains(self, pts):
        """Interior test. Analytic for polar curves, winding number otherwise."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.kind == "circle":
            return np.hypot(pts[:, 0], pts[:, 1]) < self.params["a"]
        if self.kind == "star":
            th = np.arctan2(pts[:, 1], pts[:, 0])
            return np.hypot(pts[:, 0], pts[:, 1]) < self._r(self._t(th))
        t = np.linspace(0.0, 2 * np.pi, 2048, endpoint=False)
        poly = self.point(t)
        a = poly[None, :, :] - pts[:, None, :]
        b = np.roll(poly, -1, axis=0)[None, :, :] - pts[:, None, :]
        ang = np.arctan2(
            a[:, :, 0] * b[:, :, 1] - a[:, :, 1] * b[:, :, 0],
            a[:, :, 0] * b[:, :, 0] + a[:, :, 1] * b[:, :, 1],
        )
        return np.abs(ang.sum(axis=1)) > np.pi


def curve_eval(curve, t):
    """Frame quantities (point, y', y'', speed, tangent, normal, kappa) at t."""
    return curve.frame(t)


@dataclass
class ClosePointFrame:
    """An evaluation point together with its boundary projection data.

    eps is the curvature-scaled distance |kappa*| * |x - y*|; side is
    "interior", "exterior", or "on-boundary" (dist < 1e-14).
    """

    x: np.ndarray
    tstar: float
    ystar: np.ndarray
    nstar: np.ndarray
    kappa: float
    speed: float
    dist: float
    eps: float
    side: str


def _frame_at(curve, tstar, x):
    fr = curve.frame(tstar)
    d = float(np.hypot(*(np.asarray(x, dtype=float) - fr.point)))
    if d < 1e-14:
        side = "on-boundary"
    else:
        side = "exterior" if float(np.dot(x - fr.point, fr.normal)) > 0 else "interior"
    return ClosePointFrame(
        x=np.asarray(x, dtype=float),
        tstar=float(tstar % (2 * np.pi)),
        ystar=fr.point,
        nstar=fr.normal,
        kappa=float(fr.kappa),
        speed=float(fr.speed),
        dist=d,
        eps=abs(float(fr.kappa)) * d,
        side=side,
    )


def _golden_minimize(fun, lo, hi, tol=1e-13, maxiter=200):
    invphi = (np.sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(maxiter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def closest_point(curve, x, M=512):
    """Project x onto the curve: coarse scan, then Newton on
    F(t) = (x - y(t)) . y'(t), with a golden-section fallback."""
    x = np.asarray(x, dtype=float)
    tg = np.linspace(0.0, 2 * np.pi, M, endpoint=False)
    p = curve.point(tg)
    i = int(np.argmin((p[:, 0] - x[0]) ** 2 + (p[:, 1] - x[1]) ** 2))
    h = 2 * np.pi / M
    t0 = tg[i]
    t = t0
    ok = False
    for _ in range(50):
        pt = curve.point(t)
        d1 = curve.derivative(t)
        d2 = curve.second_derivative(t)
        r = x - pt
        F = r @ d1
        dF = -(d1 @ d1) + r @ d2
        if dF == 0:
            break
        step = F / dF
        t = t - step
        if abs(t - t0) > 2 * h:  # left the bracketing interval, distrust Newton
            break
        if abs(step) < 1e-13:
            ok = True
            break
    if not ok:
        def dist2(s):
            q = curve.point(s)
            return (q[0] - x[0]) ** 2 + (q[1] - x[1]) ** 2

        t = _golden_minimize(dist2, t0 - h, t0 + h)
        pt = curve.point(t)
        d1 = curve.derivative(t)
        if abs((x - pt) @ d1) > 1e-6 * max(1.0, float(np.hypot(*(x - pt)))):
            raise ProjectionError("closest-point search did not converge")
    return _frame_at(curve, t, x)


def project_batch(curve, pts, M=512, newton_iters=50):
    """Vectorized closest-point projection for many points at once.

    Returns (tstar, dist, inside) arrays. Points whose Newton iteration
    stalls are finished one at a time with the scalar solver.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    n = len(pts)
    tg = np.linspace(0.0, 2 * np.pi, M, endpoint=False)
    p = curve.point(tg)
    tstar = np.empty(n)
    best = np.empty(n, dtype=int)
    chunk = max(1, int(4e6) // M)
    for s in range(0, n, chunk):
        e = min(n, s + chunk)
        d2 = (pts[s:e, None, 0] - p[None, :, 0]) ** 2 + (
            pts[s:e, None, 1] - p[None, :, 1]
        ) ** 2
        best[s:e] = np.argmin(d2, axis=1)
    t = tg[best]
    t0 = t.copy()
    h = 2 * np.pi / M
    active = np.ones(n, dtype=bool)
    for _ in range(newton_iters):
        if not active.any():
            break
        ta = t[active]
        fr_p = curve.point(ta)
        fr_1 = curve.derivative(ta)
        fr_2 = curve.second_derivative(ta)
        r = pts[active] - fr_p
        F = np.einsum("ij,ij->i", r, fr_1)
        dF = -np.einsum("ij,ij->i", fr_1, fr_1) + np.einsum("ij,ij->i", r, fr_2)
        dF[dF == 0] = 1e-300
        step = F / dF
        t[active] = ta - step
        conv = np.abs(step) < 1e-13
        idx = np.flatnonzero(active)
        active[idx[conv]] = False
    bad = np.abs(t - t0) > 2 * h
    bad |= active
    for i in np.flatnonzero(bad):
        t[i] = closest_point(curve, pts[i], M=M).tstar
    yp = curve.point(t)
    dist = np.hypot(pts[:, 0] - yp[:, 0], pts[:, 1] - yp[:, 1])
    d1 = curve.derivative(t)
    speed = np.hypot(d1[:, 0], d1[:, 1])
    normal = np.stack([d1[:, 1], -d1[:, 0]], axis=-1) / speed[:, None]
    inside = np.einsum("ij,ij->i", pts - yp, normal) <= 0
    return t % (2 * np.pi), dist, inside


def offset_point(curve, tstar, eps, side="interior"):
    """Point at curvature-scaled distance eps from y(tstar) along the normal."""
    fr = curve.frame(tstar)
    if abs(fr.kappa) < FLAT_KAPPA:
        raise FlatPointError("curvature too small for a curvature-scaled offset")
    if side not in ("interior", "exterior"):
        raise ValueError("side must be interior or exterior")
    sgn = -1.0 if side == "interior" else 1.0
    return fr.point + sgn * (eps / abs(fr.kappa)) * fr.normal


def frame_from_offset(curve, tstar, eps, side="interior"):
    """ClosePointFrame for a point constructed by offset_point."""
    x = offset_point(curve, tstar, eps, side)
    return _frame_at(curve, tstar, x)

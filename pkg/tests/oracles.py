"""Independent oracles shared by the test modules.

Everything here is deliberately written from first principles (dense
quadrature, finite differences, lattice enumeration, winding numbers)
rather than through the library code paths it is used to check.
"""

import numpy as np


def fourier_panel_quadrature(fn, c, kappa_star, nmax, budget=8192):
    """Fourier coefficients (1/2pi) int_{-pi}^{pi} f(theta) e^{-i n theta}
    dtheta of an even function, by Gauss-Legendre panels graded
    dyadically toward the peak at theta = 0.

    Evenness folds the integral to (1/pi) int_0^pi f cos(n theta). The
    panel widths halve toward zero until they resolve the peak scale
    delta = 1 - rho; wide outer panels are split so cos(nmax theta)
    stays well sampled. Returns (ns, coeffs, nodes_used).
    """
    delta = max(c.delta, 1e-12)
    levels = int(min(96, max(24, np.ceil(np.log2(np.pi / delta)) + 12)))
    brk = [np.pi * 0.5**k for k in range(levels + 1)]
    panels = []
    wmax = np.pi / 16
    for lo, hi in zip(brk[1:], brk[:-1]):
        m = int(np.ceil((hi - lo) / wmax))
        edges = np.linspace(lo, hi, m + 1)
        panels += list(zip(edges[:-1], edges[1:]))
    panels.append((0.0, brk[-1]))
    G = max(16, min(64, budget // len(panels)))
    xg, wg = np.polynomial.legendre.leggauss(G)
    ns = np.arange(-nmax, nmax + 1)
    total = np.zeros(2 * nmax + 1)
    used = 0
    for lo, hi in panels:
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        th = mid + half * xg
        used += G
        fv = fn(th, c, kappa_star)
        total += ((half * wg) * fv) @ np.cos(np.outer(th, np.abs(ns)))
    return ns, total / np.pi, used


def fd_frame(curve, t, h=1e-5):
    """Tangent, outward normal, speed, and curvature by central
    differences of curve.point alone."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    p = lambda s: curve.point(s)
    d1 = (p(t + h) - p(t - h)) / (2 * h)
    d2 = (p(t + h) - 2 * p(t) + p(t - h)) / (h * h)
    speed = np.hypot(d1[:, 0], d1[:, 1])
    tangent = d1 / speed[:, None]
    normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
    kappa = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / speed**3
    return tangent, normal, speed, kappa


def winding_inside(curve, pts, M=4096):
    """Point-in-curve test by summing signed angle increments around a
    fine polyline."""
    t = 2 * np.pi * np.arange(M) / M
    poly = curve.point(t)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    out = np.empty(len(pts), dtype=bool)
    for i, q in enumerate(pts):
        d = poly - q
        ang = np.arctan2(d[:, 1], d[:, 0])
        dang = np.diff(np.concatenate([ang, ang[:1]]))
        dang = (dang + np.pi) % (2 * np.pi) - np.pi
        out[i] = abs(dang.sum()) > np.pi
    return out


def lattice_points_in_circle(a, h):
    """Enumerate lattice points (i*h, j*h) strictly inside |x| < a."""
    n = int(np.floor(a / h)) + 1
    pts = []
    for i in range(-n, n + 1):
        for j in range(-n, n + 1):
            if (i * h) ** 2 + (j * h) ** 2 < a * a:
                pts.append((i * h, j * h))
    return np.array(pts)


def dense_closest(curve, x, M=200001):
    """Closest boundary parameter by dense scan plus golden-section
    refinement; independent of the library's Newton projection."""
    t = 2 * np.pi * np.arange(M) / M
    p = curve.point(t)
    d2 = ((p - np.asarray(x, dtype=float)) ** 2).sum(axis=1)
    i = int(np.argmin(d2))
    lo = t[(i - 1) % M] if i > 0 else t[i] - 2 * np.pi / M
    hi = t[(i + 1) % M] if i + 1 < M else t[i] + 2 * np.pi / M
    f = lambda s: ((curve.point(np.array([s]))[0] - x) ** 2).sum()
    gr = (np.sqrt(5.0) - 1) / 2
    b, a_ = hi, lo
    c1 = b - gr * (b - a_)
    c2 = a_ + gr * (b - a_)
    for _ in range(200):
        if f(c1) < f(c2):
            b, c2 = c2, c1
            c1 = b - gr * (b - a_)
        else:
            a_, c1 = c1, c2
            c2 = a_ + gr * (b - a_)
    s = 0.5 * (a_ + b)
    return s % (2 * np.pi), np.sqrt(f(s))


def circle_potential_interior(pts, a, const, cos_c, sin_c):
    """Interior Poisson series u = const + sum_k (r/a)^k (c_k cos + s_k sin)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    r = np.hypot(pts[:, 0], pts[:, 1])
    th = np.arctan2(pts[:, 1], pts[:, 0])
    out = np.full(len(pts), float(const))
    for k, ck in enumerate(cos_c, start=1):
        out += ck * (r / a) ** k * np.cos(k * th)
    for k, sk in enumerate(sin_c, start=1):
        out += sk * (r / a) ** k * np.sin(k * th)
    return out


def circle_potential_exterior(pts, a, cos_c, sin_c):
    """Decaying exterior harmonic with normal derivative matching the
    trigonometric data on |x| = a (single-layer representation)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    r = np.hypot(pts[:, 0], pts[:, 1])
    th = np.arctan2(pts[:, 1], pts[:, 0])
    out = np.zeros(len(pts))
    for k, ck in enumerate(cos_c, start=1):
        out += -(a ** (k + 1) / k) * r ** (-k) * ck * np.cos(k * th)
    for k, sk in enumerate(sin_c, start=1):
        out += -(a ** (k + 1) / k) * r ** (-k) * sk * np.sin(k * th)
    return out


def dense_layer_eval(curve, x, density_fn, M=16384, kind="dlp"):
    """Brute-force layer potential at x by M-point trapezoid quadrature
    of the defining integral with a callable density."""
    t = 2 * np.pi * np.arange(M) / M
    tang, normal, speed, _ = fd_frame(curve, t)
    p = curve.point(t)
    d = np.asarray(x, dtype=float) - p
    r2 = (d * d).sum(axis=1)
    if kind == "dlp":
        ker = (normal * d).sum(axis=1) / r2
    else:
        ker = -0.5 * np.log(r2)
    return float(np.mean(ker * density_fn(t) * speed))

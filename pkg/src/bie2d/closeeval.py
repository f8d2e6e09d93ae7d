"""Layer-potential evaluation at arbitrary points, including the
boundary layer.

Four methods are provided for the double-layer potential and two for
the single-layer potential:

  naive                  plain PTR on the smooth-looking integrand;
                         accurate away from the boundary, O(1) wrong
                         inside the O(1/N) boundary layer
  asymptotic             split the kernel into outer + inner + residual
                         parts; the outer integral is known exactly from
                         the boundary data, the inner integral is a
                         truncated convolution with closed-form Fourier
                         coefficients, and only the O(eps) residual is
                         left to PTR
  subtraction (naive)    subtract the density value at the closest
                         boundary point, using PTR exactness for
                         constant densities
  subtraction (asympt.)  both tricks at once

Dispatch between naive and asymptotic uses the quadrature deviation of
the double-layer identity: PTR applied to the constant density has
error > tau only inside the boundary layer, which is exactly where the
asymptotic method is needed.
"""

import numpy as np

from .geometry import (
    FLAT_KAPPA,
    ClosePointFrame,
    closest_point,
    project_batch,
)
from .kernels import (
    CoefficientDomainError,
    FlatPointError,
    SingularKernelError,
    dlp_kernel,
    inner_coeffs,
    k_in_fourier,
    k_residual,
    s_in_fourier,
    s_residual,
    slp_kernel,
)
from .nystrom import INTERIOR_DIRICHLET
from .spectral import FourierCoeffs, convolve_eval, nodes, ptr

DEFAULT_THRESHOLD = 1e-8

METHODS = ("naive", "asymptotic", "subtraction-naive", "subtraction-asymptotic", "auto")


def _scan_size(N):
    return max(4 * N, 512)


def eval_dlp_naive(sol, x):
    """PTR value of the double-layer potential at x."""
    x = np.asarray(x, dtype=float)
    vals = dlp_kernel(x, sol.grid.point, sol.grid.normal)
    return float(ptr(vals * sol.density * sol.speed))


def eval_slp_naive(sol, x):
    """PTR value of the single-layer potential at x."""
    x = np.asarray(x, dtype=float)
    vals = slp_kernel(x, sol.grid.point)
    return float(ptr(vals * sol.density * sol.speed))


def eval_dlp_asymptotic(sol, frame):
    """Asymptotic PTR for the double-layer potential at a near-boundary
    interior point described by frame.

    The three terms: PTR of the residual kernel (plus the kappa*/2
    constant) against mu*speed; the outer integral f(y*) + mu(t*)/2
    known from the boundary integral equation; and the truncated
    convolution of the inner-kernel coefficients with those of mu*speed.
    """
    c = inner_coeffs(frame.kappa, frame.speed, frame.eps, side="interior")
    resid = k_residual(sol.t, frame, sol.curve, c) + 0.5 * frame.kappa
    term1 = float(ptr(resid * sol.density * sol.speed))
    term2 = sol.data_at(frame.tstar) + 0.5 * sol.density_at(frame.tstar)
    term3 = convolve_eval(
        k_in_fourier(c, frame.kappa, sol.N), sol.density_speed_hat, frame.tstar
    )
    return term1 + term2 + term3


def eval_slp_asymptotic(sol, frame):
    """Asymptotic PTR for the single-layer potential at a near-boundary
    exterior point: PTR of the residual kernel against phi*speed plus
    the truncated convolution with the inner-kernel coefficients."""
    c = inner_coeffs(frame.kappa, frame.speed, frame.eps, side="exterior")
    resid = s_residual(sol.t, frame, sol.curve, c)
    term1 = float(ptr(resid * sol.density * sol.speed))
    term2 = convolve_eval(
        s_in_fourier(c, frame.kappa, sol.N), sol.density_speed_hat, frame.tstar
    )
    return term1 + term2


def _as_frame(sol, target):
    if isinstance(target, ClosePointFrame):
        return target
    return closest_point(sol.curve, target, M=_scan_size(sol.N))


def eval_dlp_subtraction(sol, target, asymptotic=False):
    """Double-layer evaluation with the density value at the closest
    boundary point subtracted, exploiting PTR exactness for constant
    densities. target may be a point or a prebuilt ClosePointFrame."""
    frame = _as_frame(sol, target)
    mustar = sol.density_at(frame.tstar)
    if not asymptotic:
        vals = dlp_kernel(frame.x, sol.grid.point, sol.grid.normal)
        return float(ptr(vals * (sol.density - mustar) * sol.speed)) - mustar
    c = inner_coeffs(frame.kappa, frame.speed, frame.eps, side="interior")
    resid = k_residual(sol.t, frame, sol.curve, c) + 0.5 * frame.kappa
    term1 = float(ptr(resid * (sol.density - mustar) * sol.speed))
    term2 = sol.data_at(frame.tstar)
    shifted = FourierCoeffs(sol.N, sol.density_speed_hat.c - mustar * sol.speed_hat.c)
    term3 = convolve_eval(k_in_fourier(c, frame.kappa, sol.N), shifted, frame.tstar)
    return term1 + term2 + term3


def identity_deviation(curve, x, N):
    """PTR of the double-layer identity integrand at x: exactly -1
    (interior) or 0 (exterior) in the continuum, so the deviation from
    the side's value measures the local quadrature error."""
    fr = curve.frame(nodes(N))
    return float(ptr(dlp_kernel(np.asarray(x, dtype=float), fr.point, fr.normal) * fr.speed))


def in_boundary_layer(curve, x, N, tau=DEFAULT_THRESHOLD, side=None):
    """Boundary-layer test: (flag, deviation). The identity PTR value is
    compared against -1 or 0 according to which side of the curve x lies
    on (projected via closest_point unless side is supplied); the flag
    is True iff |deviation| > tau, strictly."""
    if side is None:
        side = closest_point(curve, x, M=_scan_size(N)).side
    target = -1.0 if side == "interior" else 0.0
    dev = identity_deviation(curve, x, N) - target
    return abs(dev) > tau, dev


def _naive_for(sol):
    return eval_dlp_naive if sol.problem == INTERIOR_DIRICHLET else eval_slp_naive


def _asymptotic_for(sol):
    return (
        eval_dlp_asymptotic
        if sol.problem == INTERIOR_DIRICHLET
        else eval_slp_asymptotic
    )


def _dispatch_asymptotic(sol, frame):
    """Layer treatment used by the auto dispatch: the subtraction variant
    for the double layer (it is exact for constant densities, so the
    kernel identity that flagged the point is restored exactly), the
    plain asymptotic for the single layer (no subtraction identity
    exists there)."""
    if sol.problem == INTERIOR_DIRICHLET:
        return eval_dlp_subtraction(sol, frame, asymptotic=True)
    return eval_slp_asymptotic(sol, frame)


def _expected_side(sol):
    return "interior" if sol.problem == INTERIOR_DIRICHLET else "exterior"


def evaluate_auto(sol, x, tau=DEFAULT_THRESHOLD):
    """Evaluate the potential at x, switching to the asymptotic method
    inside the boundary layer.

    Points flagged by in_boundary_layer get the asymptotic treatment;
    everything else takes the naive path unchanged. Flat closest points
    and coefficient-domain failures fall back to naive. On-boundary
    points are rejected."""
    frame = _as_frame(sol, x)
    if frame.side == "on-boundary":
        raise SingularKernelError("evaluation point lies on the boundary")
    if frame.side != _expected_side(sol):
        return _naive_for(sol)(sol, np.asarray(x, dtype=float))
    flagged, _ = in_boundary_layer(sol.curve, frame.x, sol.N, tau=tau, side=frame.side)
    if not flagged:
        return _naive_for(sol)(sol, frame.x)
    try:
        return _dispatch_asymptotic(sol, frame)
    except (FlatPointError, CoefficientDomainError):
        return _naive_for(sol)(sol, frame.x)


def evaluate(sol, target, method="auto", tau=DEFAULT_THRESHOLD):
    """Evaluate by method name (see METHODS)."""
    if method == "auto":
        return evaluate_auto(sol, target, tau=tau)
    if method == "naive":
        x = target.x if isinstance(target, ClosePointFrame) else target
        return _naive_for(sol)(sol, np.asarray(x, dtype=float))
    if method == "asymptotic":
        return _asymptotic_for(sol)(sol, _as_frame(sol, target))
    if method == "subtraction-naive":
        if sol.problem != INTERIOR_DIRICHLET:
            raise ValueError("subtraction methods apply to the double-layer problem")
        return eval_dlp_subtraction(sol, target, asymptotic=False)
    if method == "subtraction-asymptotic":
        if sol.problem != INTERIOR_DIRICHLET:
            raise ValueError("subtraction methods apply to the double-layer problem")
        return eval_dlp_subtraction(sol, target, asymptotic=True)
    raise ValueError("unknown method %r" % method)


def _chunked_kernel_matvec(sol, pts, weights, want_dlp):
    out = np.empty(len(pts))
    chunk = max(1, int(4e6) // sol.N)
    px = sol.grid.point[:, 0][None, :]
    py = sol.grid.point[:, 1][None, :]
    for s in range(0, len(pts), chunk):
        block = pts[s : s + chunk]
        dx = block[:, 0][:, None] - px
        dy = block[:, 1][:, None] - py
        r2 = dx * dx + dy * dy
        if r2.min() < 1e-28:
            raise SingularKernelError("an evaluation point coincides with a node")
        if want_dlp:
            vals = (
                dx * sol.grid.normal[None, :, 0] + dy * sol.grid.normal[None, :, 1]
            ) / r2
        else:
            vals = -0.5 * np.log(r2)
        out[s : s + chunk] = vals @ weights
    return out


def eval_naive_many(sol, pts):
    """Vectorized naive PTR at many points (rows of pts)."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    w = sol.density * sol.speed / sol.N
    return _chunked_kernel_matvec(sol, pts, w, sol.problem == INTERIOR_DIRICHLET)


def identity_deviation_many(sol, pts, inside):
    """Identity-PTR deviation for many points; inside is a boolean array
    giving each point's side."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    w = sol.speed / sol.N
    vals = _chunked_kernel_matvec(sol, pts, w, True)
    return vals + np.where(np.asarray(inside, dtype=bool), 1.0, 0.0)


def evaluate_auto_many(sol, pts, tau=DEFAULT_THRESHOLD, projection=None):
    """Batched evaluate_auto over rows of pts.

    Returns (values, tstar, dist, eps, in_layer). Projections and the
    naive sweep are vectorized; only flagged points pay the per-point
    asymptotic cost. projection, if given, is a precomputed
    (tstar, dist, inside) triple from project_batch."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if projection is None:
        tstar, dist, inside = project_batch(sol.curve, pts, M=_scan_size(sol.N))
    else:
        tstar, dist, inside = projection
    if (dist < 1e-14).any():
        raise SingularKernelError("an evaluation point lies on the boundary")
    dev = identity_deviation_many(sol, pts, inside)
    values = eval_naive_many(sol, pts)
    fr = sol.curve.frame(tstar)
    eps = np.abs(fr.kappa) * dist
    expected_inside = sol.problem == INTERIOR_DIRICHLET
    in_layer = (np.abs(dev) > tau) & (inside == expected_inside)
    side = _expected_side(sol)
    for i in np.flatnonzero(in_layer):
        frame = ClosePointFrame(
            x=pts[i],
            tstar=float(tstar[i]),
            ystar=fr.point[i],
            nstar=fr.normal[i],
            kappa=float(fr.kappa[i]),
            speed=float(fr.speed[i]),
            dist=float(dist[i]),
            eps=float(eps[i]),
            side=side,
        )
        try:
            values[i] = _dispatch_asymptotic(sol, frame)
        except (FlatPointError, CoefficientDomainError):
            in_layer[i] = False
    return values, tstar, dist, eps, in_layer

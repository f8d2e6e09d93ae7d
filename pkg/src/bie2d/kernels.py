"""Layer-potential kernels and their matched asymptotic expansions.

The double-layer kernel K(x,y) = n_y . (x-y)/|x-y|^2 develops a sharp
peak as x approaches the boundary. Writing x = y* -+ (eps/|kappa*|) n*
splits K into an outer part (the on-boundary kernel), an inner part
(a rational function of cos(t - t*) capturing the peak), and an O(eps)
residual:

    K = K_out + K_in + kappa*/2 + K_tilde,

where -kappa*/2 is the value both expansions share in the overlap
region. The single-layer kernel S = -log|x-y| splits as S = S_in +
S_tilde with a logarithmic inner part built from the same coefficients.

The inner kernels have closed-form Fourier coefficients, geometric in
rho, obtained from the series sum_n rho^|n| e^{i n th} =
(1-rho^2)/(1 - 2 rho cos th + rho^2) and the log series
log(1 - 2 rho cos th + rho^2) = -2 sum_{n>=1} (rho^n/n) cos n th.
On a circle both inner kernels are exact and both residuals vanish
identically.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import FLAT_KAPPA, FlatPointError
from .spectral import FourierCoeffs


class SingularKernelError(ZeroDivisionError):
    """Kernel evaluated at coincident source and target."""


class CoefficientDomainError(ValueError):
    """Inner-kernel coefficients left their validity region (|C1| >= 1)."""


def dlp_kernel(x, y, n_y):
    """Double-layer kernel n_y . (x - y) / |x - y|^2, vectorized over y rows."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n_y = np.asarray(n_y, dtype=float)
    r = x - y
    d2 = (r * r).sum(axis=-1)
    if np.any(d2 < 1e-28):
        raise SingularKernelError("kernel target coincides with a source point")
    return (n_y * r).sum(axis=-1) / d2


def slp_kernel(x, y):
    """Single-layer kernel -log |x - y|, vectorized over y rows."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = x - y
    d2 = (r * r).sum(axis=-1)
    if np.any(d2 < 1e-28):
        raise SingularKernelError("kernel target coincides with a source point")
    return -0.5 * np.log(d2)


def dlp_outer(ystar, y, n_y, kappa_star, tol=1e-12):
    """On-boundary double-layer kernel with target y*; the diagonal limit
    as y -> y* is -kappa*/2, substituted where |y - y*| < tol."""
    ystar = np.asarray(ystar, dtype=float)
    y = np.asarray(y, dtype=float)
    n_y = np.asarray(n_y, dtype=float)
    r = ystar - y
    d2 = (r * r).sum(axis=-1)
    near = d2 < tol * tol
    safe = np.where(near, 1.0, d2)
    out = np.where(near, -0.5 * kappa_star, (n_y * r).sum(axis=-1) / safe)
    return float(out) if out.ndim == 0 else out


@dataclass
class InnerKernelCoeffs:
    """Rational-trigonometric coefficients of the inner expansions.

    gamma = sgn(kappa*) |kappa* y'(t*)|^2. The coefficients encode the
    curvature-scaled offset of the target; side records which normal
    direction (interior targets flip the sign of eps relative to
    exterior ones, making the inner kernels exact on circles at
    r = a(1 - eps) and r = a(1 + eps) respectively).
    """

    gamma: float
    eps: float
    e: float  # signed eps: +eps interior, -eps exterior
    A0: float
    A1: float
    C0: float
    C1: float
    rho: float
    delta: float  # 1 - rho, kept separately to avoid cancellation
    side: str = "interior"


def inner_coeffs(kappa_star, speed_star, eps, side="interior"):
    """Modified inner-expansion coefficients for a target at curvature-scaled
    distance eps from the boundary.

    rho is the |rho| < 1 root of C1 = -2 rho/(1 + rho^2). As eps -> 0,
    C1 -> -1 and rho -> 1, so rho is computed through delta = 1 - rho =
    2 eps / (sqrt(4 beta + eps^2) + eps) with beta = |gamma| - e*gamma,
    which stays fully accurate in that limit.
    """
    if abs(kappa_star) < FLAT_KAPPA:
        raise FlatPointError("inner expansion needs |kappa*| above the flat threshold")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if side not in ("interior", "exterior"):
        raise ValueError("side must be interior or exterior")
    gamma = np.sign(kappa_star) * (kappa_star * speed_star) ** 2
    e = eps if side == "interior" else -eps
    beta = abs(gamma) - e * gamma
    a1 = gamma - e * abs(gamma)
    a0 = 2.0 * (a1 + e)
    c0 = 2.0 * beta + eps * eps
    if c0 <= 0:
        raise CoefficientDomainError("C0 must be positive")
    c1 = -2.0 * beta / c0
    if eps == 0.0:
        raise CoefficientDomainError("coefficients undefined on the boundary")
    if beta >= 0:
        # C1 in (-1, 0]; the root never leaves (0, 1] but C1 itself can
        # round to -1, so go through beta rather than C1
        delta = 2.0 * eps / (np.sqrt(4.0 * beta + eps * eps) + eps)
        rho = 1.0 - delta
    else:
        if 4.0 * beta + eps * eps <= 0 or abs(c1) >= 1.0:
            raise CoefficientDomainError(
                "|C1| >= 1; coefficients undefined at eps = %g" % eps
            )
        rho = -c1 / (1.0 + np.sqrt(1.0 - c1 * c1))
        delta = 1.0 - rho
    return InnerKernelCoeffs(
        gamma=float(gamma), eps=float(eps), e=float(e), A0=float(a0), A1=float(a1),
        C0=float(c0), C1=float(c1), rho=float(rho), delta=float(delta), side=side,
    )


def k_in(theta, c, kappa_star):
    """Inner double-layer kernel, a rational function of cos(theta):

        K_in = -(|kappa*|/C0) (A0/2 - A1 cos th) / (1 + C1 cos th).

    Both numerator and denominator are evaluated through 1 - cos th =
    2 sin^2(th/2), using A0/2 = A1 + e and 1 + C1 = eps^2/C0, so the
    peak value stays accurate as eps -> 0.
    """
    s2 = np.sin(0.5 * np.asarray(theta)) ** 2
    num = c.e + 2.0 * c.A1 * s2
    den = c.eps * c.eps / c.C0 - 2.0 * c.C1 * s2
    return -(abs(kappa_star) / c.C0) * num / den


def k_in_fourier(c, kappa_star, N):
    """Closed-form Fourier coefficients of k_in, geometric in rho:

        khat[0]    = -(|kappa*|/C0) q (A0/2 - A1 rho)
        khat[n!=0] = -(|kappa*|/C0) q (A0 rho^|n| - A1 (rho^|n|-1 + rho^|n|+1))/2

    with q = (1 + rho^2)/(1 - rho^2). Using A0/2 = A1 + e, the bracketed
    factors regroup as A1 delta + e and rho^{|n|-1} (e rho - A1 delta^2/2),
    cancellation-free since delta = 1 - rho is carried exactly.
    """
    rho, delta = c.rho, c.delta
    q = (1.0 + rho * rho) / (delta * (2.0 - delta))
    pref = -(abs(kappa_star) / c.C0) * q
    n = np.abs(np.arange(-N // 2, N // 2))
    inner = c.e * rho - 0.5 * c.A1 * delta * delta
    vals = pref * inner * rho ** np.maximum(n - 1, 0)
    vals[n == 0] = pref * (c.A1 * delta + c.e)
    return FourierCoeffs(N, vals.astype(complex))


def k_residual(t, frame, curve, c):
    """Residual double-layer kernel K_tilde = K - K_out - K_in - kappa*/2
    at boundary parameters t, for the evaluation point in frame."""
    fr = curve.frame(t)
    full = dlp_kernel(frame.x, fr.point, fr.normal)
    outer = dlp_outer(frame.ystar, fr.point, fr.normal, frame.kappa)
    inner = k_in(np.asarray(t) - frame.tstar, c, frame.kappa)
    return full - outer - inner - 0.5 * frame.kappa


def s_in(theta, c, kappa_star):
    """Inner single-layer kernel

        S_in = log|kappa*| - (1/2) log C0 - (1/2) log(1 + C1 cos th),

    with 1 + C1 cos th evaluated through 2 sin^2(th/2) as in k_in.
    """
    s2 = np.sin(0.5 * np.asarray(theta)) ** 2
    den = c.eps * c.eps / c.C0 - 2.0 * c.C1 * s2
    return np.log(abs(kappa_star)) - 0.5 * np.log(c.C0) - 0.5 * np.log(den)


def s_in_fourier(c, kappa_star, N):
    """Closed-form Fourier coefficients of s_in:

        shat[0]    = log|kappa*| - (1/2) log C0 + (1/2) log(1 + rho^2)
        shat[n!=0] = rho^|n| / (2|n|).
    """
    rho = c.rho
    an = np.abs(np.arange(-N // 2, N // 2))
    vals = np.where(an == 0, 0.0, rho**an / np.where(an == 0, 1, 2 * an))
    vals[N // 2] = (
        np.log(abs(kappa_star)) - 0.5 * np.log(c.C0) + 0.5 * np.log1p(rho * rho)
    )
    return FourierCoeffs(N, vals.astype(complex))


def s_residual(t, frame, curve, c):
    """Residual single-layer kernel S_tilde = S - S_in at parameters t."""
    fr = curve.frame(t)
    full = slp_kernel(frame.x, fr.point)
    inner = s_in(np.asarray(t) - frame.tstar, c, frame.kappa)
    return full - inner

"""Closed-form machinery for the interior Dirichlet problem on a disk.

On a circle of radius a the double-layer density for boundary data f is
known exactly, mu = mean(f) - 2 f, and the kernel has the explicit
Fourier series

    K(t - t*) = -1/2 - (1/2) sum_m (r/a)^|m| exp(i m (t - t*)),

so the potential, the quadrature value, and the quadrature error are
all available in closed form. The error of the N-point trapezoid rule
is pure aliasing: the double sum over alias blocks l*N and kernel modes
m. For mu = 1 the whole sum telescopes to a geometric series with the
exact value

    E = (q^2 - q cos(N t*)) / (1 + q^2 - 2 q cos(N t*)),  q = (r/a)^N.

These formulas are the test oracle for the general-curve machinery.
"""

import numpy as np

from .spectral import FourierCoeffs


def circle_density(f):
    """Exact double-layer density on a circle: mu = mean(f) - 2 f."""
    f = np.asarray(f, dtype=float)
    return f.mean() - 2.0 * f


def circle_kernel_coeffs(r, a, N):
    """Fourier coefficients of the scaled circle kernel: -1 at n = 0,
    -(1/2)(r/a)^|n| otherwise."""
    if not 0 <= r < a:
        raise ValueError("need 0 <= r < a")
    n = np.abs(np.arange(-N // 2, N // 2))
    c = -0.5 * (r / a) ** n
    c[N // 2] = -1.0
    return FourierCoeffs(N, c.astype(complex))


def circle_spectral_eval(mu_hat, r, tstar, a):
    """Potential of the band-limited density at (r, t*) via the kernel series.

    The phase carries +i n t*: the defining integral pairs density mode n
    with kernel mode -n (see convolve_eval), so conj(khat[n]) ghat[n]
    picks up exp(+i n t*)."""
    if not 0 <= r < a:
        raise ValueError("need 0 <= r < a")
    k = circle_kernel_coeffs(r, a, mu_hat.N)
    s = np.conj(k.c) * mu_hat.c * np.exp(1j * k.ns * tstar)
    return float(s.sum().real)


def circle_aliasing_error(mu_hat, r, tstar, a, N):
    """Aliasing error of the N-point rule for a band-limited density:
    the alias-block double sum, truncated where the geometric tail of
    (r/a)^m drops below 1e-15."""
    if not 0 <= r < a:
        raise ValueError("need 0 <= r < a")
    q = r / a
    ns = mu_hat.ns
    mu = mu_hat.c
    musum = np.abs(mu).sum() + 1.0
    total = 0.0 + 0.0j
    for l in range(1, 200001):
        # modes k of the density alias through kernel mode l*N - k; the
        # l < 0 blocks are the conjugates since the density is real
        m = l * N - ns
        kervals = np.where(m == 0, -1.0, -0.5 * q ** np.abs(m).astype(float))
        block = (kervals * mu * np.exp(-1j * m * tstar)).sum()
        total += block + np.conj(block)
        tail = musum * q ** ((l + 1) * N - N // 2)
        if tail < 1e-16:
            break
    return float(total.real)


def circle_error_mu1(r, tstar, a, N):
    """Exact N-point quadrature error for unit density on the circle.
    Vectorized over r and tstar."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= a):
        raise ValueError("need 0 <= r < a")
    q = (r / a) ** N
    cn = np.cos(N * np.asarray(tstar, dtype=float))
    out = (q * q - q * cn) / (1.0 + q * q - 2.0 * q * cn)
    return float(out) if out.ndim == 0 else out

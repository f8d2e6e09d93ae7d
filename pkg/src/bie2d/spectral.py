"""Periodic trapezoid rule, FFT analysis, and truncated convolution sums.

Conventions, fixed once for the whole package: samples live at the nodes
t_j = 2*pi*j/N, coefficients follow

    c_hat[n] = (1/2pi) int c(t) exp(-i n t) dt ~ (1/N) sum_j c_j exp(-i n t_j)

for n in [-N/2, N/2 - 1], and synthesis is sum_n c_hat[n] exp(i n t)
(real part for real data).
"""

from dataclasses import dataclass

import numpy as np


def nodes(N):
    return 2 * np.pi * np.arange(N) / N


def ptr(values):
    """Periodic trapezoid rule for (1/2pi) int f dt: the sample mean."""
    values = np.asarray(values)
    _check_samples(values)
    return values.mean()


def _check_samples(values):
    N = values.shape[-1]
    if N < 8 or N % 2:
        raise ValueError("need an even number of samples, at least 8")


@dataclass
class FourierCoeffs:
    """Coefficients c[n] for n = -N/2 .. N/2-1, stored in ascending n."""

    N: int
    c: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=complex)
        if self.c.shape != (self.N,):
            raise ValueError("coefficient array must have length N")

    @property
    def ns(self):
        return np.arange(-self.N // 2, self.N // 2)

    def __getitem__(self, n):
        return self.c[n + self.N // 2]


def analyze(values):
    """Fourier coefficients of periodic samples (FFT, scaled and centered)."""
    values = np.asarray(values)
    _check_samples(values)
    N = values.shape[-1]
    return FourierCoeffs(N, np.fft.fftshift(np.fft.fft(values)) / N)


def synth(coeffs, t):
    """Real part of sum_n c[n] exp(i n t) at scalar or array t."""
    t = np.asarray(t, dtype=float)
    ph = np.exp(1j * np.outer(np.atleast_1d(t), coeffs.ns))
    out = (ph @ coeffs.c).real
    return float(out[0]) if t.ndim == 0 else out


def convolve_eval(kernel_coeffs, density_coeffs, tstar):
    """Truncated conjugate-weighted convolution sum

        sum_n conj(khat[n]) * ghat[n] * exp(+i n t*),

    the spectral evaluation of (1/2pi) int k(t - t*) g(t) dt for an even
    real kernel. Returns the real part.

    The sign of the phase follows from the defining integral: expanding
    k(t - t*) = sum_m khat[m] e^{im(t-t*)} and g(t) = sum_n ghat[n] e^{int},
    the t-integral picks m = -n, so the sum runs over khat[-n] ghat[n]
    e^{+int*} = conj(khat[n]) ghat[n] e^{+int*} for a real kernel. (Checked
    against direct quadrature; densities with odd components distinguish
    the two phase signs.)
    """
    if kernel_coeffs.N != density_coeffs.N:
        raise ValueError("coefficient lengths differ")
    ns = kernel_coeffs.ns
    s = np.conj(kernel_coeffs.c) * density_coeffs.c * np.exp(1j * ns * tstar)
    return float(s.sum().real)

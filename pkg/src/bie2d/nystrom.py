"""Nystrom solution of the second-kind boundary integral equations.

Interior Dirichlet data f is matched by a double-layer density mu
solving (-1/2 I + K_N) mu = f; exterior Neumann data g by a
single-layer density phi solving (-1/2 I + K'_N) phi = g. K_N and
K'_N are N-point trapezoid discretizations of the double-layer kernel
and its adjoint with the diagonal set to the smooth limit -kappa/2,
so the quadrature converges spectrally and a dense direct solve is
adequate at the sizes used here.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .geometry import BoundaryCurve, CurveFrame
from .spectral import FourierCoeffs, analyze, nodes, ptr, synth

log = logging.getLogger(__name__)

COND_LIMIT = 1e12
RESIDUAL_LIMIT = 1e-10
COMPAT_LIMIT = 1e-10

INTERIOR_DIRICHLET = "interior-dirichlet"
EXTERIOR_NEUMANN = "exterior-neumann"


class IllConditionedError(ArithmeticError):
    """Discrete system is too ill-conditioned to trust."""


class CompatibilityError(ValueError):
    """Exterior Neumann data with nonzero mean against arclength."""


def _node_samples(data, N):
    if callable(data):
        data = data(nodes(N))
    vals = np.asarray(data, dtype=float)
    if vals.shape != (N,):
        raise ValueError("boundary data must provide %d node samples" % N)
    if not np.all(np.isfinite(vals)):
        raise ValueError("boundary data contains non-finite samples")
    return vals


def _kernel_grid(curve, N):
    fr = curve.frame(nodes(N))
    diff = fr.point[:, None, :] - fr.point[None, :, :]
    r2 = (diff * diff).sum(axis=-1)
    np.fill_diagonal(r2, 1.0)
    return fr, diff, r2


def interior_dirichlet_matrix(curve, N):
    """Dense matrix -I/2 + (1/N) K(y_i, y_j)|y'_j| with the diagonal
    kernel limit -kappa_i/2."""
    fr, diff, r2 = _kernel_grid(curve, N)
    K = (diff * fr.normal[None, :, :]).sum(axis=-1) / r2
    np.fill_diagonal(K, -0.5 * fr.kappa)
    A = (K * fr.speed[None, :]) / N
    A[np.diag_indices(N)] -= 0.5
    return A


def exterior_neumann_matrix(curve, N):
    """Dense matrix -I/2 + (1/N) K'(y_i, y_j)|y'_j| where K' is the
    adjoint kernel -n_{y_i}.(y_i - y_j)/|y_i - y_j|^2, diagonal -kappa_i/2."""
    fr, diff, r2 = _kernel_grid(curve, N)
    K = -(diff * fr.normal[:, None, :]).sum(axis=-1) / r2
    np.fill_diagonal(K, -0.5 * fr.kappa)
    A = (K * fr.speed[None, :]) / N
    A[np.diag_indices(N)] -= 0.5
    return A


@dataclass(frozen=True)
class DensitySolution:
    """Solved boundary density with its spectral data.

    density_speed_hat holds the coefficients of density*speed, the
    quantity the close-evaluation formulas convolve against kernel
    coefficients; density_hat/data_hat support trigonometric
    interpolation off the grid.
    """

    curve: BoundaryCurve
    N: int
    problem: str
    t: np.ndarray
    grid: CurveFrame
    density: np.ndarray
    data: np.ndarray
    speed: np.ndarray
    density_speed_hat: FourierCoeffs
    density_hat: FourierCoeffs
    data_hat: FourierCoeffs
    speed_hat: FourierCoeffs

    def density_at(self, tstar):
        return synth(self.density_hat, tstar)

    def data_at(self, tstar):
        return synth(self.data_hat, tstar)

    @classmethod
    def from_density(cls, curve, density, N=None, problem=INTERIOR_DIRICHLET):
        """Package a directly prescribed density; the boundary data is
        synthesized with the discrete operator so that the pair stays
        consistent at the quadrature level."""
        if callable(density) and N is None:
            raise ValueError("N is required when the density is a callable")
        if N is None:
            N = np.asarray(density).size
        vals = _node_samples(density, N)
        if problem == INTERIOR_DIRICHLET:
            A = interior_dirichlet_matrix(curve, N)
        elif problem == EXTERIOR_NEUMANN:
            A = exterior_neumann_matrix(curve, N)
        else:
            raise ValueError("unknown problem tag %r" % problem)
        return _package(curve, N, problem, vals, A @ vals)


def _package(curve, N, problem, density, data):
    t = nodes(N)
    grid = curve.frame(t)
    speed = grid.speed
    return DensitySolution(
        curve=curve,
        N=N,
        problem=problem,
        t=t,
        grid=grid,
        density=density,
        data=data,
        speed=speed,
        density_speed_hat=analyze(density * speed),
        density_hat=analyze(density),
        data_hat=analyze(data),
        speed_hat=analyze(speed),
    )


def _direct_solve(A, rhs, what):
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedError(
            "%s system condition number %.3e exceeds %.1e" % (what, cond, COND_LIMIT)
        )
    sol = np.linalg.solve(A, rhs)
    resid = np.abs(A @ sol - rhs).max() / max(1.0, np.abs(rhs).max())
    if resid > RESIDUAL_LIMIT:
        raise IllConditionedError(
            "%s solve residual %.3e exceeds %.1e" % (what, resid, RESIDUAL_LIMIT)
        )
    log.debug("%s solve: N=%d cond=%.2e resid=%.2e", what, rhs.size, cond, resid)
    return sol


def solve_interior_dirichlet(curve, f, N):
    """Solve the interior Dirichlet problem for the double-layer density."""
    fvals = _node_samples(f, N)
    A = interior_dirichlet_matrix(curve, N)
    mu = _direct_solve(A, fvals, "interior Dirichlet")
    return _package(curve, N, INTERIOR_DIRICHLET, mu, fvals)


def solve_exterior_neumann(curve, g, N):
    """Solve the exterior Neumann problem for the single-layer density."""
    gvals = _node_samples(g, N)
    speed = curve.frame(nodes(N)).speed
    compat = ptr(gvals * speed)
    if abs(compat) >= COMPAT_LIMIT:
        raise CompatibilityError(
            "Neumann data mean against arclength is %.3e (must vanish)" % compat
        )
    A = exterior_neumann_matrix(curve, N)
    phi = _direct_solve(A, gvals, "exterior Neumann")
    return _package(curve, N, EXTERIOR_NEUMANN, phi, gvals)

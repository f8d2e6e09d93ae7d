"""Experiment harness: configs, evaluation grids, error fields, CSV output.

The boundary-value test problems come with analytic solutions (a log
point source outside the domain for the interior Dirichlet problem, a
decaying point "dipole" component inside it for the exterior Neumann
problem, trigonometric data on circles), so every grid evaluation has
an exact value to compare against. Results go to flat CSV files with a
fixed schema shared with the plotting frontend.
"""

import math
from dataclasses import dataclass, field

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

import numpy as np

from . import closeeval
from .closeeval import (
    DEFAULT_THRESHOLD,
    METHODS,
    eval_dlp_subtraction,
    eval_naive_many,
    evaluate_auto_many,
    identity_deviation,
)
from .geometry import BoundaryCurve, ClosePointFrame, frame_from_offset, project_batch
from .kernels import CoefficientDomainError, FlatPointError, inner_coeffs, k_residual
from .nystrom import (
    EXTERIOR_NEUMANN,
    INTERIOR_DIRICHLET,
    DensitySolution,
    solve_exterior_neumann,
    solve_interior_dirichlet,
)
from .spectral import nodes

CSV_HEADER = "x,y,tstar,eps,method,value,exact,abs_error"


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


@dataclass
class ExperimentConfig:
    curve: BoundaryCurve
    problem: str
    data: dict
    N: int
    methods: list
    grid: dict
    threshold: float = DEFAULT_THRESHOLD
    out: str = None

    def __post_init__(self):
        if isinstance(self.curve, dict):
            self.curve = _build_curve(self.curve)
        _require(self.problem in (INTERIOR_DIRICHLET, EXTERIOR_NEUMANN),
                 "problem must be %s or %s" % (INTERIOR_DIRICHLET, EXTERIOR_NEUMANN))
        _require(self.N % 2 == 0 and self.N >= 8, "N must be even and at least 8")
        _require(self.threshold > 0, "threshold must be positive")
        _require(len(self.methods) > 0, "at least one method is required")
        for m in self.methods:
            _require(m in METHODS, "unknown method %r" % m)
            if m.startswith("subtraction") and self.problem != INTERIOR_DIRICHLET:
                raise ConfigError("subtraction methods need the interior problem")
        kind = self.grid.get("kind")
        _require(kind in ("body-fitted", "cartesian", "ray"),
                 "grid kind must be body-fitted, cartesian or ray")
        if kind == "body-fitted":
            _require(int(self.grid.get("n_normal", 0)) >= 2, "n_normal must be >= 2")
        elif kind == "cartesian":
            _require(float(self.grid.get("h", 0)) > 0, "h must be positive")
        else:
            _require("tstar" in self.grid and "eps" in self.grid,
                     "ray grid needs tstar and eps")
            _require(len(self.grid["eps"]) > 0, "ray grid needs at least one eps")


def _build_curve(spec):
    kind = spec.get("kind")
    if kind == "circle":
        return BoundaryCurve.circle(float(spec.get("a", 1.0)))
    if kind == "star":
        return BoundaryCurve.star(
            float(spec["c0"]), float(spec["c1"]), int(spec["k"])
        )
    raise ConfigError("curve kind must be circle or star")


def load_config(path):
    """Parse a TOML experiment config into an ExperimentConfig."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as e:
        raise ConfigError("cannot read config: %s" % e)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError("config parse error: %s" % e)
    try:
        curve = _build_curve(raw["curve"])
        cfg = ExperimentConfig(
            curve=curve,
            problem=raw.get("problem", INTERIOR_DIRICHLET),
            data=raw["data"],
            N=int(raw["N"]),
            methods=list(raw.get("methods", ["auto"])),
            grid=raw["grid"],
            threshold=float(raw.get("threshold", DEFAULT_THRESHOLD)),
            out=raw.get("out"),
        )
    except KeyError as e:
        raise ConfigError("missing config key: %s" % e)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError("bad config value: %s" % e)
    return cfg


# ---------------------------------------------------------------- data specs

def log_source_exact(x0):
    """u(x) = -(1/2pi) log|x - x0|, harmonic away from x0."""
    x0 = np.asarray(x0, dtype=float)

    def exact(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return -np.log(np.hypot(pts[:, 0] - x0[0], pts[:, 1] - x0[1])) / (2 * np.pi)

    return exact


def inverse_point_exact(x0):
    """v(x) = first component of (x - x0)/|x - x0|^2, decaying and harmonic."""
    x0 = np.asarray(x0, dtype=float)

    def exact(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        d = pts - x0
        return d[:, 0] / (d * d).sum(axis=1)

    return exact


def inverse_point_normal_derivative(curve, x0):
    x0 = np.asarray(x0, dtype=float)

    def g(t):
        fr = curve.frame(np.atleast_1d(t))
        d = fr.point - x0
        r2 = (d * d).sum(axis=1)
        grad0 = 1.0 / r2 - 2.0 * d[:, 0] * d[:, 0] / r2**2
        grad1 = -2.0 * d[:, 0] * d[:, 1] / r2**2
        return grad0 * fr.normal[:, 0] + grad1 * fr.normal[:, 1]

    return g


def _trig_eval(t, const, cos_c, sin_c):
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, float(const))
    for k, a in enumerate(cos_c, start=1):
        out += a * np.cos(k * t)
    for k, b in enumerate(sin_c, start=1):
        out += b * np.sin(k * t)
    return out


def _circle_series_exact(problem, a, const, cos_c, sin_c):
    def exact(pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        r = np.hypot(pts[:, 0], pts[:, 1])
        th = np.arctan2(pts[:, 1], pts[:, 0])
        if problem == INTERIOR_DIRICHLET:
            out = np.full(len(pts), float(const))
            for k, c in enumerate(cos_c, start=1):
                out += c * (r / a) ** k * np.cos(k * th)
            for k, s in enumerate(sin_c, start=1):
                out += s * (r / a) ** k * np.sin(k * th)
        else:
            # single-layer solution decaying at infinity with dv/dn = g
            out = np.zeros(len(pts))
            for k, c in enumerate(cos_c, start=1):
                out += -(a ** (k + 1) / k) * r ** (-k) * c * np.cos(k * th)
            for k, s in enumerate(sin_c, start=1):
                out += -(a ** (k + 1) / k) * r ** (-k) * s * np.sin(k * th)
        return out

    return exact


@dataclass
class ProblemData:
    boundary: object  # callable t -> samples, or None for prescribed density
    exact: object  # callable pts -> values
    density: object = None  # prescribed density samples or callable


def build_data(cfg):
    """Boundary data, exact solution, and optional prescribed density
    for a config's data spec."""
    spec = cfg.data
    kind = spec.get("kind")
    if kind == "log-source":
        _require(cfg.problem == INTERIOR_DIRICHLET, "log-source is interior data")
        x0 = np.asarray(spec["x0"], dtype=float)
        _require(not cfg.curve.contains(x0[None, :])[0],
                 "log-source point must lie outside the curve")
        exact = log_source_exact(x0)

        def f(t):
            return exact(cfg.curve.point(np.atleast_1d(t)))

        return ProblemData(boundary=f, exact=exact)
    if kind == "inverse-point":
        _require(cfg.problem == EXTERIOR_NEUMANN, "inverse-point is exterior data")
        x0 = np.asarray(spec["x0"], dtype=float)
        _require(cfg.curve.contains(x0[None, :])[0],
                 "inverse-point source must lie inside the curve")
        return ProblemData(
            boundary=inverse_point_normal_derivative(cfg.curve, x0),
            exact=inverse_point_exact(x0),
        )
    if kind == "coefficients":
        _require(cfg.curve.kind == "circle",
                 "coefficient data has a closed-form solution on circles only")
        const = float(spec.get("const", 0.0))
        cos_c = [float(v) for v in spec.get("cos", [])]
        sin_c = [float(v) for v in spec.get("sin", [])]
        if cfg.problem == EXTERIOR_NEUMANN:
            _require(const == 0.0, "exterior Neumann data must have zero mean")

        def f(t):
            return _trig_eval(t, const, cos_c, sin_c)

        return ProblemData(
            boundary=f,
            exact=_circle_series_exact(
                cfg.problem, cfg.curve.params["a"], const, cos_c, sin_c
            ),
        )
    if kind == "unit-density":
        _require(cfg.problem == INTERIOR_DIRICHLET,
                 "unit-density mode is defined for the interior problem")

        def exact(pts):
            return np.full(len(np.atleast_2d(pts)), -1.0)

        return ProblemData(boundary=None, exact=exact, density=np.ones(cfg.N))
    raise ConfigError("unknown data kind %r" % kind)


def solve_config(cfg):
    data = build_data(cfg)
    if data.density is not None:
        sol = DensitySolution.from_density(
            cfg.curve, data.density, N=cfg.N, problem=cfg.problem
        )
    elif cfg.problem == INTERIOR_DIRICHLET:
        sol = solve_interior_dirichlet(cfg.curve, data.boundary, cfg.N)
    else:
        sol = solve_exterior_neumann(cfg.curve, data.boundary, cfg.N)
    return sol, data


# --------------------------------------------------------------------- grids

def body_fitted_grid(curve, N, n_normal, side="interior", depths=None):
    """Evaluation points along the N node normals: n_normal equispaced
    physical depths from delta0 = (1/kappa_max)/n_normal out to
    1/kappa_max (the first point sits one step off the boundary).

    Returns (pts, tstar, eps, depth) flattened node-major."""
    if n_normal < 2:
        raise ValueError("n_normal must be >= 2")
    D = 1.0 / curve.kappa_max()
    if depths is None:
        depths = np.linspace(D / n_normal, D, n_normal)
    else:
        depths = np.asarray(depths, dtype=float)
    t = nodes(N)
    fr = curve.frame(t)
    sgn = -1.0 if side == "interior" else 1.0
    pts = fr.point[:, None, :] + sgn * depths[None, :, None] * fr.normal[:, None, :]
    tstar = np.repeat(t, len(depths))
    depth = np.tile(depths, N)
    eps = np.repeat(np.abs(fr.kappa), len(depths)) * depth
    return pts.reshape(-1, 2), tstar, eps, depth


def cartesian_grid(curve, h, mode="interior"):
    """Lattice points of spacing h on one side of the curve, strictly
    off-boundary (distance > 1e-12). Exterior mode uses the bounding
    box inflated by 1/kappa_max."""
    if h <= 0:
        raise ValueError("h must be positive")
    xmin, xmax, ymin, ymax = curve.bounding_box()
    pad = 0.0 if mode == "interior" else 1.0 / curve.kappa_max()
    xs = np.arange(math.ceil((xmin - pad) / h), math.floor((xmax + pad) / h) + 1) * h
    ys = np.arange(math.ceil((ymin - pad) / h), math.floor((ymax + pad) / h) + 1) * h
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    inside = curve.contains(pts)
    pts = pts[inside] if mode == "interior" else pts[~inside]
    _, dist, _ = project_batch(curve, pts, M=2048)
    return pts[dist > 1e-12]


def _frames_from_construction(curve, pts, tstar, eps, side):
    fr = curve.frame(tstar)
    dist = np.where(np.abs(fr.kappa) > 0, eps / np.maximum(np.abs(fr.kappa), 1e-300), 0.0)
    return [
        ClosePointFrame(
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
        for i in range(len(pts))
    ]


def _frames_from_projection(curve, pts, tstar, dist, side):
    fr = curve.frame(tstar)
    eps = np.abs(fr.kappa) * dist
    return [
        ClosePointFrame(
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
        for i in range(len(pts))
    ]


# --------------------------------------------------------------- error field

@dataclass
class ErrorField:
    x: np.ndarray
    y: np.ndarray
    tstar: np.ndarray
    eps: np.ndarray
    method: np.ndarray
    value: np.ndarray
    exact: np.ndarray
    abs_error: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.abs_error is None:
            self.abs_error = np.abs(self.value - self.exact)

    def mask(self, method=None):
        if method is None:
            return np.ones(len(self.x), dtype=bool)
        return self.method == method

    def linf(self, method=None):
        return float(self.abs_error[self.mask(method)].max())

    def l2(self, method=None):
        e = self.abs_error[self.mask(method)]
        return float(np.sqrt(np.mean(e * e)))

    def lines(self):
        yield CSV_HEADER
        for i in range(len(self.x)):
            yield "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g" % (
                self.x[i],
                self.y[i],
                self.tstar[i],
                self.eps[i],
                self.method[i],
                self.value[i],
                self.exact[i],
                self.abs_error[i],
            )

    def write_csv(self, path):
        with open(path, "w") as fh:
            for line in self.lines():
                fh.write(line + "\n")


def _concat_fields(parts):
    return ErrorField(
        x=np.concatenate([p.x for p in parts]),
        y=np.concatenate([p.y for p in parts]),
        tstar=np.concatenate([p.tstar for p in parts]),
        eps=np.concatenate([p.eps for p in parts]),
        method=np.concatenate([p.method for p in parts]),
        value=np.concatenate([p.value for p in parts]),
        exact=np.concatenate([p.exact for p in parts]),
    )


# --------------------------------------------------------------- experiments

def _auto_with_frame(sol, frame, tau):
    dev = identity_deviation(sol.curve, frame.x, sol.N)
    dev -= -1.0 if frame.side == "interior" else 0.0
    if abs(dev) <= tau:
        return closeeval._naive_for(sol)(sol, frame.x)
    try:
        return closeeval._dispatch_asymptotic(sol, frame)
    except (FlatPointError, CoefficientDomainError):
        return closeeval._naive_for(sol)(sol, frame.x)


def _eval_method(sol, method, pts, frames, tau):
    if method == "naive":
        return eval_naive_many(sol, pts)
    vals = np.empty(len(pts))
    for i, frame in enumerate(frames):
        if method == "asymptotic":
            vals[i] = closeeval._asymptotic_for(sol)(sol, frame)
        elif method == "subtraction-naive":
            vals[i] = eval_dlp_subtraction(sol, frame, asymptotic=False)
        elif method == "subtraction-asymptotic":
            vals[i] = eval_dlp_subtraction(sol, frame, asymptotic=True)
        elif method == "auto":
            vals[i] = _auto_with_frame(sol, frame, tau)
        else:
            raise ConfigError("unknown method %r" % method)
    return vals


def run_experiment(cfg):
    """Solve the configured problem, evaluate every grid point with
    every requested method, and return the error field."""
    sol, data = solve_config(cfg)
    side = "interior" if cfg.problem == INTERIOR_DIRICHLET else "exterior"
    kind = cfg.grid["kind"]

    if kind == "body-fitted":
        pts, tstar, eps, _ = body_fitted_grid(
            cfg.curve, cfg.N, int(cfg.grid["n_normal"]), side=side
        )
        frames = _frames_from_construction(cfg.curve, pts, tstar, eps, side)
    elif kind == "ray":
        ts = float(cfg.grid["tstar"])
        eps = np.asarray([float(v) for v in cfg.grid["eps"]])
        frames = [frame_from_offset(cfg.curve, ts, e, side) for e in eps]
        pts = np.array([f.x for f in frames])
        tstar = np.full(len(eps), ts)
    else:
        pts = cartesian_grid(cfg.curve, float(cfg.grid["h"]), mode=side)
        tstar, dist, inside = project_batch(cfg.curve, pts, M=max(4 * cfg.N, 512))
        projection = (tstar, dist, inside)
        frames = _frames_from_projection(cfg.curve, pts, tstar, dist, side)
        eps = np.array([f.eps for f in frames])

    exact = data.exact(pts)
    parts = []
    for method in cfg.methods:
        if kind == "cartesian" and method == "auto":
            vals, _, _, _, _ = evaluate_auto_many(
                sol, pts, tau=cfg.threshold, projection=projection
            )
        else:
            vals = _eval_method(sol, method, pts, frames, cfg.threshold)
        parts.append(
            ErrorField(
                x=pts[:, 0],
                y=pts[:, 1],
                tstar=np.asarray(tstar, dtype=float),
                eps=np.asarray(eps, dtype=float),
                method=np.full(len(pts), method, dtype=object),
                value=vals,
                exact=exact,
            )
        )
    return _concat_fields(parts)


def fit_slope(eps, err):
    """Least-squares exponent p of err ~ C*eps^p in log-log coordinates."""
    eps = np.asarray(eps, dtype=float)
    err = np.asarray(err, dtype=float)
    if len(eps) < 3:
        raise ValueError("slope fit needs at least 3 points")
    if (err <= 0).any() or (eps <= 0).any():
        raise ValueError("slope fit needs positive errors and eps")
    p, _ = np.polyfit(np.log(eps), np.log(err), 1)
    return float(p)


def kernel_slope_data(curve, tstar, eps_list, side="interior", n_theta=2048):
    """L-infinity (over the boundary parameter) error of the matched
    kernel expansion at each eps: max |K - K_out - K_in - kappa*/2|."""
    tt = nodes(n_theta)
    errs = []
    for eps in eps_list:
        fr = frame_from_offset(curve, tstar, eps, side)
        c = inner_coeffs(fr.kappa, fr.speed, float(eps), side=side)
        errs.append(float(np.abs(k_residual(tt, fr, curve, c)).max()))
    return np.asarray(errs)


def circle_oracle_field(a=1.0, N=128, nr=100, ntheta=200):
    """Closed-form quadrature-error field for unit density on a circle,
    on a polar grid biased toward the boundary; exact value -1."""
    from .circle_oracle import circle_error_mu1

    r = a * (1.0 - np.geomspace(1e-6, 1.0, nr))[::-1]
    th = np.linspace(0.0, 2 * np.pi, ntheta, endpoint=False)
    R, TH = np.meshgrid(r, th, indexing="ij")
    E = circle_error_mu1(R.ravel(), TH.ravel(), a, N)
    return ErrorField(
        x=(R * np.cos(TH)).ravel(),
        y=(R * np.sin(TH)).ravel(),
        tstar=TH.ravel(),
        eps=(a - R.ravel()) / a,
        method=np.full(R.size, "circle-oracle", dtype=object),
        value=-1.0 + E,
        exact=np.full(R.size, -1.0),
    )

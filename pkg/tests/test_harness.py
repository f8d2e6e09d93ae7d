import numpy as np
import pytest

from bie2d.circle_oracle import circle_error_mu1
from bie2d.closeeval import DEFAULT_THRESHOLD
from bie2d.geometry import BoundaryCurve
from bie2d.harness import (
    CSV_HEADER,
    ConfigError,
    ErrorField,
    ExperimentConfig,
    body_fitted_grid,
    build_data,
    cartesian_grid,
    circle_oracle_field,
    fit_slope,
    kernel_slope_data,
    load_config,
    run_experiment,
    solve_config,
)
from oracles import lattice_points_in_circle, winding_inside

STAR = {"kind": "star", "c0": 1.55, "c1": 0.4, "k": 5}


def base_cfg(**over):
    d = dict(
        curve={"kind": "circle", "a": 1.0},
        problem="interior-dirichlet",
        data={"kind": "coefficients", "const": 0.0, "cos": [1.0]},
        N=32,
        methods=["naive"],
        grid={"kind": "ray", "tstar": 0.3, "eps": [0.1, 0.2]},
    )
    d.update(over)
    return d


# ------------------------------------------------------------------- grids

def test_body_fitted_grid_circle_layout():
    curve = BoundaryCurve.circle(1.0)
    pts, tstar, eps, depth = body_fitted_grid(curve, 16, 4)
    assert pts.shape == (64, 2)
    assert np.allclose(np.unique(depth), [0.25, 0.5, 0.75, 1.0], atol=1e-14)
    # kappa = 1 on the unit circle, so eps equals the physical depth
    assert np.allclose(eps, depth)
    assert np.allclose(tstar[:4], 0.0)  # node-major flattening
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert np.allclose(r, 1.0 - depth, atol=1e-13)


def test_body_fitted_grid_sides():
    curve = BoundaryCurve.star(**{k: STAR[k] for k in ("c0", "c1", "k")})
    pts_i, _, eps_i, depth_i = body_fitted_grid(curve, 32, 3, side="interior")
    assert winding_inside(curve, pts_i).all()
    pts_e, _, _, _ = body_fitted_grid(curve, 32, 3, side="exterior")
    assert not winding_inside(curve, pts_e).any()
    # depths reach exactly the curvature length scale
    assert abs(depth_i.max() - 1.0 / curve.kappa_max()) < 1e-14
    assert np.allclose(eps_i, np.abs(curve.frame(np.repeat(curve.nodes(32), 3)).kappa) * depth_i)
    with pytest.raises(ValueError):
        body_fitted_grid(curve, 16, 1)


def test_cartesian_grid_circle_count():
    # strict-interior lattice enumeration: 9 points of spacing 0.5 in
    # the unit disk (the 4 boundary lattice points are excluded)
    curve = BoundaryCurve.circle(1.0)
    pts = cartesian_grid(curve, 0.5)
    oracle = lattice_points_in_circle(1.0, 0.5)
    assert len(pts) == len(oracle) == 9
    assert set(map(tuple, np.round(pts, 12))) == set(map(tuple, np.round(oracle, 12)))


def test_cartesian_grid_exterior():
    # pad = 1/kappa_max ~ 1, box ~ [-2, 2]^2: lattice of spacing 0.6
    # has 7 x 7 = 49 points there, 9 of them strictly inside the disk
    curve = BoundaryCurve.circle(1.0)
    pts = cartesian_grid(curve, 0.6, mode="exterior")
    assert len(pts) == 49 - 9
    assert not curve.contains(pts).any()
    assert np.all(np.abs(np.hypot(pts[:, 0], pts[:, 1]) - 1.0) > 1e-12)
    assert np.abs(pts).max() <= 2.0 + 1e-12
    with pytest.raises(ValueError):
        cartesian_grid(curve, 0.0)


# ------------------------------------------------------------------ configs

def test_experiment_config_accepts_curve_dict():
    cfg = ExperimentConfig(**base_cfg())
    assert isinstance(cfg.curve, BoundaryCurve)
    assert cfg.curve.kind == "circle"
    assert cfg.threshold == DEFAULT_THRESHOLD


@pytest.mark.parametrize(
    "over",
    [
        dict(problem="mixed"),
        dict(N=33),
        dict(N=4),
        dict(methods=[]),
        dict(methods=["magic"]),
        dict(threshold=0.0),
        dict(grid={"kind": "hexagonal"}),
        dict(grid={"kind": "body-fitted"}),
        dict(grid={"kind": "cartesian"}),
        dict(grid={"kind": "ray", "tstar": 0.1, "eps": []}),
        dict(grid={"kind": "ray", "tstar": 0.1}),
        dict(curve={"kind": "ellipse"}),
        dict(problem="exterior-neumann", methods=["subtraction-naive"]),
        dict(problem="exterior-neumann", methods=["subtraction-asymptotic"]),
    ],
)
def test_experiment_config_rejects(over):
    with pytest.raises(ConfigError):
        ExperimentConfig(**base_cfg(**over))


def test_load_config(tmp_path):
    p = tmp_path / "exp.toml"
    p.write_text(
        'problem = "interior-dirichlet"\n'
        "N = 64\n"
        'methods = ["naive", "auto"]\n'
        "[curve]\n"
        'kind = "star"\nc0 = 1.55\nc1 = 0.4\nk = 5\n'
        "[data]\n"
        'kind = "log-source"\nx0 = [1.85, 1.65]\n'
        "[grid]\n"
        'kind = "ray"\ntstar = 0.3\neps = [0.1]\n'
    )
    cfg = load_config(p)
    assert cfg.curve.kind == "star"
    assert cfg.N == 64
    assert cfg.methods == ["naive", "auto"]
    assert cfg.threshold == DEFAULT_THRESHOLD
    assert cfg.out is None


def test_load_config_defaults(tmp_path):
    p = tmp_path / "exp.toml"
    p.write_text(
        "N = 16\n"
        '[curve]\nkind = "circle"\na = 1.0\n'
        '[data]\nkind = "coefficients"\ncos = [1.0]\n'
        '[grid]\nkind = "ray"\ntstar = 0.0\neps = [0.1]\n'
    )
    cfg = load_config(p)
    assert cfg.problem == "interior-dirichlet"
    assert cfg.methods == ["auto"]


def test_load_config_errors(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("N = [unclosed\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    missing = tmp_path / "missing.toml"
    missing.write_text('[curve]\nkind = "circle"\n')
    with pytest.raises(ConfigError):
        load_config(missing)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "does-not-exist.toml")


# --------------------------------------------------------------- data specs

@pytest.mark.parametrize(
    "over",
    [
        # log-source point must lie outside the curve
        dict(curve=STAR, data={"kind": "log-source", "x0": [0.1, 0.1]}),
        # inverse-point is exterior-only data
        dict(data={"kind": "inverse-point", "x0": [0.1, 0.1]}),
        # and its source must lie inside
        dict(
            problem="exterior-neumann",
            data={"kind": "inverse-point", "x0": [3.0, 3.0]},
        ),
        # coefficient data needs a circle
        dict(curve=STAR, data={"kind": "coefficients", "cos": [1.0]}),
        # exterior Neumann coefficient data must have zero mean
        dict(
            problem="exterior-neumann",
            data={"kind": "coefficients", "const": 1.0, "cos": [1.0]},
        ),
        # unit density is an interior mode
        dict(problem="exterior-neumann", data={"kind": "unit-density"}),
        dict(data={"kind": "mystery"}),
    ],
)
def test_build_data_rejects(over):
    with pytest.raises(ConfigError):
        build_data(ExperimentConfig(**base_cfg(**over)))


def test_unit_density_config():
    cfg = ExperimentConfig(**base_cfg(curve=STAR, data={"kind": "unit-density"}))
    sol, data = solve_config(cfg)
    assert np.array_equal(sol.density, np.ones(cfg.N))
    assert np.allclose(data.exact(np.zeros((3, 2))), -1.0)


def test_log_source_data_on_boundary_matches_exact():
    cfg = ExperimentConfig(
        **base_cfg(curve=STAR, data={"kind": "log-source", "x0": [1.85, 1.65]})
    )
    data = build_data(cfg)
    t = np.linspace(0, 2 * np.pi, 7)
    pts = cfg.curve.point(t)
    assert np.allclose(data.boundary(t), data.exact(pts), atol=1e-15)


# -------------------------------------------------------------- error field

def test_error_field_stats_and_mask():
    f = ErrorField(
        x=np.array([0.0, 1.0, 2.0]),
        y=np.zeros(3),
        tstar=np.zeros(3),
        eps=np.array([0.1, 0.2, 0.3]),
        method=np.array(["a", "b", "a"], dtype=object),
        value=np.array([1.0, 2.0, 5.0]),
        exact=np.array([1.5, 1.0, 1.0]),
    )
    assert np.allclose(f.abs_error, [0.5, 1.0, 4.0])
    assert f.linf() == 4.0
    assert f.linf("a") == 4.0
    assert f.linf("b") == 1.0
    assert abs(f.l2("a") - np.sqrt((0.25 + 16.0) / 2)) < 1e-15
    assert f.mask("a").sum() == 2


def test_csv_round_trip_and_determinism(tmp_path):
    field = circle_oracle_field(nr=4, ntheta=5)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    field.write_csv(p1)
    field.write_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + len(field.x)
    row = lines[1].split(",")
    assert len(row) == 8
    # %.17g round-trips doubles exactly
    assert float(row[0]) == field.x[0]
    assert float(row[5]) == field.value[0]
    assert row[4] == "circle-oracle"


def test_circle_oracle_field_matches_closed_form():
    field = circle_oracle_field(a=2.0, N=32, nr=6, ntheta=7)
    r = np.hypot(field.x, field.y)
    want = circle_error_mu1(r, field.tstar, 2.0, 32)
    assert np.allclose(field.value + 1.0, want, atol=1e-13)
    assert np.allclose(field.exact, -1.0)
    assert np.allclose(field.eps, (2.0 - r) / 2.0, atol=1e-14)


# -------------------------------------------------------------- experiments

def test_ray_experiment_circle_asymptotic_wins():
    cfg = ExperimentConfig(
        **base_cfg(
            data={"kind": "coefficients", "const": 0.5, "cos": [1.0]},
            methods=["naive", "asymptotic"],
            grid={"kind": "ray", "tstar": 0.3, "eps": [0.05, 0.2]},
        )
    )
    f = run_experiment(cfg)
    assert len(f.x) == 4  # 2 methods x 2 eps
    assert f.linf("naive") > 1e-3
    assert f.linf("asymptotic") < 1e-12


def test_body_fitted_experiment_star_all_methods():
    cfg = ExperimentConfig(
        **base_cfg(
            curve=STAR,
            data={"kind": "log-source", "x0": [1.85, 1.65]},
            N=64,
            methods=["naive", "asymptotic", "subtraction-naive",
                     "subtraction-asymptotic", "auto"],
            grid={"kind": "body-fitted", "n_normal": 3},
        )
    )
    f = run_experiment(cfg)
    assert len(f.x) == 5 * 64 * 3
    assert np.isfinite(f.value).all()
    assert f.linf("asymptotic") < 0.05 * f.linf("naive")
    assert f.linf("subtraction-asymptotic") < f.linf("naive")
    assert f.linf("auto") <= f.linf("naive")


def test_cartesian_experiment_auto_dispatch():
    cfg = ExperimentConfig(
        **base_cfg(
            data={"kind": "coefficients", "const": 0.5, "cos": [1.0]},
            N=64,
            methods=["naive", "auto"],
            grid={"kind": "cartesian", "h": 0.1},
        )
    )
    f = run_experiment(cfg)
    # auto must fix the boundary layer that defeats naive
    assert f.linf("naive") > 1e-2
    assert f.linf("auto") < 1e-6
    assert (f.mask("naive").sum() == f.mask("auto").sum())


def test_exterior_ray_experiment():
    cfg = ExperimentConfig(
        **base_cfg(
            curve=STAR,
            problem="exterior-neumann",
            data={"kind": "inverse-point", "x0": [0.1, 0.4]},
            N=128,
            methods=["naive", "asymptotic"],
            grid={"kind": "ray", "tstar": 3.0, "eps": [0.02, 0.1]},
        )
    )
    f = run_experiment(cfg)
    assert f.linf("asymptotic") < 1e-3
    assert f.linf("asymptotic") < f.linf("naive")


# -------------------------------------------------------------------- slope

def test_fit_slope_anchors():
    eps = np.geomspace(1e-3, 1e-1, 7)
    assert abs(fit_slope(eps, 3.0 * eps) - 1.0) < 1e-12
    assert abs(fit_slope(eps, 0.5 * eps**2) - 2.0) < 1e-12
    with pytest.raises(ValueError):
        fit_slope(eps[:2], 3.0 * eps[:2])
    with pytest.raises(ValueError):
        fit_slope(eps, 0.0 * eps)
    with pytest.raises(ValueError):
        fit_slope(-eps, 3.0 * eps)


def test_kernel_slope_data_decays_linearly():
    curve = BoundaryCurve.star(1.0, 0.3, 5)
    eps = np.array([1e-3, 1e-2, 1e-1])
    errs = kernel_slope_data(curve, np.pi, eps)
    assert np.all(np.diff(errs) > 0)
    assert 0.7 < fit_slope(eps, errs) < 1.5

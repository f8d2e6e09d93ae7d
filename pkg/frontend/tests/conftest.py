import numpy as np
import pytest

HEADER = "x,y,tstar,eps,method,value,exact,abs_error"


def write_csv(path, rows):
    lines = [HEADER]
    for x, y, tstar, eps, method, value, exact, abs_error in rows:
        lines.append(
            "%.17g,%.17g,%.17g,%.17g,%s,%.17g,%.17g,%.17g"
            % (x, y, tstar, eps, method, value, exact, abs_error)
        )
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def ring_csv(tmp_path):
    """Scattered annulus field shaped like the circle quadrature-error
    map: error blows up toward the boundary ring."""
    rows = []
    for r in np.linspace(0.85, 0.999, 12):
        e = r**64 / (1 - r**64 + 1e-3)
        for t in np.linspace(0, 2 * np.pi, 40, endpoint=False):
            rows.append(
                (r * np.cos(t), r * np.sin(t), t, 1 - r, "circle-oracle",
                 -1 + e, -1.0, e)
            )
    return write_csv(tmp_path / "ring.csv", rows)


@pytest.fixture
def ray_csv(tmp_path):
    """Two-method error-vs-eps ray."""
    rows = []
    for eps in np.geomspace(1e-4, 0.3, 9):
        rows.append((1 - eps, 0.0, 0.0, eps, "naive", -1 + 0.2, -1.0, 0.2))
        rows.append((1 - eps, 0.0, 0.0, eps, "asymptotic",
                     -1 + 1e-5 * eps, -1.0, 1e-5 * eps))
    return write_csv(tmp_path / "ray.csv", rows)


@pytest.fixture
def slope_csv(tmp_path):
    """Single-method kernel-error decay, exact power law err = 0.7 eps^1.2."""
    rows = []
    for eps in (1e-4, 1e-3, 1e-2, 1e-1):
        rows.append((0.0, 0.0, np.pi, eps, "kernel-expansion",
                     0.0, 0.0, 0.7 * eps**1.2))
    return write_csv(tmp_path / "slope.csv", rows)

"""Figure rendering: log10-error contour maps, per-ray error curves,
and slope fits, all from the same CSV schema."""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fields import read_field

KINDS = ("contour", "ray", "slope")


@dataclass
class PlotSpec:
    path: str
    kind: str
    out: str
    vmin: float = -16.0  # log10 color-scale bounds
    vmax: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError("unknown plot kind %r" % self.kind)
        if not self.vmin < self.vmax:
            raise ValueError("need vmin < vmax")


def _log_err(field, spec):
    return np.log10(np.clip(field.abs_error, 10.0**spec.vmin, 10.0**spec.vmax))


def _contour(field, spec):
    methods = field.methods()
    fig, axes = plt.subplots(
        1, len(methods), figsize=(5.2 * len(methods), 4.6), squeeze=False
    )
    levels = np.linspace(spec.vmin, spec.vmax, 35)
    loge = _log_err(field, spec)
    for ax, m in zip(axes[0], methods):
        sel = field.mask(m)
        tc = ax.tricontourf(
            field.x[sel], field.y[sel], loge[sel], levels=levels, cmap="viridis"
        )
        ax.set_aspect("equal")
        ax.set_title(m)
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        fig.colorbar(tc, ax=ax, label="log10 |error|")
    return fig


def _ray(field, spec):
    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    floor = 10.0**spec.vmin
    for m in field.methods():
        sel = field.mask(m)
        order = np.argsort(field.eps[sel])
        ax.loglog(
            field.eps[sel][order],
            np.maximum(field.abs_error[sel][order], floor),
            "o-",
            label=m,
        )
    ax.set_xlabel("eps")
    ax.set_ylabel("|error|")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return fig


def _slope(field, spec):
    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    for m in field.methods():
        sel = field.mask(m) & (field.abs_error > 0) & (field.eps > 0)
        eps, err = field.eps[sel], field.abs_error[sel]
        ax.loglog(eps, err, "o", label=m)
        if sel.sum() >= 2:
            p, c = np.polyfit(np.log10(eps), np.log10(err), 1)
            xs = np.geomspace(eps.min(), eps.max(), 50)
            ax.loglog(xs, 10.0**c * xs**p, "--", label="fit p = %.3f" % p)
    ax.set_xlabel("eps")
    ax.set_ylabel("max |kernel error|")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return fig


_RENDERERS = {"contour": _contour, "ray": _ray, "slope": _slope}


def build_figure(field, spec):
    return _RENDERERS[spec.kind](field, spec)


def render(spec):
    """Read spec.path, draw, and write spec.out. Nothing is written
    unless the input parses."""
    field = read_field(spec.path)
    fig = build_figure(field, spec)
    try:
        fig.savefig(spec.out, dpi=150, metadata={"Software": "bieplot"})
    finally:
        plt.close(fig)
    return spec.out

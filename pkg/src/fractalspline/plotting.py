"""Curve figures rendered with matplotlib, byte-stable for identical inputs."""

from __future__ import annotations

import io as _io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle as _RectPatch

import numpy as np

from .constraints import AboveLine, BelowLine, Constraint, Positivity, Rectangle
from .io import atomic_write_bytes
from .model import FifModel, SampleSet

_RC = {
    "svg.hashsalt": "fractalspline",  # stable glyph/clip ids across runs
    "figure.figsize": (8.0, 6.0),
    "figure.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
}


def _draw_constraint(ax, constraint: Constraint, x_lo: float, x_hi: float) -> None:
    if isinstance(constraint, Positivity):
        ax.axhline(0.0, color="crimson", lw=1.0, ls="--", label="y = 0")
    elif isinstance(constraint, Rectangle):
        ax.add_patch(
            _RectPatch(
                (x_lo, constraint.lower),
                x_hi - x_lo,
                constraint.upper - constraint.lower,
                fill=False,
                edgecolor="crimson",
                ls="--",
                lw=1.0,
                label="bounding band",
            )
        )
    elif isinstance(constraint, (AboveLine, BelowLine)):
        xs = np.array([x_lo, x_hi])
        ax.plot(
            xs,
            constraint.line_values(xs),
            color="crimson",
            lw=1.0,
            ls="--",
            label=f"y = {constraint.slope}x + {constraint.intercept}",
        )


def render_curve_svg(
    model: FifModel,
    samples: SampleSet,
    constraint: Constraint | None = None,
    title: str | None = None,
) -> bytes:
    """Render the sampled curve with knot circles; return SVG bytes."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            ax.plot(samples.x, samples.y, "-", color="steelblue", lw=1.2, label="interpolant")
            ax.plot(
                model.data.knots,
                model.data.values,
                "o",
                mfc="white",
                mec="black",
                ms=6,
                label="data",
            )
            if constraint is not None:
                _draw_constraint(ax, constraint, model.partition.x_first, model.partition.x_last)
            ax.set_xlabel("x")
            ax.set_ylabel("y")
            if title:
                ax.set_title(title)
            ax.legend(loc="best")
            buf = _io.BytesIO()
            fig.savefig(buf, format="svg", metadata={"Date": None})
            return buf.getvalue()
        finally:
            plt.close(fig)


def save_curve_svg(
    path,
    model: FifModel,
    samples: SampleSet,
    constraint: Constraint | None = None,
    title: str | None = None,
) -> None:
    atomic_write_bytes(path, render_curve_svg(model, samples, constraint, title))

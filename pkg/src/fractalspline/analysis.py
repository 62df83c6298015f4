"""Quantitative guarantees: error bounds, empirical margins, tension studies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constraints import Constraint, constraint_margins, constraint_to_dict
from .data import DataSet
from .model import (
    DEFAULT_MAX_POINTS,
    FifModel,
    IfsParams,
    SampleSet,
    build_model,
    eval_affine_points,
    eval_points,
    sample_attractor,
)

MARGIN_TOL = 1e-9  # pass level for empirical constraint margins


@dataclass(frozen=True)
class ErrorBoundInputs:
    """Norm-level summary of a model, feeding the uniform error bound."""

    y_inf: float
    d_inf: float
    u_inf: float
    v_inf: float
    alpha_inf: float
    h_max: float
    span: float
    end_y_max: float
    end_d_max: float
    denom_min: float  # least of u + v/4 over the intervals

    @classmethod
    def from_model(cls, model: FifModel) -> "ErrorBoundInputs":
        y, d = model.data.values, model.data.derivatives
        p = model.params
        return cls(
            y_inf=float(np.max(np.abs(y))),
            d_inf=float(np.max(np.abs(d))),
            u_inf=float(np.max(np.abs(p.u))),
            v_inf=float(np.max(np.abs(p.v))),
            alpha_inf=float(np.max(np.abs(p.alphas))),
            h_max=model.partition.h_max,
            span=model.partition.span,
            end_y_max=max(abs(float(y[0])), abs(float(y[-1]))),
            end_d_max=max(abs(float(d[0])), abs(float(d[-1]))),
            denom_min=float(np.min(p.u + p.v / 4.0)),
        )

    @property
    def data_magnitude(self) -> float:
        """The combined ordinate magnitude entering the bound."""
        return self.y_inf + self.end_y_max


def perturbation_bound(model: FifModel) -> float:
    """Upper bound on the uniform distance to the classical interpolant.

    Zero exactly when every scale is zero; otherwise grows with the largest
    scale magnitude and shrinks with the least denominator level.
    """
    b = ErrorBoundInputs.from_model(model)
    if b.alpha_inf == 0.0:
        return 0.0
    m = b.data_magnitude
    core = b.u_inf * m + 0.25 * (
        (3.0 * b.u_inf + b.v_inf) * m
        + b.u_inf * (b.h_max * b.d_inf + b.span * b.end_d_max)
    )
    return b.alpha_inf / (b.denom_min * (1.0 - b.alpha_inf)) * core


def total_error_bound(
    model: FifModel, third_deriv_norm: float, classical_const: float = 0.0
) -> float:
    """Uniform bound on the distance to a C3 generator of the data.

    The classical half needs the generator's third-derivative norm and a
    mesh-independent constant that this package does not derive; both are
    caller inputs (default constant 0 discards that term).
    """
    if third_deriv_norm < 0.0 or classical_const < 0.0:
        raise ValueError("third_deriv_norm and classical_const must be non-negative")
    classical = 0.5 * third_deriv_norm * model.partition.h_max ** 3 * classical_const
    return classical + perturbation_bound(model)


@dataclass(frozen=True)
class MarginReport:
    """Worst constraint slack over an attractor sample, with its location."""

    constraint: Constraint
    depth: int
    margin: float
    at_x: float

    @property
    def satisfied(self) -> bool:
        return self.margin >= -MARGIN_TOL

    def to_dict(self) -> dict:
        return {
            "constraint": constraint_to_dict(self.constraint),
            "depth": self.depth,
            "margin": self.margin,
            "at_x": self.at_x,
            "satisfied": self.satisfied,
        }


def margin_of_samples(samples: SampleSet, constraint: Constraint) -> MarginReport:
    """Minimum constraint slack over an existing sample set."""
    m = constraint_margins(constraint, samples.x, samples.y)
    j = int(np.argmin(m))
    return MarginReport(
        constraint=constraint,
        depth=samples.depth,
        margin=float(m[j]),
        at_x=float(samples.x[j]),
    )


def empirical_margin(
    model: FifModel,
    constraint: Constraint,
    depth: int,
    max_points: int = DEFAULT_MAX_POINTS,
) -> MarginReport:
    """Minimum constraint slack over the depth-level attractor samples."""
    samples = sample_attractor(model, depth, max_points)
    return margin_of_samples(samples, constraint)


def tension_study(
    data: DataSet,
    alphas,
    u,
    v_values,
    grid_points: int = 256,
    tol: float = 1e-10,
) -> list[float]:
    """Sup-distance to the affine limit for a rising sequence of tensions.

    Each entry applies one tension value uniformly; the distances are taken
    over a fixed grid joined with the knots, so they are grid maxima (lower
    bounds on the true sup-norms). The sequence is non-increasing and tends
    to zero.
    """
    v_values = [float(v) for v in v_values]
    if any(v < 0.0 for v in v_values):
        raise ValueError("tension values must be non-negative")
    if any(b < a for a, b in zip(v_values, v_values[1:])):
        raise ValueError("tension values must be non-decreasing")
    alphas = np.asarray(alphas, dtype=float)
    u = np.asarray(u, dtype=float)
    xs = np.union1d(
        np.linspace(data.knots[0], data.knots[-1], grid_points), data.knots
    )
    base = build_model(data, IfsParams(alphas, u, np.zeros_like(u)))
    affine = eval_affine_points(base, xs, tol)
    out = []
    for v in v_values:
        model = build_model(data, IfsParams(alphas, u, np.full(u.shape, v)))
        out.append(float(np.max(np.abs(eval_points(model, xs, tol) - affine))))
    return out


def tension_csv(v_values, distances) -> str:
    """Render a tension study as ``v,distance`` CSV text."""
    if len(v_values) != len(distances):
        raise ValueError("v_values and distances must have equal lengths")
    lines = ["v,distance"]
    lines += [f"{float(v)!r},{float(t)!r}" for v, t in zip(v_values, distances)]
    return "\n".join(lines) + "\n"

"""Interpolation data: validation, mesh quantities, derivative estimation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DerivativesAlreadyPresent,
    NonFiniteValue,
    NonIncreasingKnots,
    TooFewPoints,
)

MIN_POINTS = 3


def _readonly(a) -> np.ndarray:
    out = np.asarray(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DataSet:
    """Hermite interpolation data over strictly increasing knots.

    ``derivatives`` is ``None`` when slopes have not been supplied;
    estimation never happens implicitly (see :func:`estimate_derivatives_amm`).
    """

    knots: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "knots", _readonly(self.knots))
        object.__setattr__(self, "values", _readonly(self.values))
        if self.derivatives is not None:
            object.__setattr__(self, "derivatives", _readonly(self.derivatives))
        n = self.knots.size
        if n < MIN_POINTS:
            raise TooFewPoints(f"need at least {MIN_POINTS} points, got {n}")
        if self.values.shape != (n,):
            raise NonFiniteValue(f"values has shape {self.values.shape}, expected ({n},)")
        if self.derivatives is not None and self.derivatives.shape != (n,):
            raise NonFiniteValue(
                f"derivatives has shape {self.derivatives.shape}, expected ({n},)"
            )
        for name in ("knots", "values", "derivatives"):
            arr = getattr(self, name)
            if arr is not None and not np.all(np.isfinite(arr)):
                raise NonFiniteValue(f"non-finite entry in {name}")
        if np.any(np.diff(self.knots) <= 0.0):
            raise NonIncreasingKnots("knot abscissae must be strictly increasing")

    @property
    def n(self) -> int:
        return self.knots.size

    @property
    def has_derivatives(self) -> bool:
        return self.derivatives is not None

    def with_derivatives(self, derivatives) -> "DataSet":
        """Return a copy carrying the given slopes (overwrites any present)."""
        return DataSet(self.knots, self.values, np.asarray(derivatives, dtype=float))

    def reflected(self) -> "DataSet":
        """Mirror the data across the x-axis (ordinates and slopes negated)."""
        d = None if self.derivatives is None else -self.derivatives
        return DataSet(self.knots, -self.values, d)


@dataclass(frozen=True)
class Partition:
    """Per-interval mesh quantities derived from a :class:`DataSet`.

    ``a`` and ``b`` are the coefficients of the affine contractions
    ``x -> a[i]*x + b[i]`` taking the whole domain onto interval ``i``;
    ``slopes`` are the difference quotients of the ordinates.
    """

    widths: np.ndarray
    a: np.ndarray
    b: np.ndarray
    slopes: np.ndarray
    h_max: float
    x_first: float
    x_last: float

    @property
    def span(self) -> float:
        return self.x_last - self.x_first

    @property
    def n_intervals(self) -> int:
        return self.widths.size


def validate_dataset(points: Iterable[Sequence[float]]) -> DataSet:
    """Build a :class:`DataSet` from ``(x, y)`` or ``(x, y, d)`` rows.

    The derivative column is kept only when every row carries one; with any
    slope missing the whole column is marked absent.

    Raises
    ------
    TooFewPoints, NonIncreasingKnots, NonFiniteValue
    """
    rows = [tuple(float(c) for c in row) for row in points]
    if len(rows) < MIN_POINTS:
        raise TooFewPoints(f"need at least {MIN_POINTS} points, got {len(rows)}")
    widths = {len(r) for r in rows}
    if not widths <= {2, 3}:
        raise NonFiniteValue(f"rows must have 2 or 3 columns, got lengths {sorted(widths)}")
    xs = np.array([r[0] for r in rows])
    ys = np.array([r[1] for r in rows])
    ds = np.array([r[2] for r in rows]) if widths == {3} else None
    return DataSet(xs, ys, ds)


def build_partition(data: DataSet) -> Partition:
    """Compute interval widths, affine map coefficients, and slopes."""
    x = data.knots
    span = x[-1] - x[0]
    widths = np.diff(x)
    a = widths / span
    b = (x[-1] * x[:-1] - x[0] * x[1:]) / span
    slopes = np.diff(data.values) / widths
    return Partition(
        widths=_readonly(widths),
        a=_readonly(a),
        b=_readonly(b),
        slopes=_readonly(slopes),
        h_max=float(widths.max()),
        x_first=float(x[0]),
        x_last=float(x[-1]),
    )


def estimate_derivatives_amm(data: DataSet) -> np.ndarray:
    """Estimate knot slopes by the three-point weighted arithmetic mean.

    Interior knots get the width-weighted mean of the adjacent difference
    quotients; the endpoints are filled by the matching quadratic
    extrapolation. Affine data reproduces its slope exactly.

    Raises
    ------
    DerivativesAlreadyPresent
        The data already carries slopes; overwrite explicitly via
        ``data.with_derivatives`` if that is intended.
    """
    if data.has_derivatives:
        raise DerivativesAlreadyPresent(
            "data set already has derivatives; overwrite explicitly if intended"
        )
    part = build_partition(data)
    h, s = part.widths, part.slopes
    d = np.empty(data.n)
    d[1:-1] = (h[1:] * s[:-1] + h[:-1] * s[1:]) / (h[:-1] + h[1:])
    d[0] = s[0] + (s[0] - s[1]) * h[0] / (h[0] + h[1])
    d[-1] = s[-1] + (s[-1] - s[-2]) * h[-1] / (h[-2] + h[-1])
    return d

"""Admissible parameter ranges for shape constraints, and parameter validation.

Each constraint family yields, per interval, an admissible range for the
vertical scale and a lower threshold for the tension parameter ``v`` as a
function of the chosen scale and ``u``. All the ratio bounds are evaluated
from their primitive linear inequalities so that vanishing denominators
(e.g. a rectangle edge touching an end ordinate) degrade to "no bound"
instead of dividing by zero. The conditions are sufficient only; a sharper
one-sided check for the positivity and line families goes through
:func:`cubic_nonneg_oracle`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .data import DataSet, build_partition
from .errors import (
    AlphaOnBoundary,
    DataNotAboveLine,
    DataNotBelowLine,
    DataOutsideRectangle,
    MissingDerivatives,
    NonPositiveData,
)
from .model import DEFAULT_KAPPA, FifModel, IfsParams, build_model

DEN_EPS = 1e-12      # denominator magnitude below which a ratio is degenerate
BOUNDARY_SLACK = 1e-9  # relative slack around open scale bounds

_INF = math.inf


# ---- constraint families ---------------------------------------------------------

@dataclass(frozen=True)
class Positivity:
    """Graph stays non-negative (requires positive data)."""


@dataclass(frozen=True)
class Rectangle:
    """Graph stays inside the horizontal band [lower, upper]."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"need lower < upper, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class AboveLine:
    """Graph stays above the line y = slope*x + intercept."""

    slope: float
    intercept: float

    def line_values(self, x) -> np.ndarray:
        return self.slope * np.asarray(x, dtype=float) + self.intercept


@dataclass(frozen=True)
class BelowLine:
    """Graph stays below the line y = slope*x + intercept."""

    slope: float
    intercept: float

    def line_values(self, x) -> np.ndarray:
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def reflected(self) -> AboveLine:
        return AboveLine(-self.slope, -self.intercept)


Constraint = Positivity | Rectangle | AboveLine | BelowLine


def constraint_margins(constraint: Constraint, x, y) -> np.ndarray:
    """Pointwise slack of the constraint at graph points ``(x, y)``.

    Non-negative everywhere exactly when the constraint holds.
    """
    y = np.asarray(y, dtype=float)
    if isinstance(constraint, Positivity):
        return y
    if isinstance(constraint, Rectangle):
        return np.minimum(y - constraint.lower, constraint.upper - y)
    if isinstance(constraint, AboveLine):
        return y - constraint.line_values(x)
    if isinstance(constraint, BelowLine):
        return constraint.line_values(x) - y
    raise TypeError(f"not a constraint: {constraint!r}")


# ---- primitive inequality helpers -------------------------------------------------
#
# Every scale bound has the primitive form  num - alpha*den >= 0  with num >= 0
# guaranteed by the family's data precondition.

def _upper_candidate(num: float, den: float) -> float:
    if den > DEN_EPS:
        return float(num / den)
    return _INF  # inequality holds for every alpha >= 0


def _lower_candidate(num: float, den: float) -> float:
    if den < -DEN_EPS:
        return float(num / den)
    if num >= -DEN_EPS:
        return -_INF  # holds for every alpha < 0
    return 0.0


def _v_candidate(num: float, den: float, u: float) -> float:
    """Lower bound on v from the primitive  u*num + v*den >= 0."""
    if den > DEN_EPS:
        return float(-u * num / den)
    if u * num >= 0.0:
        return -_INF  # no restriction on v
    return _INF  # unsatisfiable for any v: the scale sits on/over its bound


# ---- bounds report ------------------------------------------------------------------

@dataclass(frozen=True)
class ThresholdResult:
    """Binding lower threshold for ``v`` at a queried scale, with provenance."""

    value: float
    binding: str
    components: dict[str, float]

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.value)


@dataclass(frozen=True)
class BoundsReport:
    """Per-interval admissible scale ranges for one constraint family.

    ``v_threshold`` evaluates the family's tension thresholds at a queried
    scale; pass ``u`` per call or rely on the vector given at construction.
    """

    constraint: Constraint
    data: DataSet
    alpha_lo: np.ndarray
    alpha_hi: np.ndarray
    u: np.ndarray | None = None

    @property
    def n_intervals(self) -> int:
        return self.alpha_lo.size

    def interval(self, i: int) -> tuple[float, float]:
        return float(self.alpha_lo[i]), float(self.alpha_hi[i])

    def v_threshold(self, i: int, alpha: float, u: float | None = None) -> ThresholdResult:
        if u is None:
            if self.u is None:
                raise ValueError("no u supplied at construction; pass one per call")
            u = float(self.u[i])
        comps = _threshold_components(self.constraint, self.data, i, alpha, u)
        return _combine_components(comps)

    def to_dict(self, alphas=None) -> dict:
        out = {
            "constraint": constraint_to_dict(self.constraint),
            "intervals": [],
        }
        for i in range(self.n_intervals):
            rec = {"index": i, "alpha_lo": float(self.alpha_lo[i]), "alpha_hi": float(self.alpha_hi[i])}
            if self.u is not None:
                alpha = 0.0 if alphas is None else float(alphas[i])
                thr = self.v_threshold(i, alpha)
                rec["alpha"] = alpha
                rec["v_min"] = _json_float(thr.value)
                rec["binding"] = thr.binding
                rec["v_components"] = {k: _json_float(c) for k, c in thr.components.items()}
            out["intervals"].append(rec)
        return out


def _json_float(x: float):
    return x if math.isfinite(x) else None


def _combine_components(comps: dict[str, float]) -> ThresholdResult:
    value, binding = 0.0, "zero"
    for label, c in comps.items():
        if c > value:
            value, binding = c, label
    return ThresholdResult(value=value, binding=binding, components=comps)


def constraint_to_dict(constraint: Constraint) -> dict:
    if isinstance(constraint, Positivity):
        return {"kind": "positivity"}
    if isinstance(constraint, Rectangle):
        return {"kind": "rectangle", "lower": constraint.lower, "upper": constraint.upper}
    if isinstance(constraint, AboveLine):
        return {"kind": "above_line", "slope": constraint.slope, "intercept": constraint.intercept}
    if isinstance(constraint, BelowLine):
        return {"kind": "below_line", "slope": constraint.slope, "intercept": constraint.intercept}
    raise TypeError(f"not a constraint: {constraint!r}")


def constraint_from_dict(d: dict) -> Constraint:
    kind = d.get("kind")
    if kind == "positivity":
        return Positivity()
    if kind == "rectangle":
        return Rectangle(float(d["lower"]), float(d["upper"]))
    if kind == "above_line":
        return AboveLine(float(d["slope"]), float(d["intercept"]))
    if kind == "below_line":
        return BelowLine(float(d["slope"]), float(d["intercept"]))
    raise ValueError(f"unknown constraint kind: {kind!r}")


# ---- preconditions ---------------------------------------------------------------------

def _check_positive(data: DataSet) -> None:
    if np.any(data.values <= 0.0):
        raise NonPositiveData("positivity bounds need strictly positive ordinates")


def _check_rectangle(data: DataSet, c: Rectangle) -> None:
    if np.any(data.values < c.lower) or np.any(data.values > c.upper):
        raise DataOutsideRectangle(
            f"ordinates must lie in [{c.lower}, {c.upper}]"
        )


def _line_gaps(data: DataSet, slope: float, intercept: float) -> np.ndarray:
    return data.values - (slope * data.knots + intercept)


def _check_above(data: DataSet, c: AboveLine) -> None:
    if np.any(_line_gaps(data, c.slope, c.intercept) <= 0.0):
        raise DataNotAboveLine("every ordinate must lie strictly above the line")


def _check_below(data: DataSet, c: BelowLine) -> None:
    if np.any(_line_gaps(data, c.slope, c.intercept) >= 0.0):
        raise DataNotBelowLine("every ordinate must lie strictly below the line")


# ---- scale ranges per family -------------------------------------------------------------

def positivity_alpha_bounds(data: DataSet) -> list[tuple[float, float]]:
    """Admissible scale range per interval for a non-negative graph.

    Returns ``[0, cap_i)`` with ``cap_i`` the least of the interval ratio
    and the two end-ordinate ratios.
    """
    _check_positive(data)
    part = build_partition(data)
    y = data.values
    out = []
    for i in range(part.n_intervals):
        cap = min(
            float(part.a[i]),
            _upper_candidate(y[i], y[0]),
            _upper_candidate(y[i + 1], y[-1]),
        )
        out.append((0.0, cap))
    return out


def positivity_v_threshold(data: DataSet, i: int, alpha: float, u: float) -> float:
    """Least admissible tension for interval ``i`` at scale ``alpha``.

    Raises
    ------
    AlphaOnBoundary
        One of the two defining denominators is non-positive or smaller than
        ``1e-12`` in magnitude, i.e. the scale sits on or beyond its cap.
    """
    _require_derivatives(data)
    y = data.values
    den_lo = y[i] - alpha * y[0]
    den_hi = y[i + 1] - alpha * y[-1]
    if alpha < 0.0 or den_lo < DEN_EPS or den_hi < DEN_EPS:
        raise AlphaOnBoundary(
            f"scale {alpha} is outside the admissible positivity range of interval {i}"
        )
    comps = _threshold_components(Positivity(), data, i, alpha, u)
    return _combine_components(comps).value


def positivity_bounds(data: DataSet, u=None) -> BoundsReport:
    """Positivity scale ranges packaged as a :class:`BoundsReport`."""
    ranges = positivity_alpha_bounds(data)
    return _report(Positivity(), data, ranges, u)


def rectangle_bounds(data: DataSet, lower: float, upper: float, u=None) -> BoundsReport:
    """Scale ranges keeping the graph inside ``[lower, upper]``.

    Both signs of scale are admitted: the nonnegative cap and the negative
    floor come from the two sign cases of the containment inequalities. Edge
    ordinates may touch the band; the touching ratios then impose no bound.
    """
    constraint = Rectangle(lower, upper)
    _check_rectangle(data, constraint)
    part = build_partition(data)
    y, c, d = data.values, lower, upper
    ranges = []
    for i in range(part.n_intervals):
        cap = min(
            float(part.a[i]),
            _upper_candidate(y[i] - c, y[0] - c),
            _upper_candidate(y[i + 1] - c, y[-1] - c),
            _upper_candidate(d - y[i], d - y[0]),
            _upper_candidate(d - y[i + 1], d - y[-1]),
        )
        floor = max(
            -float(part.a[i]),
            _lower_candidate(y[i] - c, y[0] - d),
            _lower_candidate(y[i + 1] - c, y[-1] - d),
            _lower_candidate(d - y[i], c - y[0]),
            _lower_candidate(d - y[i + 1], c - y[-1]),
        )
        ranges.append((floor, cap))
    return _report(constraint, data, ranges, u)


def above_line_bounds(data: DataSet, slope: float, intercept: float, u=None) -> BoundsReport:
    """Scale ranges keeping the graph above ``y = slope*x + intercept``."""
    constraint = AboveLine(slope, intercept)
    _check_above(data, constraint)
    part = build_partition(data)
    g = _line_gaps(data, slope, intercept)
    ranges = []
    for i in range(part.n_intervals):
        cap = min(
            float(part.a[i]),
            _upper_candidate(g[i], g[0]),
            _upper_candidate(g[i + 1], g[-1]),
        )
        ranges.append((0.0, cap))
    return _report(constraint, data, ranges, u)


def below_line_bounds(data: DataSet, slope: float, intercept: float, u=None) -> BoundsReport:
    """Scale ranges keeping the graph below the line; mirror reduction.

    Computed on the mirrored data against the mirrored line, which leaves
    every threshold and scale range unchanged by construction.
    """
    constraint = BelowLine(slope, intercept)
    _check_below(data, constraint)
    mirrored = above_line_bounds(data.reflected(), -slope, -intercept, u)
    return BoundsReport(
        constraint=constraint,
        data=data,
        alpha_lo=mirrored.alpha_lo,
        alpha_hi=mirrored.alpha_hi,
        u=mirrored.u,
    )


def _report(constraint, data, ranges, u) -> BoundsReport:
    lo = np.array([r[0] for r in ranges])
    hi = np.array([r[1] for r in ranges])
    uu = None if u is None else np.asarray(u, dtype=float)
    if uu is not None and uu.shape != lo.shape:
        raise ValueError(f"{uu.size} u values for {lo.size} intervals")
    return BoundsReport(constraint=constraint, data=data, alpha_lo=lo, alpha_hi=hi, u=uu)


def _require_derivatives(data: DataSet) -> None:
    if not data.has_derivatives:
        raise MissingDerivatives("tension thresholds need knot derivatives")


# ---- tension threshold components ------------------------------------------------------

def _threshold_components(
    constraint: Constraint, data: DataSet, i: int, alpha: float, u: float
) -> dict[str, float]:
    _require_derivatives(data)
    if isinstance(constraint, Positivity):
        return _band_components(data, i, alpha, u, lower=0.0, upper=None)
    if isinstance(constraint, Rectangle):
        return _band_components(data, i, alpha, u, constraint.lower, constraint.upper)
    if isinstance(constraint, AboveLine):
        return _line_components(data, i, alpha, u, constraint.slope, constraint.intercept)
    if isinstance(constraint, BelowLine):
        return _line_components(
            data.reflected(), i, alpha, u, -constraint.slope, -constraint.intercept
        )
    raise TypeError(f"not a constraint: {constraint!r}")


def _band_components(data, i, alpha, u, lower, upper) -> dict[str, float]:
    """Thresholds for one-sided or two-sided horizontal band containment.

    The inequality behind each label is ``u*(3*D + E) + v*D >= 0`` where D is
    the primitive scale margin of the matching end ordinate and E carries the
    slope data. Nonnegative scales use the band edges directly (v1..v4);
    negative scales couple each edge with the opposite one (v5..v8).
    """
    part = build_partition(data)
    y, d = data.values, data.derivatives
    h = float(part.widths[i])
    span = part.span
    c = lower
    e_lo = h * d[i] - alpha * span * d[0]
    e_hi = -h * d[i + 1] + alpha * span * d[-1]
    comps: dict[str, float] = {}
    if alpha >= 0.0:
        comps["v1"] = _v_candidate(3 * ((y[i] - c) - alpha * (y[0] - c)) + e_lo,
                                   (y[i] - c) - alpha * (y[0] - c), u)
        comps["v2"] = _v_candidate(3 * ((y[i + 1] - c) - alpha * (y[-1] - c)) + e_hi,
                                   (y[i + 1] - c) - alpha * (y[-1] - c), u)
        if upper is not None:
            dd = upper
            comps["v3"] = _v_candidate(3 * ((dd - y[i]) - alpha * (dd - y[0])) - e_lo,
                                       (dd - y[i]) - alpha * (dd - y[0]), u)
            comps["v4"] = _v_candidate(3 * ((dd - y[i + 1]) - alpha * (dd - y[-1])) - e_hi,
                                       (dd - y[i + 1]) - alpha * (dd - y[-1]), u)
    else:
        if upper is None:
            # semi-infinite band: the negative-scale coupling has no finite
            # opposite edge, so no threshold is defined
            comps["v1"] = _INF
            return comps
        dd = upper
        comps["v5"] = _v_candidate(3 * ((y[i] - c) - alpha * (y[0] - dd)) + e_lo,
                                   (y[i] - c) - alpha * (y[0] - dd), u)
        comps["v6"] = _v_candidate(3 * ((y[i + 1] - c) - alpha * (y[-1] - dd)) + e_hi,
                                   (y[i + 1] - c) - alpha * (y[-1] - dd), u)
        comps["v7"] = _v_candidate(3 * ((dd - y[i]) - alpha * (c - y[0])) - e_lo,
                                   (dd - y[i]) - alpha * (c - y[0]), u)
        comps["v8"] = _v_candidate(3 * ((dd - y[i + 1]) - alpha * (c - y[-1])) - e_hi,
                                   (dd - y[i + 1]) - alpha * (c - y[-1]), u)
    return comps


def _line_components(data, i, alpha, u, slope, intercept) -> dict[str, float]:
    """Thresholds v9/v10 for staying above a line (after line subtraction)."""
    part = build_partition(data)
    y, d = data.values, data.derivatives
    t = slope * data.knots + intercept
    g = y - t
    h = float(part.widths[i])
    span = part.span
    num9 = (
        2 * g[i] + (y[i] - t[i + 1]) + h * d[i]
        - alpha * (2 * g[0] + (y[0] - t[-1]) + span * d[0])
    )
    num10 = (
        (y[i + 1] - t[i]) + 2 * g[i + 1] - h * d[i + 1]
        - alpha * ((y[-1] - t[0]) + 2 * g[-1] - span * d[-1])
    )
    return {
        "v9": _v_candidate(num9, g[i] - alpha * g[0], u),
        "v10": _v_candidate(num10, g[i + 1] - alpha * g[-1], u),
    }


# ---- exact nonnegativity test for cubics ---------------------------------------------

def cubic_nonneg_oracle(a3: float, a2: float, a1: float, a0: float) -> bool:
    """True iff ``a3*x^3 + a2*x^2 + a1*x + a0 >= 0`` for every ``x >= 0``.

    Decided by the two-region coefficient criterion: all four coefficients
    nonnegative, or nonnegative end coefficients with nonnegative resultant
    expression ``4*a3*a1^3 + 4*a0*a2^3 + 27*a3^2*a0^2 - 18*a3*a2*a1*a0 -
    a2^2*a1^2``.
    """
    if a3 >= 0.0 and a2 >= 0.0 and a1 >= 0.0 and a0 >= 0.0:
        return True
    if a3 < 0.0 or a0 < 0.0:
        return False
    disc = (
        4.0 * a3 * a1 ** 3
        + 4.0 * a0 * a2 ** 3
        + 27.0 * a3 * a3 * a0 * a0
        - 18.0 * a3 * a2 * a1 * a0
        - a2 * a2 * a1 * a1
    )
    return disc >= 0.0


def _line_shifted_coeffs(model: FifModel, i: int, slope: float, intercept: float):
    """Numerator coefficients of interval ``i`` after subtracting the line.

    The subtraction happens in the shared cubic arrangement obtained by
    degree-elevating the denominator, so the result feeds straight into
    :func:`cubic_nonneg_oracle` (highest order first).
    """
    x = model.data.knots
    al = float(model.params.alphas[i])
    u, v = float(model.params.u[i]), float(model.params.v[i])
    t_lo = slope * x[i] + intercept - al * (slope * x[0] + intercept)
    t_hi = slope * x[i + 1] + intercept - al * (slope * x[-1] + intercept)
    c0, c1, c2, c3 = model.coeffs[i]
    return (
        c3 - u * t_hi,
        c2 - (u * t_lo + (2 * u + v) * t_hi),
        c1 - ((2 * u + v) * t_lo + u * t_hi),
        c0 - u * t_lo,
    )


def _oracle_ok(model: FifModel, i: int, constraint: Constraint) -> bool:
    al = float(model.params.alphas[i])
    if not 0.0 <= al < float(model.partition.a[i]):
        return False
    if isinstance(constraint, Positivity):
        c0, c1, c2, c3 = model.coeffs[i]
        return cubic_nonneg_oracle(c3, c2, c1, c0)
    if isinstance(constraint, AboveLine):
        return cubic_nonneg_oracle(
            *_line_shifted_coeffs(model, i, constraint.slope, constraint.intercept)
        )
    return False


# ---- validation ---------------------------------------------------------------------------

class Status(str, enum.Enum):
    SUFFICIENT = "SATISFIES_SUFFICIENT"
    ORACLE = "SATISFIES_ORACLE"
    BOUNDARY = "BOUNDARY"
    UNPROVEN = "UNPROVEN"


@dataclass(frozen=True)
class IntervalValidation:
    index: int
    status: Status
    binding: str | None
    alpha_lo: float
    alpha_hi: float
    alpha_margin: float | None
    v_margin: float | None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "status": self.status.value,
            "binding_threshold_label": self.binding,
            "alpha_interval": [_json_float(self.alpha_lo), _json_float(self.alpha_hi)],
            "margins": {
                "alpha": _json_float(self.alpha_margin) if self.alpha_margin is not None else None,
                "v": _json_float(self.v_margin) if self.v_margin is not None else None,
            },
        }


@dataclass(frozen=True)
class ValidationReport:
    constraint: Constraint
    intervals: tuple[IntervalValidation, ...]

    @property
    def all_proven(self) -> bool:
        return all(
            r.status in (Status.SUFFICIENT, Status.ORACLE) for r in self.intervals
        )

    def statuses(self) -> list[Status]:
        return [r.status for r in self.intervals]

    def to_dict(self) -> dict:
        return {
            "constraint": constraint_to_dict(self.constraint),
            "all_proven": self.all_proven,
            "intervals": [r.to_dict() for r in self.intervals],
        }


def _near(x: float, edge: float) -> bool:
    return abs(x - edge) <= BOUNDARY_SLACK * max(1.0, abs(edge))


def validate(model: FifModel, constraint: Constraint) -> ValidationReport:
    """Classify each interval's parameters against the constraint family.

    ``SATISFIES_SUFFICIENT`` means the family's scale range and tension
    threshold both hold with slack; ``SATISFIES_ORACLE`` means the thresholds
    fail but the exact cubic nonnegativity test passes (positivity and line
    families only); ``BOUNDARY`` flags a scale within relative slack ``1e-9``
    of its open bound. ``UNPROVEN`` is not a violation claim: the conditions
    are one-sided.
    """
    if isinstance(constraint, BelowLine):
        mirrored = build_model(model.data.reflected(), model.params)
        inner = validate(mirrored, constraint.reflected())
        return ValidationReport(constraint=constraint, intervals=inner.intervals)

    data = model.data
    try:
        if isinstance(constraint, Positivity):
            report = positivity_bounds(data, model.params.u)
        elif isinstance(constraint, Rectangle):
            report = rectangle_bounds(data, constraint.lower, constraint.upper, model.params.u)
        elif isinstance(constraint, AboveLine):
            report = above_line_bounds(data, constraint.slope, constraint.intercept, model.params.u)
        else:
            raise TypeError(f"not a constraint: {constraint!r}")
    except (NonPositiveData, DataOutsideRectangle, DataNotAboveLine):
        # data itself breaks the family's premise: nothing can be proven
        rows = tuple(
            IntervalValidation(i, Status.UNPROVEN, None, math.nan, math.nan, None, None)
            for i in range(model.n_intervals)
        )
        return ValidationReport(constraint=constraint, intervals=rows)

    rows = []
    for i in range(model.n_intervals):
        lo, hi = report.interval(i)
        al = float(model.params.alphas[i])
        v = float(model.params.v[i])
        rows.append(_validate_interval(model, constraint, report, i, lo, hi, al, v))
    return ValidationReport(constraint=constraint, intervals=tuple(rows))


def _validate_interval(model, constraint, report, i, lo, hi, al, v) -> IntervalValidation:
    two_sided = isinstance(constraint, Rectangle)
    alpha_margin = min(hi - al, al - lo) if two_sided else hi - al

    if _near(al, hi) or (two_sided and _near(al, lo)):
        return IntervalValidation(i, Status.BOUNDARY, None, lo, hi, alpha_margin, None)

    inside = lo < al < hi if two_sided else lo <= al < hi
    if inside:
        thr = report.v_threshold(i, al)
        if thr.feasible and v >= thr.value:
            return IntervalValidation(
                i, Status.SUFFICIENT, thr.binding, lo, hi, alpha_margin, v - thr.value
            )
        v_margin = v - thr.value if thr.feasible else None
        if _oracle_ok(model, i, constraint):
            return IntervalValidation(
                i, Status.ORACLE, thr.binding, lo, hi, alpha_margin, v_margin
            )
        return IntervalValidation(i, Status.UNPROVEN, thr.binding, lo, hi, alpha_margin, v_margin)

    if _oracle_ok(model, i, constraint):
        return IntervalValidation(i, Status.ORACLE, None, lo, hi, alpha_margin, None)
    return IntervalValidation(i, Status.UNPROVEN, None, lo, hi, alpha_margin, None)


# ---- deterministic parameter selection -------------------------------------------------

@dataclass(frozen=True)
class SelectionPolicy:
    """How :func:`auto_select` places parameters inside the admissible set.

    Scales land at ``rho`` times their cap, ``u`` is one, and each tension
    sits ``sigma`` above its binding threshold.
    """

    rho: float = 0.9
    sigma: float = 0.01
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        if not 0.0 <= self.rho < 1.0:
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        if self.rho > self.kappa:
            raise ValueError(f"rho ({self.rho}) must not exceed kappa ({self.kappa})")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


def auto_select(
    data: DataSet, constraint: Constraint, policy: SelectionPolicy | None = None
) -> IfsParams:
    """Pick parameters that provably satisfy the constraint.

    Raises
    ------
    AlphaOnBoundary
        Some tension threshold is unsatisfiable at the selected scale (a
        degenerate touching corner with adverse slope); the family then admits
        no provable parameters at that scale.
    """
    policy = policy or SelectionPolicy()
    _require_derivatives(data)
    if isinstance(constraint, BelowLine):
        mirrored = auto_select(data.reflected(), constraint.reflected(), policy)
        return mirrored  # thresholds and caps are mirror-invariant
    if isinstance(constraint, Positivity):
        report = positivity_bounds(data)
    elif isinstance(constraint, Rectangle):
        report = rectangle_bounds(data, constraint.lower, constraint.upper)
    elif isinstance(constraint, AboveLine):
        report = above_line_bounds(data, constraint.slope, constraint.intercept)
    else:
        raise TypeError(f"not a constraint: {constraint!r}")

    n = report.n_intervals
    alphas = policy.rho * report.alpha_hi
    u = np.ones(n)
    vs = np.empty(n)
    for i in range(n):
        thr = report.v_threshold(i, float(alphas[i]), 1.0)
        if not thr.feasible:
            raise AlphaOnBoundary(
                f"interval {i}: no tension satisfies the {thr.binding or 'edge'} "
                f"condition at scale {alphas[i]}"
            )
        vs[i] = thr.value + policy.sigma
    return IfsParams(alphas=alphas, u=u, v=vs, kappa=policy.kappa)

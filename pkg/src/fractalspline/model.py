"""Self-referential rational cubic spline models and their evaluation.

A model attaches to each interval an affine contraction of the domain and a
vertical map ``y -> alpha[i]*y + q_i(x)`` whose correction term ``q_i`` is a
cubic-over-quadratic rational in Bernstein form. The fixed point of that
system interpolates the data and its slopes; with all scales zero it
collapses to the classical piecewise rational interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import DataSet, Partition, build_partition, _readonly
from .errors import (
    ContractivityViolation,
    DepthTooLarge,
    MissingDerivatives,
    NegativeV,
    NonPositiveU,
    OutOfDomain,
)

DEFAULT_KAPPA = 0.99
DEFAULT_MAX_POINTS = 1_600_000

_BOUND_GRID = 65  # per-interval grid used for the crude range bounds


@dataclass(frozen=True)
class IfsParams:
    """Per-interval vertical scales and shape parameters.

    ``kappa`` caps the scales relative to the interval ratios: the model
    builder rejects ``|alphas[i]| > kappa * a[i]``. ``u`` must be positive
    and ``v`` non-negative, which keeps every denominator positive.
    """

    alphas: np.ndarray
    u: np.ndarray
    v: np.ndarray
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        object.__setattr__(self, "alphas", _readonly(self.alphas))
        object.__setattr__(self, "u", _readonly(self.u))
        object.__setattr__(self, "v", _readonly(self.v))
        m = self.alphas.size
        if self.u.shape != (m,) or self.v.shape != (m,):
            raise ValueError("alphas, u, v must have equal lengths")
        if not (0.0 <= self.kappa < 1.0):
            raise ValueError(f"kappa must lie in [0, 1), got {self.kappa}")
        if np.any(self.u <= 0.0):
            raise NonPositiveU(f"u must be positive, got {self.u.tolist()}")
        if np.any(self.v < 0.0):
            raise NegativeV(f"v must be non-negative, got {self.v.tolist()}")

    @classmethod
    def classical(cls, n_intervals: int, u=1.0, v=0.0) -> "IfsParams":
        """All-zero scales: the model equals the classical interpolant."""
        ones = np.ones(n_intervals)
        return cls(np.zeros(n_intervals), ones * u, ones * v)


class FifModel:
    """A fully determined interpolation system, immutable after construction.

    Use :func:`build_model`; the constructor assumes validated inputs.
    ``coeffs[i]`` holds the four numerator coefficients of ``q_i`` in the
    (unnormalized) cubic Bernstein arrangement; ``classical_coeffs`` holds
    their scale-free counterparts used by :func:`eval_classical`.
    """

    def __init__(self, data: DataSet, partition: Partition, params: IfsParams):
        self.data = data
        self.partition = partition
        self.params = params
        x, y, d = data.knots, data.values, data.derivatives
        al, u, v = params.alphas, params.u, params.v
        h = partition.widths
        span = partition.span
        tu = 3.0 * u + v
        end_lo = y[:-1] - al * y[0]
        end_hi = y[1:] - al * y[-1]
        c0 = u * end_lo
        c1 = tu * end_lo + u * h * d[:-1] - al * u * span * d[0]
        c2 = tu * end_hi - u * h * d[1:] + al * u * span * d[-1]
        c3 = u * end_hi
        self.coeffs = _readonly(np.column_stack([c0, c1, c2, c3]))
        self.classical_coeffs = _readonly(
            np.column_stack(
                [u * y[:-1], tu * y[:-1] + u * h * d[:-1], tu * y[1:] - u * h * d[1:], u * y[1:]]
            )
        )
        # Bernstein control points: middle coefficients carry no binomial factor
        self._ctrl = _readonly(self.coeffs / np.array([1.0, 3.0, 3.0, 1.0]))
        self._cls_ctrl = _readonly(self.classical_coeffs / np.array([1.0, 3.0, 3.0, 1.0]))
        self._bounds: dict[str, float] = {}

    @property
    def n_intervals(self) -> int:
        return self.partition.n_intervals

    @property
    def scale_max(self) -> float:
        return float(np.max(np.abs(self.params.alphas)))

    def value(self, x, tol: float = 1e-9) -> float:
        return eval_point(self, x, tol)

    def derivative(self, x, tol: float = 1e-9) -> float:
        return eval_derivative_point(self, x, tol)

    # crude range bounds, computed on demand and cached
    def _bound(self, kind: str) -> float:
        if kind not in self._bounds:
            self._bounds[kind] = _compute_bound(self, kind)
        return self._bounds[kind]


def build_model(data: DataSet, params: IfsParams) -> FifModel:
    """Validate parameters against the data and assemble the model.

    Raises
    ------
    MissingDerivatives
        Slopes are required; estimate them explicitly first.
    ContractivityViolation
        Some ``|alphas[i]|`` exceeds ``kappa * a[i]``.
    """
    if not data.has_derivatives:
        raise MissingDerivatives("model construction needs knot derivatives")
    part = build_partition(data)
    if params.alphas.size != part.n_intervals:
        raise ValueError(
            f"{params.alphas.size} scales for {part.n_intervals} intervals"
        )
    cap = params.kappa * part.a
    bad = np.abs(params.alphas) > cap
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ContractivityViolation(
            f"|alphas[{i}]| = {abs(params.alphas[i])} exceeds cap "
            f"kappa*a[{i}] = {cap[i]}"
        )
    return FifModel(data, part, params)


# ---- Bernstein-form evaluation -------------------------------------------------

def _dc_cubic(p0, p1, p2, p3, t):
    # de Casteljau: convex combinations only, stable for t in [0, 1]
    s = 1.0 - t
    q0 = s * p0 + t * p1
    q1 = s * p1 + t * p2
    q2 = s * p2 + t * p3
    r0 = s * q0 + t * q1
    r1 = s * q1 + t * q2
    return s * r0 + t * r1


def _dc_quad(p0, p1, p2, t):
    s = 1.0 - t
    q0 = s * p0 + t * p1
    q1 = s * p1 + t * p2
    return s * q0 + t * q1


def _rational(ctrl, u, v, t):
    """Value of the rational cubic with control rows ``ctrl`` at ``t``."""
    num = _dc_cubic(ctrl[:, 0], ctrl[:, 1], ctrl[:, 2], ctrl[:, 3], t)
    return num / (u + v * t * (1.0 - t))


def _rational_prime(ctrl, u, v, t):
    """d/dt of the rational cubic (no domain scaling)."""
    p = _dc_cubic(ctrl[:, 0], ctrl[:, 1], ctrl[:, 2], ctrl[:, 3], t)
    dp = 3.0 * _dc_quad(
        ctrl[:, 1] - ctrl[:, 0], ctrl[:, 2] - ctrl[:, 1], ctrl[:, 3] - ctrl[:, 2], t
    )
    q = u + v * t * (1.0 - t)
    dq = v * (1.0 - 2.0 * t)
    return (dp * q - p * dq) / (q * q)


def _locate(model: FifModel, xs: np.ndarray) -> np.ndarray:
    x = model.data.knots
    bad = ~np.isfinite(xs) | (xs < x[0]) | (xs > x[-1])
    if np.any(bad):
        raise OutOfDomain(f"x = {xs[bad][0]} outside [{x[0]}, {x[-1]}]")
    # half-open intervals, the last one closed
    return np.minimum(np.searchsorted(x, xs, side="right") - 1, x.size - 2).clip(0)


_ORBIT_SNAP = 1e-9  # absorbs inverse-orbit roundoff so knot-anchored addresses terminate exactly


def _local_t(model: FifModel, idx: np.ndarray, xs: np.ndarray) -> np.ndarray:
    x = model.data.knots
    h = model.partition.widths
    t = np.clip((xs - x[idx]) / h[idx], 0.0, 1.0)
    # The inverse maps expand, so a parameter this close to an interval end is
    # indistinguishable from the end itself; pinning it keeps the rest of the
    # orbit on the exact knot cycle instead of drifting chaotically.
    t[t < _ORBIT_SNAP] = 0.0
    t[t > 1.0 - _ORBIT_SNAP] = 1.0
    return t


def _snap_knots(model: FifModel, xs, out, knot_values) -> None:
    x = model.data.knots
    pos = np.searchsorted(x, xs).clip(0, x.size - 1)
    hit = x[pos] == xs
    out[hit] = knot_values[pos[hit]]


# ---- per-interval correction term ----------------------------------------------

def eval_q(model: FifModel, i: int, theta: float) -> float:
    """Correction term of interval ``i`` at domain parameter ``theta`` in [0, 1]."""
    if not 0.0 <= theta <= 1.0:
        raise OutOfDomain(f"theta = {theta} outside [0, 1]")
    ctrl = model._ctrl[i : i + 1]
    return float(_rational(ctrl, model.params.u[i], model.params.v[i], theta)[0])


def eval_q_derivative(model: FifModel, i: int, theta: float) -> float:
    """d/dx of the correction term ``q_i`` at domain parameter ``theta``."""
    if not 0.0 <= theta <= 1.0:
        raise OutOfDomain(f"theta = {theta} outside [0, 1]")
    ctrl = model._ctrl[i : i + 1]
    dt = _rational_prime(ctrl, model.params.u[i], model.params.v[i], theta)[0]
    return float(dt / model.partition.span)


# ---- classical (non-recursive) interpolant ---------------------------------------

def _classical_values(model: FifModel, xs: np.ndarray) -> np.ndarray:
    idx = _locate(model, xs)
    t = _local_t(model, idx, xs)
    ctrl = model._cls_ctrl[idx]
    return _rational(ctrl, model.params.u[idx], model.params.v[idx], t)


def _classical_derivs(model: FifModel, xs: np.ndarray) -> np.ndarray:
    idx = _locate(model, xs)
    t = _local_t(model, idx, xs)
    ctrl = model._cls_ctrl[idx]
    dt = _rational_prime(ctrl, model.params.u[idx], model.params.v[idx], t)
    return dt / model.partition.widths[idx]


def eval_classical(model: FifModel, x) -> float:
    """Closed-form piecewise rational interpolant (the zero-scale limit)."""
    return float(_classical_values(model, np.asarray([x], dtype=float))[0])


def eval_classical_derivative(model: FifModel, x) -> float:
    return float(_classical_derivs(model, np.asarray([x], dtype=float))[0])


# ---- crude range bounds for the recursion cutoff ---------------------------------

def _bound_grid(model: FifModel) -> np.ndarray:
    x = model.data.knots
    pieces = [np.linspace(x[i], x[i + 1], _BOUND_GRID) for i in range(x.size - 1)]
    return np.unique(np.concatenate(pieces))


def _compute_bound(model: FifModel, kind: str) -> float:
    y = model.data.values
    y_inf = float(np.max(np.abs(y)))
    kap = model.scale_max
    if kind == "value":
        from .analysis import perturbation_bound  # deferred: analysis imports us

        grid = _bound_grid(model)
        c_max = float(np.max(np.abs(_classical_values(model, grid))))
        return c_max + y_inf + perturbation_bound(model) + 1e-12
    if kind == "affine":
        end_inf = max(abs(float(y[0])), abs(float(y[-1])))
        if kap >= 1.0:
            raise ContractivityViolation("scales not contractive")
        return kap * (y_inf + end_inf) / (1.0 - kap) + 1e-12
    # derivative: grid maxima of the classical slope and of the slope of the
    # end-anchored rational that carries the scale coupling, inflated 2x
    part = model.partition
    beta = float(np.max(np.abs(model.params.alphas) / part.a))
    if beta == 0.0:
        return 1e-12
    grid = _bound_grid(model)
    g_cls = float(np.max(np.abs(_classical_derivs(model, grid))))
    u, v = model.params.u, model.params.v
    y0, yn = float(y[0]), float(y[-1])
    d = model.data.derivatives
    span = part.span
    anchor = np.column_stack(
        [
            u * y0,
            (3.0 * u + v) * y0 + u * span * d[0],
            (3.0 * u + v) * yn - u * span * d[-1],
            u * yn,
        ]
    ) / np.array([1.0, 3.0, 3.0, 1.0])
    tt = np.linspace(0.0, 1.0, _BOUND_GRID * 4)
    g_anchor = 0.0
    for i in range(part.n_intervals):
        vals = _rational_prime(np.repeat(anchor[i : i + 1], tt.size, axis=0), u[i], v[i], tt)
        g_anchor = max(g_anchor, float(np.max(np.abs(vals))) / span)
    return 2.0 * beta * (g_cls + g_anchor) / (1.0 - beta) + 1e-9


def _depth_for(tol: float, bound: float, contraction: float) -> int:
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if contraction <= 0.0 or bound <= tol:
        return 1
    return max(1, math.ceil(math.log(bound / tol) / math.log(1.0 / contraction)))


# ---- fixed-point evaluation --------------------------------------------------------

def _eval_values(model: FifModel, xs: np.ndarray, tol: float, snap: bool = True) -> np.ndarray:
    """Values of the self-referential function, each within ``tol``."""
    xs = np.asarray(xs, dtype=float)
    x = model.data.knots
    span = model.partition.span
    al = model.params.alphas
    depth = _depth_for(tol, model._bound("value"), model.scale_max)
    acc = np.zeros_like(xs)
    scale = np.ones_like(xs)
    t = xs.copy()
    for _ in range(depth):
        idx = _locate(model, t)
        loc = _local_t(model, idx, t)
        ctrl = model._ctrl[idx]
        acc += scale * _rational(ctrl, model.params.u[idx], model.params.v[idx], loc)
        scale *= al[idx]
        t = x[0] + loc * span
        if not np.any(scale):
            break
    if np.any(scale):
        acc += scale * _classical_values(model, np.clip(t, x[0], x[-1]))
    if snap:
        _snap_knots(model, xs, acc, model.data.values)
    return acc


def _eval_derivs(model: FifModel, xs: np.ndarray, tol: float, snap: bool = True) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    x = model.data.knots
    part = model.partition
    span = part.span
    al, a = model.params.alphas, part.a
    beta = float(np.max(np.abs(al) / a))
    depth = _depth_for(tol, model._bound("deriv"), beta)
    acc = np.zeros_like(xs)
    scale = np.ones_like(xs)
    t = xs.copy()
    for _ in range(depth):
        idx = _locate(model, t)
        loc = _local_t(model, idx, t)
        ctrl = model._ctrl[idx]
        dt = _rational_prime(ctrl, model.params.u[idx], model.params.v[idx], loc)
        acc += scale * dt / (span * a[idx])
        scale *= al[idx] / a[idx]
        t = x[0] + loc * span
        if not np.any(scale):
            break
    if np.any(scale):
        acc += scale * _classical_derivs(model, np.clip(t, x[0], x[-1]))
    if snap:
        _snap_knots(model, xs, acc, model.data.derivatives)
    return acc


def _eval_affine(model: FifModel, xs: np.ndarray, tol: float) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    x, y = model.data.knots, model.data.values
    span = model.partition.span
    al = model.params.alphas
    end_lo = y[:-1] - al * y[0]
    end_hi = y[1:] - al * y[-1]
    depth = _depth_for(tol, model._bound("affine"), model.scale_max)
    acc = np.zeros_like(xs)
    scale = np.ones_like(xs)
    t = xs.copy()
    for _ in range(depth):
        idx = _locate(model, t)
        loc = _local_t(model, idx, t)
        acc += scale * (end_lo[idx] * (1.0 - loc) + end_hi[idx] * loc)
        scale *= al[idx]
        t = x[0] + loc * span
        if not np.any(scale):
            break
    if np.any(scale):
        acc += scale * np.interp(np.clip(t, x[0], x[-1]), x, y)
    return acc


def eval_point(model: FifModel, x, tol: float = 1e-9) -> float:
    """Value of the self-referential interpolant at ``x``, within ``tol``.

    The recursion unrolls until the accumulated scale product times a
    precomputed range bound drops below ``tol``; the classical interpolant
    seeds the cutoff. Exact knot hits return the knot ordinate directly.
    """
    return float(_eval_values(model, np.asarray([x], dtype=float), tol)[0])


def eval_derivative_point(model: FifModel, x, tol: float = 1e-9) -> float:
    """Slope of the interpolant at ``x``, within ``tol`` of the resolved orbit.

    The slope field of a strongly scale-coupled model is rough (its modulus of
    continuity decays very slowly), so pointwise slopes are meaningful at the
    resolution of the inverse orbit that ``x`` pins down in float arithmetic;
    abscissae of attractor samples resolve exactly. Knot hits return the knot
    slope directly.
    """
    return float(_eval_derivs(model, np.asarray([x], dtype=float), tol)[0])


def eval_affine_fif(model: FifModel, x, tol: float = 1e-9) -> float:
    """Value of the self-referential affine function the model tends to as
    the tension parameters grow without bound."""
    return float(_eval_affine(model, np.asarray([x], dtype=float), tol)[0])


def eval_points(model: FifModel, xs, tol: float = 1e-9) -> np.ndarray:
    """Vectorized :func:`eval_point`."""
    return _eval_values(model, np.asarray(xs, dtype=float), tol)


def eval_derivative_points(model: FifModel, xs, tol: float = 1e-9) -> np.ndarray:
    return _eval_derivs(model, np.asarray(xs, dtype=float), tol)


def eval_affine_points(model: FifModel, xs, tol: float = 1e-9) -> np.ndarray:
    return _eval_affine(model, np.asarray(xs, dtype=float), tol)


# ---- deterministic attractor sampling ------------------------------------------------

@dataclass(frozen=True)
class SampleSet:
    """Exact samples of the interpolant and its slope on the attractor mesh.

    Values carry no truncation error (each point is a finite composition of
    the defining maps applied to exact knot data), hence ``error_bound`` is
    zero up to roundoff.
    """

    x: np.ndarray
    y: np.ndarray
    d: np.ndarray
    depth: int
    error_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", _readonly(self.x))
        object.__setattr__(self, "y", _readonly(self.y))
        object.__setattr__(self, "d", _readonly(self.d))

    @property
    def size(self) -> int:
        return self.x.size


def sample_count(n_points: int, depth: int) -> int:
    """Number of distinct sample abscissae after ``depth`` refinements."""
    return (n_points - 1) ** (depth + 1) + 1


def sample_attractor(
    model: FifModel, depth: int, max_points: int = DEFAULT_MAX_POINTS
) -> SampleSet:
    """Breadth-first refinement of the knot set under the defining maps.

    Every level applies all interval maps to the current samples and merges
    the images in abscissa order; shared endpoints coincide bitwise and are
    kept once, and knot triples are re-pinned to their exact inputs.

    Raises
    ------
    DepthTooLarge
        ``sample_count`` would exceed ``max_points``.
    """
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    n = model.data.n
    if sample_count(n, depth) > max_points:
        raise DepthTooLarge(
            f"depth {depth} needs {sample_count(n, depth)} points, cap is {max_points}"
        )
    x, y, d = model.data.knots, model.data.values, model.data.derivatives
    part = model.partition
    al, u, v, a = model.params.alphas, model.params.u, model.params.v, part.a
    span = part.span
    xs, ys, ds = x.copy(), y.copy(), d.copy()
    for _ in range(depth):
        theta = (xs - x[0]) / span
        s = 1.0 - theta
        xs_new, ys_new, ds_new = [], [], []
        for i in range(n - 1):
            ctrl = np.repeat(model._ctrl[i : i + 1], xs.size, axis=0)
            q = _rational(ctrl, u[i], v[i], theta)
            qp = _rational_prime(ctrl, u[i], v[i], theta) / span
            xs_new.append(x[i] * s + x[i + 1] * theta)
            ys_new.append(al[i] * ys + q)
            ds_new.append((al[i] * ds + qp) / a[i])
        xs = np.concatenate(xs_new)
        ys = np.concatenate(ys_new)
        ds = np.concatenate(ds_new)
        keep = np.concatenate(([True], xs[1:] != xs[:-1]))
        xs, ys, ds = xs[keep], ys[keep], ds[keep]
        _snap_knots(model, xs, ys, y)
        _snap_knots(model, xs, ds, d)
    return SampleSet(xs, ys, ds, depth)

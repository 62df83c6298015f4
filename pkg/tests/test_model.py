import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fractalspline import (
    ContractivityViolation,
    DataSet,
    DepthTooLarge,
    IfsParams,
    MissingDerivatives,
    NegativeV,
    NonPositiveU,
    OutOfDomain,
    build_model,
    eval_affine_fif,
    eval_affine_points,
    eval_classical,
    eval_classical_derivative,
    eval_derivative_point,
    eval_point,
    eval_points,
    eval_q,
    eval_q_derivative,
    sample_attractor,
    sample_count,
)
from fractalspline.model import _eval_derivs, _eval_values

from conftest import make_model, random_model


def fig1b_model(d1):
    return make_model(d1, [0.2, 0.31, 0.23], [0.1] * 3, [0.08, 0.1, 0.1])


def classical_d1(d1):
    return make_model(d1, [0.0, 0.0, 0.0], [0.1] * 3, [0.08, 0.1, 0.1])


class TestBuild:
    def test_zero_scale_endpoint_coeffs(self, d1):
        m = classical_d1(d1)
        assert m.coeffs[0][0] == pytest.approx(0.01, rel=1e-15)   # u1*y1
        assert m.coeffs[0][3] == pytest.approx(0.1, rel=1e-15)    # u1*y2

    def test_fig1b_second_interval_first_coeff(self, d1):
        # u2*(y2 - a2*y1) = 0.1*(1 - 0.031)
        assert fig1b_model(d1).coeffs[1][0] == pytest.approx(0.0969, rel=1e-14)

    def test_contractivity_violation(self, d1):
        with pytest.raises(ContractivityViolation):
            make_model(d1, [0.5, 0.0, 0.0], [0.1] * 3, [0.1] * 3)

    def test_kappa_tightens_cap(self, d1):
        make_model(d1, [0.3, 0.0, 0.0], [0.1] * 3, [0.1] * 3, kappa=0.9)
        with pytest.raises(ContractivityViolation):
            make_model(d1, [0.38, 0.0, 0.0], [0.1] * 3, [0.1] * 3, kappa=0.9)

    def test_bad_shape_parameters(self):
        with pytest.raises(NonPositiveU):
            IfsParams(np.zeros(3), np.array([0.0, 1.0, 1.0]), np.ones(3))
        with pytest.raises(NegativeV):
            IfsParams(np.zeros(3), np.ones(3), np.array([-0.1, 0.0, 0.0]))

    def test_needs_derivatives(self, d1):
        bare = DataSet(d1.knots, d1.values)
        with pytest.raises(MissingDerivatives):
            build_model(bare, IfsParams.classical(3))


class TestCorrectionTerm:
    def test_endpoint_values(self, d1):
        m = fig1b_model(d1)
        y, al = d1.values, m.params.alphas
        for i in range(3):
            assert eval_q(m, i, 0.0) == pytest.approx(y[i] - al[i] * y[0], rel=1e-13)
            assert eval_q(m, i, 1.0) == pytest.approx(y[i + 1] - al[i] * y[-1], rel=1e-13)

    def test_midpoint_closed_form(self, d1):
        m = classical_d1(d1)
        c = m.coeffs[0]
        expected = (c.sum() / 8.0) / (0.1 + 0.08 / 4.0)
        assert eval_q(m, 0, 0.5) == pytest.approx(expected, rel=1e-14)

    def test_derivative_at_zero_closed_form(self, d1):
        m = fig1b_model(d1)
        for i in range(3):
            u, v = m.params.u[i], m.params.v[i]
            c0, c1 = m.coeffs[i][0], m.coeffs[i][1]
            expected = (u * c1 - (3 * u + v) * c0) / (u * u * m.partition.span)
            assert eval_q_derivative(m, i, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_constant_data_zero_derivative(self):
        data = DataSet(np.array([0.0, 1.0, 2.0]), np.full(3, 4.0), np.zeros(3))
        m = build_model(data, IfsParams.classical(2, u=0.7, v=2.0))
        for theta in np.linspace(0.0, 1.0, 11):
            assert eval_q_derivative(m, 0, theta) == pytest.approx(0.0, abs=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10 ** 6), st.floats(0.05, 0.95))
    def test_derivative_matches_finite_difference(self, seed, theta):
        m = random_model(np.random.default_rng(seed))
        i = seed % m.n_intervals
        span = m.partition.span
        dx = 1e-6
        dt = dx / span
        fd = (eval_q(m, i, theta + dt) - eval_q(m, i, theta - dt)) / (2.0 * dx)
        qd = eval_q_derivative(m, i, theta)
        assert abs(qd - fd) <= 1e-6 * max(1.0, abs(qd))

    def test_rejects_theta_outside_unit_interval(self, d1):
        with pytest.raises(OutOfDomain):
            eval_q(fig1b_model(d1), 0, 1.5)


class TestSampling:
    def test_depth_zero_is_knots(self, d1):
        s = sample_attractor(fig1b_model(d1), 0)
        assert s.x.tobytes() == d1.knots.tobytes()
        assert s.y.tobytes() == d1.values.tobytes()
        assert s.d.tobytes() == d1.derivatives.tobytes()

    def test_depth_one_functional_equation(self, d1):
        m = fig1b_model(d1)
        s = sample_attractor(m, 1)
        assert s.size == sample_count(4, 1)
        part = m.partition
        for i in range(3):
            for j, (xj, yj) in enumerate(zip(d1.knots, d1.values)):
                theta = (xj - d1.knots[0]) / part.span
                mapped_x = d1.knots[i] * (1 - theta) + d1.knots[i + 1] * theta
                k = int(np.argmin(np.abs(s.x - mapped_x)))
                expected = m.params.alphas[i] * yj + eval_q(m, i, theta)
                assert s.y[k] == pytest.approx(expected, abs=1e-12)

    def test_knots_present_exactly(self, d1):
        m = fig1b_model(d1)
        s = sample_attractor(m, 5)
        pos = np.searchsorted(s.x, d1.knots)
        assert np.all(s.x[pos] == d1.knots)
        assert np.all(s.y[pos] == d1.values)
        assert np.all(s.d[pos] == d1.derivatives)

    def test_strictly_increasing_abscissae(self, d1):
        s = sample_attractor(fig1b_model(d1), 6)
        assert np.all(np.diff(s.x) > 0.0)
        assert s.size == sample_count(4, 6)

    def test_zero_scale_matches_classical_depth6(self, d1):
        m = classical_d1(d1)
        s = sample_attractor(m, 6)
        reference = np.array([eval_classical(m, x) for x in s.x[:: max(1, s.size // 200)]])
        got = s.y[:: max(1, s.size // 200)]
        assert np.max(np.abs(got - reference)) <= 1e-9

    def test_determinism(self, d1):
        m = fig1b_model(d1)
        s1, s2 = sample_attractor(m, 7), sample_attractor(m, 7)
        assert s1.x.tobytes() == s2.x.tobytes()
        assert s1.y.tobytes() == s2.y.tobytes()
        assert s1.d.tobytes() == s2.d.tobytes()

    def test_depth_cap(self, d1):
        with pytest.raises(DepthTooLarge):
            sample_attractor(fig1b_model(d1), 13)
        with pytest.raises(DepthTooLarge):
            sample_attractor(fig1b_model(d1), 5, max_points=100)


class TestPointEvaluation:
    def test_exact_knots(self, d1):
        m = fig1b_model(d1)
        for x, y, d in zip(d1.knots, d1.values, d1.derivatives):
            assert eval_point(m, x, 1e-9) == y
            assert eval_derivative_point(m, x, 1e-9) == d

    def test_knots_through_raw_recursion(self, d1):
        # non-vacuous: disable the exact-knot shortcut
        m = fig1b_model(d1)
        got = _eval_values(m, d1.knots, 1e-10, snap=False)
        assert np.max(np.abs(got - d1.values)) <= 1e-9
        got_d = _eval_derivs(m, d1.knots, 1e-10, snap=False)
        assert np.max(np.abs(got_d - d1.derivatives)) <= 1e-9

    def test_zero_scale_equals_classical(self, d1):
        m = classical_d1(d1)
        xs = np.linspace(0.0, 1.0, 1001)
        got = eval_points(m, xs, 1e-10)
        ref = np.array([eval_classical(m, x) for x in xs])
        assert np.max(np.abs(got - ref)) <= 1e-10

    def test_matches_attractor_sample(self, d1):
        m = fig1b_model(d1)
        s = sample_attractor(m, 12)
        k = int(np.argmin(np.abs(s.x - 0.3)))
        assert eval_point(m, float(s.x[k]), 1e-8) == pytest.approx(float(s.y[k]), abs=2e-8)

    def test_derivative_matches_attractor_sample(self, d2):
        # query at a depth-8 abscissa (those resolve exactly; the sample sets
        # are nested, so it is also a depth-12 abscissa) and compare against
        # the depth-12 sampled slope there
        m = make_model(d2, [0.17, 0.2, 0.4], [0.1] * 3, [3.8, 0.1, 0.1])
        coarse = sample_attractor(m, 8)
        x = float(coarse.x[int(np.argmin(np.abs(coarse.x - 2.0)))])
        s = sample_attractor(m, 12)
        k = int(np.searchsorted(s.x, x))
        assert s.x[k] == x
        got = eval_derivative_point(m, x, 1e-7)
        assert got == pytest.approx(float(s.d[k]), abs=2e-7)

    def test_zero_scale_derivative_equals_classical(self, d1):
        m = classical_d1(d1)
        xs = np.linspace(0.0, 1.0, 301)
        got = _eval_derivs(m, xs, 1e-10)
        ref = np.array([eval_classical_derivative(m, x) for x in xs])
        assert np.max(np.abs(got - ref)) <= 1e-10

    def test_out_of_domain(self, d1):
        with pytest.raises(OutOfDomain):
            eval_point(fig1b_model(d1), 1.5, 1e-9)

    def test_bad_tolerance(self, d1):
        with pytest.raises(ValueError):
            eval_point(fig1b_model(d1), 0.5, 0.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_self_referential_identity(self, seed):
        # w_i maps graph points to graph points: two evaluation routes agree
        m = random_model(np.random.default_rng(seed))
        x = m.data.knots
        xs = np.linspace(x[0], x[-1], 17)
        theta = (xs - x[0]) / m.partition.span
        vals = _eval_values(m, xs, 1e-12)
        for i in range(m.n_intervals):
            mapped = x[i] * (1 - theta) + x[i + 1] * theta
            lhs = _eval_values(m, mapped, 1e-12, snap=False)
            q = np.array([eval_q(m, i, t) for t in theta])
            rhs = m.params.alphas[i] * vals + q
            assert np.max(np.abs(lhs - rhs)) <= 1e-9


class TestStructuralIdentities:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10 ** 6), st.floats(0.0, 1.0))
    def test_tension_form_of_correction(self, seed, theta):
        # the correction term rewritten around its chord plus a damped cubic
        m = random_model(np.random.default_rng(seed))
        i = seed % m.n_intervals
        data, part, p = m.data, m.partition, m.params
        y, d = data.values, data.derivatives
        al, u, v = p.alphas[i], p.u[i], p.v[i]
        h, a = part.widths[i], part.a[i]
        d_lo = d[i] - al * d[0] / a
        d_hi = d[i + 1] - al * d[-1] / a
        slope = part.slopes[i] - al * (y[-1] - y[0]) / h
        q_den = u + v * theta * (1.0 - theta)
        expected = (
            (y[i] - al * y[0]) * (1 - theta)
            + (y[i + 1] - al * y[-1]) * theta
            + u * h * theta * (1 - theta)
            * ((2 * theta - 1) * slope + (1 - theta) * d_lo - theta * d_hi) / q_den
        )
        assert eval_q(m, i, theta) == pytest.approx(expected, abs=1e-9, rel=1e-9)

    def test_hermite_special_case(self, d1):
        # u = 1, v = 0, zero scales: the classical two-point cubic per interval
        m = make_model(d1, [0.0] * 3, [1.0] * 3, [0.0] * 3)
        part = m.partition
        xs = np.linspace(0.0, 1.0, 501)
        got = eval_points(m, xs, 1e-12)
        idx = np.minimum(np.searchsorted(d1.knots, xs, side="right") - 1, 2).clip(0)
        t = (xs - d1.knots[idx]) / part.widths[idx]
        h = part.widths[idx]
        y0, y1 = d1.values[idx], d1.values[idx + 1]
        d0, dd1 = d1.derivatives[idx], d1.derivatives[idx + 1]
        hermite = (
            (2 * t ** 3 - 3 * t ** 2 + 1) * y0
            + (t ** 3 - 2 * t ** 2 + t) * h * d0
            + (-2 * t ** 3 + 3 * t ** 2) * y1
            + (t ** 3 - t ** 2) * h * dd1
        )
        assert np.max(np.abs(got - hermite)) <= 1e-12


class TestAffineLimit:
    def test_zero_scale_is_piecewise_linear(self, d1):
        m = classical_d1(d1)
        xs = np.linspace(0.0, 1.0, 257)
        got = eval_affine_points(m, xs, 1e-12)
        assert np.max(np.abs(got - np.interp(xs, d1.knots, d1.values))) <= 1e-12

    def test_interpolates_knots(self, d1):
        m = fig1b_model(d1)
        for x, y in zip(d1.knots, d1.values):
            assert eval_affine_fif(m, x, 1e-12) == pytest.approx(y, abs=1e-11)

    def test_frozen_value(self, d1):
        # frozen from an independent 30-level unrolling of the fixed point
        m = fig1b_model(d1)
        assert eval_affine_fif(m, 0.5, 1e-12) == pytest.approx(
            0.9227522091268178, abs=1e-12
        )

    def test_growing_tension_approaches_affine(self, d1):
        alphas, u = [0.2, 0.31, 0.23], [0.1] * 3
        xs = np.linspace(0.0, 1.0, 257)
        dists = []
        for k in range(2, 7):
            m = make_model(d1, alphas, u, [10.0 ** k] * 3)
            diff = eval_points(m, xs, 1e-10) - eval_affine_points(m, xs, 1e-10)
            dists.append(float(np.max(np.abs(diff))))
        assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
        assert dists[-1] < 1e-3


class TestPersistenceContract:
    def test_coeffs_read_only(self, d1):
        m = fig1b_model(d1)
        with pytest.raises(ValueError):
            m.coeffs[0][0] = 1.0

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trdh.prox import (
    BoxedSeparableRegularizer,
    InfeasibleError,
    IproxQuery,
    Norm,
    iprox,
    iprox_l0_scalar,
    iprox_l1_scalar,
    prox_standard,
    solve_boxed,
)


def scalar_obj(x, g, delta, lam, kind):
    pen = lam * (np.abs(x) if kind == "l1" else (x != 0))
    return g * x + 0.5 * delta * x * x + pen


def brute_force(g, delta, lam, lo, hi, kind, step=1e-4):
    """Grid minimum over [lo, hi]; the grid always contains lo, hi and 0 (if feasible)."""
    grid = np.append(np.arange(lo, hi, step), hi)
    if lo <= 0 <= hi:
        grid = np.append(grid, 0.0)
    return scalar_obj(grid, g, delta, lam, kind).min()


SCALAR = {"l0": iprox_l0_scalar, "l1": iprox_l1_scalar}

finite = st.floats(-5, 5, allow_nan=False)
box_end = st.floats(-10, 10, allow_nan=False)


class TestScalarClosedForms:
    @pytest.mark.parametrize("kind", ["l0", "l1"])
    @pytest.mark.parametrize("delta", [-2.0, 0.0, 1.5])
    def test_matches_grid(self, kind, delta):
        rng = np.random.default_rng(1)
        for _ in range(200):
            g = rng.uniform(-5, 5)
            lam = rng.uniform(0, 3)
            lo, hi = np.sort(rng.uniform(-10, 10, 2))
            x = SCALAR[kind](g, delta, lam, lo, hi)
            assert lo <= x <= hi
            assert scalar_obj(x, g, delta, lam, kind) <= brute_force(g, delta, lam, lo, hi, kind) + 1e-8

    def test_hard_threshold(self):
        # delta = 1, no box: keep -g when g^2 / 2 > lam
        assert iprox_l0_scalar(-2.0, 1.0, 1.0, -10, 10) == 2.0
        assert iprox_l0_scalar(-1.0, 1.0, 1.0, -10, 10) == 0.0

    def test_soft_threshold(self):
        assert iprox_l1_scalar(-3.0, 1.0, 1.0, -10, 10) == pytest.approx(2.0)
        assert iprox_l1_scalar(0.5, 1.0, 1.0, -10, 10) == 0.0

    def test_negative_curvature_goes_to_an_end(self):
        x = iprox_l1_scalar(0.1, -1.0, 0.0, -1.0, 2.0)
        assert x == -1.0 or x == 2.0
        assert x == 2.0  # 2 gives 0.2 - 2 < -0.1 - 0.5

    def test_tie_prefers_zero(self):
        # g x + x^2/2 + lam [x != 0] at x = -g equals 0 exactly when lam = g^2 / 2
        assert iprox_l0_scalar(-2.0, 1.0, 2.0, -10, 10) == 0.0

    def test_zero_outside_box(self):
        assert iprox_l0_scalar(5.0, 1.0, 100.0, 1.0, 3.0) == 1.0

    @pytest.mark.parametrize("bad", [dict(g=np.nan), dict(lam=-1.0), dict(lo=2.0, hi=1.0), dict(hi=np.inf)])
    def test_rejects_bad_input(self, bad):
        args = dict(g=1.0, delta=1.0, lam=1.0, lo=-1.0, hi=1.0)
        args.update(bad)
        with pytest.raises(ValueError):
            iprox_l0_scalar(**args)


class TestIprox:
    @settings(max_examples=200, deadline=None)
    @given(g=finite, delta=finite, lam=st.floats(0, 3), a=box_end, b=box_end,
           kind=st.sampled_from(["l0", "l1"]))
    def test_never_worse_than_feasible_candidates(self, g, delta, lam, a, b, kind):
        lo, hi = min(a, b), max(a, b)
        x = SCALAR[kind](g, delta, lam, lo, hi)
        fx = scalar_obj(x, g, delta, lam, kind)
        cands = np.linspace(lo, hi, 101)
        assert lo <= x <= hi
        assert fx <= scalar_obj(cands, g, delta, lam, kind).min() + 1e-9

    def test_vector_matches_scalar(self):
        rng = np.random.default_rng(3)
        n = 50
        g, d = rng.uniform(-5, 5, n), rng.uniform(-5, 5, n)
        lo = rng.uniform(-10, 0, n)
        hi = lo + rng.uniform(0, 10, n)
        for kind in ("l0", "l1"):
            reg = BoxedSeparableRegularizer.unbounded(kind, 0.7, n)
            x = iprox(IproxQuery(g, d, lo, hi), reg)
            ref = [SCALAR[kind](g[i], d[i], 0.7, lo[i], hi[i]) for i in range(n)]
            np.testing.assert_array_equal(x, ref)

    def test_mask_removes_penalty(self):
        reg = BoxedSeparableRegularizer.unbounded("l0", 10.0, 2, mask=[True, False])
        x = iprox(IproxQuery([-1.0, -1.0], [1.0, 1.0], [-5, -5], [5, 5]), reg)
        np.testing.assert_array_equal(x, [0.0, 1.0])

    def test_intersects_regularizer_box(self):
        reg = BoxedSeparableRegularizer(Norm.ONE, 0.0, np.zeros(1), np.full(1, np.inf))
        x = iprox(IproxQuery([1.0], [1.0], [-5.0], [5.0]), reg)
        assert x[0] == 0.0

    def test_empty_intersection(self):
        reg = BoxedSeparableRegularizer(Norm.ONE, 1.0, np.full(1, 2.0), np.full(1, 3.0))
        with pytest.raises(InfeasibleError):
            iprox(IproxQuery([1.0], [1.0], [-1.0], [1.0]), reg)

    def test_query_validation(self):
        with pytest.raises(ValueError):
            IproxQuery([1.0], [1.0], [-np.inf], [1.0])
        with pytest.raises(ValueError):
            IproxQuery([1.0, 2.0], [1.0], [-1.0], [1.0])
        with pytest.raises(ValueError):
            IproxQuery([1.0], [1.0], [1.0], [-1.0])


class TestProxStandard:
    def test_soft_thresholding(self):
        reg = BoxedSeparableRegularizer.unbounded("l1", 1.0, 4)
        q = np.array([-3.0, -0.5, 0.5, 2.0])
        np.testing.assert_allclose(prox_standard(q, 0.5, reg), np.sign(q) * np.maximum(np.abs(q) - 0.5, 0))

    def test_hard_thresholding(self):
        reg = BoxedSeparableRegularizer.unbounded("l0", 1.0, 3)
        q = np.array([-2.0, 1.0, 1.5])
        # keep q_i when q_i^2 / (2 nu) > lam
        np.testing.assert_array_equal(prox_standard(q, 1.0, reg), [-2.0, 0.0, 1.5])

    def test_nonnegative_box(self):
        reg = BoxedSeparableRegularizer(Norm.ONE, 0.1, np.zeros(2), np.full(2, np.inf))
        np.testing.assert_allclose(prox_standard([-1.0, 1.0], 1.0, reg), [0.0, 0.9])

    def test_rejects_nonpositive_nu(self):
        reg = BoxedSeparableRegularizer.unbounded("l1", 1.0, 1)
        with pytest.raises(ValueError):
            prox_standard([1.0], 0.0, reg)


class TestRegularizer:
    def test_count_and_value(self):
        reg = BoxedSeparableRegularizer.unbounded("l0", 0.5, 3)
        assert reg.count([0.0, 1.0, -2.0]) == 2.0
        assert reg.value([0.0, 1.0, -2.0]) == 1.0
        reg1 = BoxedSeparableRegularizer.unbounded("l1", 0.5, 3)
        assert reg1.count([0.0, 1.0, -2.0]) == 3.0

    def test_validation(self):
        with pytest.raises(ValueError):
            BoxedSeparableRegularizer(Norm.ONE, -1.0, np.zeros(1), np.ones(1))
        with pytest.raises(ValueError):
            BoxedSeparableRegularizer(Norm.ONE, 1.0, np.ones(1), np.zeros(1))
        with pytest.raises(ValueError):
            BoxedSeparableRegularizer(Norm.ONE, 1.0, np.zeros(2), np.ones(1))

    def test_solve_boxed_infinite_ends_with_positive_curvature(self):
        x = solve_boxed([-2.0], [1.0], [-np.inf], [np.inf], [0.0], "l1")
        assert x[0] == 2.0

import numpy as np
import pytest

from trdh.lm_qn import SR1_DENOM_TOL, LimitedMemoryOp


def dense_oracle(pairs, kind, n, scale=1.0):
    """Apply the stored pairs one by one to a dense matrix."""
    if kind == "lbfgs" and pairs:
        s, y = pairs[-1]
        scale = y @ y / (s @ y)
    B = scale * np.eye(n)
    for s, y in pairs:
        if kind == "lbfgs":
            Bs = B @ s
            B = B - np.outer(Bs, Bs) / (s @ Bs) + np.outer(y, y) / (s @ y)
        else:
            r = y - B @ s
            if abs(s @ r) <= SR1_DENOM_TOL * np.linalg.norm(s) * np.linalg.norm(r):
                continue
            B = B + np.outer(r, r) / (s @ r)
    return B


def random_pairs(rng, n, count, kind):
    H = rng.standard_normal((n, n))
    H = H + H.T if kind == "lsr1" else H @ H.T + np.eye(n)
    out = []
    for _ in range(count):
        s = rng.standard_normal(n)
        out.append((s, H @ s + 0.01 * rng.standard_normal(n)))
    return out


class TestOracle:
    @pytest.mark.parametrize("kind", ["lsr1", "lbfgs"])
    def test_apply_and_diagonal(self, kind):
        rng = np.random.default_rng(0)
        for trial in range(30):
            n = int(rng.integers(2, 30))
            op = LimitedMemoryOp(n, kind, memory=5)
            for s, y in random_pairs(rng, n, 8, kind):
                op.update(s, y)
            B = dense_oracle(list(op.pairs), kind, n)
            v = rng.standard_normal(n)
            scale = np.abs(B).max()
            np.testing.assert_allclose(op.apply(v), B @ v, rtol=1e-10, atol=1e-10 * scale * np.abs(v).sum())
            np.testing.assert_allclose(op.diagonal(), np.diag(B), rtol=1e-10, atol=1e-10 * scale)
            np.testing.assert_allclose(op.to_dense(), B, rtol=1e-10, atol=1e-10 * scale)

    @pytest.mark.parametrize("kind", ["lsr1", "lbfgs"])
    def test_opnorm(self, kind):
        rng = np.random.default_rng(1)
        op = LimitedMemoryOp(12, kind, memory=5)
        for s, y in random_pairs(rng, 12, 5, kind):
            op.update(s, y)
        exact = np.linalg.norm(op.to_dense(), 2)
        assert op.opnorm() == pytest.approx(exact, rel=1e-10)
        assert op.opnorm_bound() >= exact * (1 - 1e-12)
        assert op.opnorm_power(iters=200) <= exact * (1 + 1e-12)

    def test_diagonal_matches_unit_products(self):
        rng = np.random.default_rng(2)
        op = LimitedMemoryOp(6, "lsr1")
        for s, y in random_pairs(rng, 6, 3, "lsr1"):
            op.update(s, y)
        cols = [op.apply(e)[i] for i, e in enumerate(np.eye(6))]
        np.testing.assert_array_equal(op.diagonal(), cols)


class TestUpdates:
    def test_memory_evicts_oldest(self):
        rng = np.random.default_rng(3)
        op = LimitedMemoryOp(4, "lbfgs", memory=2)
        pairs = random_pairs(rng, 4, 3, "lbfgs")
        for s, y in pairs:
            op.update(s, y)
        assert len(op) == 2
        np.testing.assert_array_equal(op.pairs[0][0], pairs[1][0])

    def test_lbfgs_rejects_negative_curvature(self):
        op = LimitedMemoryOp(2, "lbfgs")
        assert not op.update([1.0, 0.0], [-1.0, 0.0])
        assert len(op) == 0

    def test_lbfgs_secant(self):
        op = LimitedMemoryOp(3, "lbfgs")
        s, y = np.array([1.0, 2.0, 0.0]), np.array([2.0, 1.0, 1.0])
        op.update(s, y)
        np.testing.assert_allclose(op.apply(s), y)

    def test_lsr1_secant_and_skip(self):
        op = LimitedMemoryOp(2, "lsr1")
        assert not op.update([1.0, 0.0], [1.0, 0.0])  # already satisfied, r = 0
        assert op.update([1.0, 0.0], [3.0, 1.0])
        np.testing.assert_allclose(op.apply([1.0, 0.0]), [3.0, 1.0])

    def test_non_finite_pair_ignored(self):
        op = LimitedMemoryOp(2, "lsr1")
        assert not op.update([np.nan, 0.0], [1.0, 0.0])

    def test_copy_and_reset(self):
        op = LimitedMemoryOp(2, "lbfgs")
        op.update([1.0, 0.0], [2.0, 0.0])
        other = op.copy()
        op.reset()
        assert len(op) == 0 and len(other) == 1
        assert op.scale == 1.0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            LimitedMemoryOp(2, memory=0)
        with pytest.raises(ValueError):
            LimitedMemoryOp(2, kind="dfp")
        with pytest.raises(ValueError):
            LimitedMemoryOp(2).update([1.0], [1.0])

import numpy as np
import pytest

from pinvperturb import (
    HypothesisRefusal,
    ShapeMismatchError,
    check_null_inclusion,
    check_range_inclusion,
    check_relative_bound,
    check_stewart_hypotheses,
    estimate_lambda1,
    null_space_basis,
    orthonormal_range_basis,
    principal_angle_gap,
    pseudoinverse,
    reduced_min_modulus,
)
from pinvperturb.generators import (
    GenSpec,
    random_contraction,
    random_operator,
    s_alpha,
)


class TestRangeInclusion:
    def test_self_inclusion(self):
        t = np.array([[1.0, 0.5], [0.0, 0.0]])
        ok, resid = check_range_inclusion(t, t)
        assert ok and resid <= 1e-14

    def test_disjoint_ranges(self):
        ok, resid = check_range_inclusion(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert not ok
        assert resid == pytest.approx(1.0)

    def test_constructed_inclusion(self):
        t = np.array([[1.0, 0.0], [0.0, 0.0]])
        s = np.array([[0.1, 0.2], [0.0, 0.0]])  # R(S) = span(e1) by construction
        ok, _ = check_range_inclusion(t, s)
        assert ok

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            check_range_inclusion(np.eye(2), np.eye(3))

    @pytest.mark.parametrize("seed", range(8))
    def test_routes_agree_on_random_pairs(self, seed):
        # both inclusion routes must give one verdict; a disagreement would
        # raise InvariantViolation inside
        rng = np.random.default_rng(seed)
        t = random_operator(GenSpec(5, 4, 3, 0.4, 1.5, int(rng.integers(2**62))))
        if seed % 2:
            s = pseudoinverse(t).proj_range @ (
                rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))
            ) * 0.1
        else:
            s = (rng.standard_normal((5, 4)) + 1j * rng.standard_normal((5, 4))) * 0.1
        check_range_inclusion(t, s)
        check_null_inclusion(t, s)


class TestNullInclusion:
    def test_injective_is_vacuous(self):
        t = np.array([[1.0], [1.0]])
        ok, resid = check_null_inclusion(t, np.array([[5.0], [-3.0]]))
        assert ok and resid <= 1e-12

    def test_violated(self):
        ok, _ = check_null_inclusion(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert not ok

    def test_shared_null_vector(self):
        ok, _ = check_null_inclusion(np.diag([1.0, 0.0]), np.diag([0.3, 0.0]))
        assert ok


class TestStewartReport:
    def test_zero_perturbation_all_verdicts(self):
        rep = check_stewart_hypotheses(np.diag([2.0, 1.0, 0.0]), np.zeros((3, 3)))
        assert rep.verdict_stewart and rep.verdict_norm_gamma and rep.verdict_relative
        assert rep.norm_TdS == 0.0 and rep.lambda1_min == 0.0
        assert rep.gamma_T == pytest.approx(1.0)

    def test_half_perturbation(self):
        rep = check_stewart_hypotheses(np.diag([1.0, 0.0]), np.diag([0.5, 0.0]))
        assert rep.verdict_stewart
        assert rep.norm_TdS == pytest.approx(0.5)
        assert rep.norm_STd == pytest.approx(0.5)
        assert rep.lambda1_min == pytest.approx(0.5)

    def test_norm_condition_violated(self):
        rep = check_stewart_hypotheses(np.diag([1.0, 0.0]), np.diag([2.0, 0.0]))
        assert not rep.verdict_stewart
        assert rep.norm_TdS == pytest.approx(2.0)
        # inclusions still hold, so the relative verdict survives... norm 2 >= 1
        assert not rep.verdict_relative

    def test_norm_gamma_verdict(self):
        t = np.diag([2.0, 1.0])
        rep = check_stewart_hypotheses(t, 0.4 * np.eye(2))
        assert rep.verdict_norm_gamma  # |S| = 0.4 < 1 = gamma
        rep2 = check_stewart_hypotheses(t, 1.5 * np.eye(2))
        assert not rep2.verdict_norm_gamma

    @pytest.mark.parametrize("seed", range(6))
    def test_stewart_consequences(self, seed):
        # certified pairs must preserve null space, rank, and range
        rng = np.random.default_rng(seed)
        t = random_operator(GenSpec(6, 5, 3, 0.4, 1.6, int(rng.integers(2**62))))
        alpha = float(rng.uniform(0.1, 0.9)) * 2.0 * reduced_min_modulus(t)
        s = s_alpha(t, alpha)
        rep = check_stewart_hypotheses(t, s)
        assert rep.verdict_stewart
        pr_t, pr_sum = pseudoinverse(t), pseudoinverse(t + s)
        assert pr_sum.rank == pr_t.rank
        assert principal_angle_gap(null_space_basis(t), null_space_basis(t + s)) <= 1e-8
        assert principal_angle_gap(
            orthonormal_range_basis(t), orthonormal_range_basis(t + s)
        ) <= 1e-8

    @pytest.mark.parametrize("seed", range(6))
    def test_norm_gamma_consequence(self, seed):
        # gamma can drop by at most |S| when the norm-vs-gamma verdict holds
        rng = np.random.default_rng(100 + seed)
        t = random_operator(GenSpec(5, 5, 3, 0.8, 2.0, int(rng.integers(2**62))))
        s = 0.3 * random_contraction(5, rng) @ t @ pseudoinverse(t).proj_rowspace
        rep = check_stewart_hypotheses(t, s)
        if rep.verdict_norm_gamma:
            gamma_sum = reduced_min_modulus(t + s)
            assert gamma_sum >= rep.gamma_T - rep.norm_S - 1e-10


class TestEstimateLambda1:
    def test_zero(self):
        assert estimate_lambda1(np.diag([1.0, 0.0]), np.zeros((2, 2))) == 0.0

    def test_quarter(self):
        lam = estimate_lambda1(np.diag([1.0, 0.0]), np.diag([0.25, 0.0]))
        assert lam == pytest.approx(0.25)

    def test_null_obstruction(self):
        assert estimate_lambda1(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) is None

    @pytest.mark.parametrize("seed", range(5))
    def test_minimality(self, seed):
        # lambda1* certifies; shrinking it by 0.1% must break on some direction
        rng = np.random.default_rng(seed)
        t = random_operator(GenSpec(6, 4, 3, 0.5, 1.5, int(rng.integers(2**62))))
        w = random_contraction(6, rng)
        s = 0.6 * (w @ t)
        lam = estimate_lambda1(t, s)
        assert lam is not None and lam > 0.0
        ok, _ = check_relative_bound(t, s, lam + 1e-8, 0.0, samples=1000)
        assert ok
        ok_small, _ = check_relative_bound(t, s, lam * (1.0 - 1e-3), 0.0, samples=1000)
        assert not ok_small


class TestRelativeBound:
    def test_zero_perturbation(self):
        ok, slack = check_relative_bound(np.eye(2), np.zeros((2, 2)), 0.5, 0.25)
        assert ok and slack >= 0.0

    def test_tight_scaling(self):
        ok, slack = check_relative_bound(np.eye(2), 0.5 * np.eye(2), 0.5, 0.0)
        assert ok
        assert slack == pytest.approx(0.0, abs=1e-12)

    def test_too_small_lambda(self):
        ok, slack = check_relative_bound(np.eye(2), 0.5 * np.eye(2), 0.3, 0.0)
        assert not ok
        assert slack == pytest.approx(-0.2, abs=1e-12)

    def test_lambda1_precondition(self):
        with pytest.raises(HypothesisRefusal):
            check_relative_bound(np.eye(2), np.eye(2), 1.0, 0.0)

    def test_lambda2_precondition(self):
        with pytest.raises(HypothesisRefusal):
            check_relative_bound(np.eye(2), np.eye(2), 0.5, -1.0)

    def test_order_independence(self):
        t = np.diag([2.0, 1.0])
        s = 0.3 * np.eye(2)
        _, w1 = check_relative_bound(t, s, 0.4, 0.1, samples=500, seed=3)
        _, w2 = check_relative_bound(t, s, 0.4, 0.1, samples=500, seed=3)
        assert w1 == w2

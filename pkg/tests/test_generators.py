import numpy as np
import pytest

from pinvperturb import (
    GenSpec,
    HypothesisRefusal,
    adjoint,
    adversarial_pair,
    check_relative_bound,
    check_stewart_hypotheses,
    commute_identity_check,
    random_operator,
    random_relative_perturbation,
    reduced_min_modulus,
    s_alpha,
    singular_values,
    solve_square,
    spectral_norm,
    update_stewart,
)
from pinvperturb.generators import haar_unitary, random_contraction
from pinvperturb.hypotheses import check_null_inclusion


class TestGenSpec:
    def test_rank_bounds(self):
        with pytest.raises(ValueError):
            GenSpec(2, 3, 3, 1.0, 1.0, 0)
        with pytest.raises(ValueError):
            GenSpec(2, 3, -1, 1.0, 1.0, 0)

    def test_gamma_le_norm(self):
        with pytest.raises(ValueError):
            GenSpec(2, 2, 2, 2.0, 1.0, 0)

    def test_positive_dims(self):
        with pytest.raises(ValueError):
            GenSpec(0, 2, 0, 1.0, 1.0, 0)


class TestRandomOperator:
    def test_rank_zero_is_zero(self):
        m = random_operator(GenSpec(3, 4, 0, 1.0, 2.0, 5))
        np.testing.assert_array_equal(m, np.zeros((3, 4)))

    def test_full_rank_equal_targets_is_partial_isometry(self):
        m = random_operator(GenSpec(4, 3, 3, 2.0, 2.0, 5))
        sigma = singular_values(m)
        np.testing.assert_allclose(sigma, [2.0, 2.0, 2.0], atol=1e-12)

    def test_prescribed_extremes(self):
        m = random_operator(GenSpec(3, 2, 1, 2.0, 2.0, 9))
        assert reduced_min_modulus(m) == pytest.approx(2.0, abs=1e-12)
        m2 = random_operator(GenSpec(6, 5, 3, 0.25, 1.75, 9))
        sigma = singular_values(m2)
        assert sigma[0] == pytest.approx(1.75, abs=1e-12)
        assert sigma[2] == pytest.approx(0.25, abs=1e-12)
        assert sigma[3] <= 1e-14

    def test_deterministic_per_seed(self):
        spec = GenSpec(5, 4, 2, 0.5, 1.5, 123)
        np.testing.assert_array_equal(random_operator(spec), random_operator(spec))

    def test_rank_one_distinct_targets_infeasible(self):
        with pytest.raises(ValueError):
            random_operator(GenSpec(3, 3, 1, 0.5, 1.5, 0))


class TestHaarAndContraction:
    def test_unitary(self):
        q = haar_unitary(5, np.random.default_rng(0))
        assert spectral_norm(q @ q.conj().T - np.eye(5)) <= 1e-12

    def test_contraction_norm(self):
        w = random_contraction(6, np.random.default_rng(1))
        assert spectral_norm(w) <= 1.0 + 1e-12


class TestSAlpha:
    def test_zero_operator(self):
        np.testing.assert_array_equal(s_alpha(np.zeros((2, 2)), 5.0), np.zeros((2, 2)))

    def test_diagonal_value(self):
        s = s_alpha(np.diag([1.0, 0.0]), 0.5)
        np.testing.assert_allclose(s, np.diag([0.25, 0.0]), atol=1e-14)

    def test_alpha_interval_enforced(self):
        t = np.diag([1.0, 2.0])  # gamma = 1, upper bound 2
        with pytest.raises(HypothesisRefusal):
            s_alpha(t, 0.0)
        with pytest.raises(HypothesisRefusal):
            s_alpha(t, 2.0)
        with pytest.raises(HypothesisRefusal):
            s_alpha(t, -0.1)

    def test_admissible_alpha_certifies(self):
        rng = np.random.default_rng(3)
        t = random_operator(GenSpec(5, 4, 2, 0.5, 1.5, int(rng.integers(2**62))))
        s = s_alpha(t, 1.0 / spectral_norm(np.linalg.pinv(t)))
        rep = check_stewart_hypotheses(t, s)
        assert rep.verdict_stewart

    @pytest.mark.parametrize("seed", range(200))
    def test_always_certifies_across_200_operators(self, seed):
        rng = np.random.default_rng(seed)
        rows = int(rng.integers(2, 9))
        cols = int(rng.integers(2, 9))
        rank = int(rng.integers(1, min(rows, cols) + 1))
        gamma = float(rng.uniform(0.2, 1.5))
        kappa = 1.0 if rank == 1 else float(rng.uniform(1.0, 4.0))
        t = random_operator(GenSpec(rows, cols, rank, gamma, gamma * kappa,
                                    int(rng.integers(2**62))))
        alpha = float(rng.uniform(0.02, 0.98)) * 2.0 * reduced_min_modulus(t)
        s = s_alpha(t, alpha)
        assert spectral_norm(s) <= alpha / 2.0 + 1e-12
        rep = check_stewart_hypotheses(t, s)
        assert rep.verdict_stewart

    def test_update_matches_oracle_on_s_alpha(self):
        rng = np.random.default_rng(11)
        t = random_operator(GenSpec(6, 4, 3, 0.4, 1.2, int(rng.integers(2**62))))
        s = s_alpha(t, 0.9 * 2.0 * reduced_min_modulus(t))
        res = update_stewart(t, s)
        assert res.oracle_discrepancy <= 1e-8 * res.norms_used["norm_Td"]


class TestResolventContractions:
    @pytest.mark.parametrize("seed", range(12))
    def test_closure_norm_facts(self, seed):
        rng = np.random.default_rng(seed)
        rows = int(rng.integers(1, 8))
        cols = int(rng.integers(1, 8))
        t = (rng.standard_normal((rows, cols))
             + 1j * rng.standard_normal((rows, cols)))
        gram = np.eye(cols, dtype=complex) + adjoint(t) @ t
        resolvent = solve_square(gram, np.eye(cols, dtype=complex))
        assert spectral_norm(resolvent) <= 1.0 + 1e-12
        smoothed = np.linalg.solve(gram.T, t.T).T  # T (I + T*T)^-1
        assert spectral_norm(smoothed) <= 0.5 + 1e-12
        # adjoint symmetry of the smoothed operator
        cogram = np.eye(rows, dtype=complex) + t @ adjoint(t)
        other = solve_square(cogram, t)  # (I + TT*)^-1 T
        assert spectral_norm(adjoint(smoothed) - adjoint(t) @ np.linalg.inv(cogram)) <= 1e-10
        assert spectral_norm(smoothed - other) <= 1e-10


class TestCommuteIdentity:
    def test_identity(self):
        assert commute_identity_check(np.eye(3)) <= 1e-14

    def test_diagonal(self):
        assert commute_identity_check(np.diag([2.0, 0.5, 0.0])) <= 1e-14

    def test_random_rectangular(self):
        rng = np.random.default_rng(6)
        t = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
        assert commute_identity_check(t) <= 1e-11


class TestRandomRelativePerturbation:
    def test_zero_lambda(self):
        np.testing.assert_array_equal(
            random_relative_perturbation(np.eye(2), 0.0, 3), np.zeros((2, 2))
        )

    def test_tight_identity_case(self):
        # with W = I the bound is an equality for every x
        t = np.eye(2)
        s = 0.5 * t
        ok, slack = check_relative_bound(t, s, 0.5, 0.0)
        assert ok and slack == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_certifies_bound_and_null_inclusion(self, seed):
        rng = np.random.default_rng(seed)
        t = random_operator(GenSpec(5, 6, 4, 0.4, 1.3, int(rng.integers(2**62))))
        lam = float(rng.uniform(0.05, 0.9))
        s = random_relative_perturbation(t, lam, int(rng.integers(2**62)))
        ok, _ = check_relative_bound(t, s, lam, 0.0, samples=1000)
        assert ok
        null_ok, _ = check_null_inclusion(t, s)
        assert null_ok

    def test_deterministic(self):
        t = np.eye(3)
        np.testing.assert_array_equal(
            random_relative_perturbation(t, 0.4, 9),
            random_relative_perturbation(t, 0.4, 9),
        )

    def test_lambda_range(self):
        with pytest.raises(HypothesisRefusal):
            random_relative_perturbation(np.eye(2), 1.0, 0)
        with pytest.raises(HypothesisRefusal):
            random_relative_perturbation(np.eye(2), -0.2, 0)


class TestAdversarialPairs:
    def test_range_violation_only(self):
        t, s = adversarial_pair("range_violation", seed=7)
        rep = check_stewart_hypotheses(t, s)
        assert rep.range_incl_residual > 0.1 * rep.norm_S
        assert rep.null_incl_residual <= 1e-10
        assert rep.norm_TdS < 1.0

    def test_null_violation_only(self):
        t, s = adversarial_pair("null_violation", seed=7)
        rep = check_stewart_hypotheses(t, s)
        assert rep.null_incl_residual > 0.1 * rep.norm_S
        assert rep.range_incl_residual <= 1e-10
        assert rep.norm_TdS < 1.0

    def test_norm_violation_only(self):
        t, s = adversarial_pair("norm_violation", seed=7)
        rep = check_stewart_hypotheses(t, s)
        assert rep.norm_TdS >= 1.0
        assert rep.range_incl_residual <= 1e-10
        assert rep.null_incl_residual <= 1e-10

    def test_deterministic_and_kind_checked(self):
        t1, s1 = adversarial_pair("range_violation", seed=1)
        t2, s2 = adversarial_pair("range_violation", seed=1)
        np.testing.assert_array_equal(t1, t2)
        np.testing.assert_array_equal(s1, s2)
        with pytest.raises(ValueError):
            adversarial_pair("everything_violation", seed=1)

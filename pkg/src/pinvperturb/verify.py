"""Randomized invariant suites behind ``verify`` and the acceptance tests.

Each suite draws operators with prescribed spectra (bounded condition, so
numerical rank is unambiguous), runs one certified route against the direct
SVD oracle, and aggregates worst-case deviations. Trials are seeded
individually from the master seed, so results are independent of job count
and identical across runs.

The pinned thresholds below are the acceptance contract; they are fixed
here, not derived from the configurable Tolerances.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .generators import GenSpec, random_operator, random_relative_perturbation, s_alpha
from .linalg import (
    Tolerances,
    _tol,
    adjoint,
    null_space_basis,
    orthonormal_range_basis,
    principal_angle_gap,
    solve_from_right,
    spectral_norm,
)
from .perturb import (
    error_bound_lambda2_zero,
    error_bound_stewart,
    gamma_continuity_bound,
    neumann_pinv,
    update_relative_surjective,
    update_stewart,
)
from .pinv import pseudoinverse, reduced_min_modulus, verify_mp_axioms
from .reverse_order import check_rol_hypotheses, reverse_order_pinv

AXIOM_REL = 1e-9
IDENTITY_REL = 1e-9
GAMMA_IDENTITY_DEV = 1e-10
STEWART_ORACLE_REL = 1e-8
LEFT_RIGHT_REL = 1e-9
NULL_GAP = 1e-8
BOUND_SLACK = 1e-10
EXERCISE_RATIO = 0.25
RELATIVE_ORACLE_REL = 1e-8
ROL_REL = 1e-9
ROL_COUNTEREXAMPLE_GAP = 1e-3
MONOTONE_SLACK = 1e-12


def _trial_seeds(master_seed: int, tag: int, count: int) -> list:
    rng = np.random.default_rng((master_seed, tag))
    return [int(x) for x in rng.integers(0, 2**62, size=count)]


def _run_trials(trial, seeds, jobs: int) -> list:
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(trial, seeds))
    return [trial(seed) for seed in seeds]


def _draw_operator(rng, rows, cols, rank, gamma_lo, gamma_hi, kappa_hi):
    gamma = float(rng.uniform(gamma_lo, gamma_hi))
    kappa = 1.0 if rank <= 1 else float(np.exp(rng.uniform(0.0, np.log(kappa_hi))))
    spec = GenSpec(
        rows=rows,
        cols=cols,
        rank=rank,
        gamma_target=gamma,
        norm_target=gamma * kappa,
        seed=int(rng.integers(0, 2**62)),
    )
    return random_operator(spec)


def suite_mp_axioms(trials, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1):
    """Pseudoinverse axioms, inverse identities, and the gamma identity."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        rows = int(rng.integers(1, max_dim + 1))
        cols = int(rng.integers(1, max_dim + 1))
        top = min(rows, cols)
        mode = int(rng.integers(0, 10))
        if mode == 0:
            rank = 0
        elif mode <= 4:
            rank = top
        else:
            rank = int(rng.integers(1, top + 1))
        t = _draw_operator(rng, rows, cols, rank, 0.1, 1.0, 30.0)

        pr = pseudoinverse(t, tol)
        norm_t = float(pr.sigma[0])
        norm_td = spectral_norm(pr.pinv)
        scale = max(1.0, norm_t, norm_td)
        ax = verify_mp_axioms(t, pr.pinv, tol)
        worst_axiom = max(
            ax.residual_tTt, ax.residual_tdTtd, ax.residual_sym1, ax.residual_sym2
        ) / scale

        ta = adjoint(t)
        back = pseudoinverse(pr.pinv, tol).pinv
        invol = spectral_norm(back - t) / max(1.0, norm_t)
        adj = spectral_norm(pseudoinverse(ta, tol).pinv - adjoint(pr.pinv)) / max(
            1.0, norm_td
        )
        gram_direct = pseudoinverse(ta @ t, tol).pinv
        gram_factored = pr.pinv @ pseudoinverse(ta, tol).pinv
        gram = spectral_norm(gram_direct - gram_factored) / max(
            1.0, spectral_norm(gram_direct)
        )
        gamma_dev = 0.0
        if pr.rank:
            gamma_dev = abs(norm_td * reduced_min_modulus(t, tol) - 1.0)
        return {
            "axiom": worst_axiom,
            "invol": invol,
            "adj": adj,
            "gram": gram,
            "gamma": gamma_dev,
        }

    rows = _run_trials(trial, _trial_seeds(seed, 1, trials), jobs)
    worst = {key: max(r[key] for r in rows) for key in rows[0]}
    passed = (
        worst["axiom"] <= AXIOM_REL
        and worst["invol"] <= IDENTITY_REL
        and worst["adj"] <= IDENTITY_REL
        and worst["gram"] <= IDENTITY_REL
        and worst["gamma"] <= GAMMA_IDENTITY_DEV
    )
    return {
        "name": "mp_axioms",
        "trials": trials,
        "worst_axiom_residual_rel": worst["axiom"],
        "worst_double_pinv_rel": worst["invol"],
        "worst_adjoint_pinv_rel": worst["adj"],
        "worst_gram_identity_rel": worst["gram"],
        "worst_gamma_identity_dev": worst["gamma"],
        "passed": bool(passed),
    }


def suite_stewart(trials, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1):
    """Stewart update vs oracle plus error-bound domination on the same pairs."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        rows = int(rng.integers(2, max_dim + 1))
        cols = int(rng.integers(2, max_dim + 1))
        rank = int(rng.integers(1, min(rows, cols) + 1))
        t = _draw_operator(rng, rows, cols, rank, 0.3, 1.2, 4.0)
        pr_t = pseudoinverse(t, tol)
        norm_td = spectral_norm(pr_t.pinv)
        u = float(rng.uniform(0.0, 1.0)) or 0.5
        alpha = u * 2.0 / norm_td
        s = s_alpha(t, alpha, tol)

        res = update_stewart(t, s, tol)
        pr_sum = pseudoinverse(t + s, tol)
        right = solve_from_right(
            pr_t.pinv, np.eye(rows, dtype=np.complex128) + s @ pr_t.pinv, tol
        )
        bound = error_bound_stewart(t, s, tol)
        measured = spectral_norm(pr_sum.pinv - pr_t.pinv)
        return {
            "oracle": res.oracle_discrepancy / norm_td,
            "left_right": spectral_norm(res.pinv_updated - right) / max(1.0, norm_td),
            "rank_mismatch": float(pr_sum.rank != pr_t.rank),
            "null_gap": principal_angle_gap(
                null_space_basis(t, tol), null_space_basis(t + s, tol), tol
            ),
            "bound_excess": measured - bound,
            "bound_ratio": measured / bound if bound > 0.0 else 0.0,
        }

    rows = _run_trials(trial, _trial_seeds(seed, 2, trials), jobs)
    worst_oracle = max(r["oracle"] for r in rows)
    worst_lr = max(r["left_right"] for r in rows)
    rank_mismatches = int(sum(r["rank_mismatch"] for r in rows))
    worst_gap = max(r["null_gap"] for r in rows)
    worst_excess = max(r["bound_excess"] for r in rows)
    best_ratio = max(r["bound_ratio"] for r in rows)
    passed = (
        worst_oracle <= STEWART_ORACLE_REL
        and worst_lr <= LEFT_RIGHT_REL
        and rank_mismatches == 0
        and worst_gap <= NULL_GAP
        and worst_excess <= BOUND_SLACK
        and best_ratio >= EXERCISE_RATIO
    )
    return {
        "name": "stewart_update",
        "trials": trials,
        "worst_oracle_rel": worst_oracle,
        "worst_left_right_rel": worst_lr,
        "rank_mismatches": rank_mismatches,
        "worst_null_gap": worst_gap,
        "worst_bound_excess": worst_excess,
        "best_bound_exercise_ratio": best_ratio,
        "passed": bool(passed),
    }


def suite_relative(trials, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1):
    """Surjective relative updates, norm caps, and the gamma-direction regression."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        rows = int(rng.integers(1, max_dim + 1))
        cols = int(rng.integers(rows, max_dim + 1))
        t = _draw_operator(rng, rows, cols, rows, 0.3, 1.2, 4.0)
        lam = 0.0 if rng.uniform() < 0.05 else float(rng.uniform(0.0, 0.9))
        s = random_relative_perturbation(t, lam, int(rng.integers(0, 2**62)))

        res = update_relative_surjective(t, s, lam, 0.0, tol)
        pr_t = pseudoinverse(t, tol)
        pr_sum = pseudoinverse(t + s, tol)
        norm_td = spectral_norm(pr_t.pinv)
        cap = norm_td / (1.0 - lam)
        bound = error_bound_lambda2_zero(t, s, tol)
        measured = spectral_norm(pr_sum.pinv - pr_t.pinv)
        scaled = (1.0 - lam) * pr_t.gamma
        return {
            "oracle": res.oracle_discrepancy / max(1.0, norm_td),
            "cap_excess": spectral_norm(pr_sum.pinv) - cap,
            "bound_excess": measured - bound,
            "corrected_gamma_violation": scaled - pr_sum.gamma,
            "printed_gamma_fails": float(pr_sum.gamma > scaled + BOUND_SLACK),
        }

    rows = _run_trials(trial, _trial_seeds(seed, 3, trials), jobs)
    worst_oracle = max(r["oracle"] for r in rows)
    worst_cap = max(r["cap_excess"] for r in rows)
    worst_bound = max(r["bound_excess"] for r in rows)
    worst_gamma = max(r["corrected_gamma_violation"] for r in rows)
    printed_fails = int(sum(r["printed_gamma_fails"] for r in rows))
    passed = (
        worst_oracle <= RELATIVE_ORACLE_REL
        and worst_cap <= BOUND_SLACK
        and worst_bound <= BOUND_SLACK
        and worst_gamma <= BOUND_SLACK
        and printed_fails >= 1
    )
    return {
        "name": "relative_update",
        "trials": trials,
        "worst_oracle_rel": worst_oracle,
        "worst_norm_cap_excess": worst_cap,
        "worst_bound_excess": worst_bound,
        "worst_corrected_gamma_violation": worst_gamma,
        "printed_gamma_direction_failures": printed_fails,
        "passed": bool(passed),
    }


def suite_neumann(trials, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1):
    """Truncated-series pseudoinverse against its geometric certification."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        rows = int(rng.integers(1, max_dim + 1))
        cols = int(rng.integers(rows, max_dim + 1))
        t = _draw_operator(rng, rows, cols, rows, 0.3, 1.2, 3.0)
        rho = float(rng.uniform(0.1, 0.9))
        w = rng.standard_normal((rows, rows)) + 1j * rng.standard_normal((rows, rows))
        d0 = w @ t
        d = (rho / spectral_norm(w)) * d0
        s = t + d

        res = neumann_pinv(t, s, tol=tol)
        norm_td = spectral_norm(pseudoinverse(t, tol).pinv)
        final_err = spectral_norm(res.pinv_s - pseudoinverse(s, tol).pinv)
        cap = math.ceil(math.log(1e-12) / math.log(res.ratio)) + 2
        return {
            "tail_excess": final_err - res.residual_bound,
            "terms_over_cap": float(res.terms_used > cap),
            "not_converged": float(not res.converged),
            "ratio_dev": abs(res.ratio - rho) / max(1.0, norm_td),
        }

    rows = _run_trials(trial, _trial_seeds(seed, 4, trials), jobs)
    worst_tail = max(r["tail_excess"] for r in rows)
    over_cap = int(sum(r["terms_over_cap"] for r in rows))
    unconverged = int(sum(r["not_converged"] for r in rows))
    passed = worst_tail <= BOUND_SLACK and over_cap == 0 and unconverged == 0
    return {
        "name": "neumann_series",
        "trials": trials,
        "worst_tail_excess": worst_tail,
        "trials_over_term_cap": over_cap,
        "unconverged_trials": unconverged,
        "passed": bool(passed),
    }


def suite_reverse_order(trials, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1):
    """Three-way reverse-order agreement plus the fixed counterexample."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        k = int(rng.integers(1, max(2, max_dim // 2)))
        m = int(rng.integers(k, max_dim + 1))
        n = int(rng.integers(k, max_dim + 1))
        f = _draw_operator(rng, m, k, k, 0.4, 1.0, 3.0)
        g = _draw_operator(rng, k, n, k, 0.4, 1.0, 3.0)
        fp = reverse_order_pinv(f, g, tol)
        a_rank = pseudoinverse(fp.a, tol).rank
        range_gap = principal_angle_gap(
            orthonormal_range_basis(fp.a, tol), orthonormal_range_basis(f, tol), tol
        )
        return {
            "disc": fp.max_pairwise_discrepancy / max(1.0, spectral_norm(fp.pinv_oracle)),
            "rank_mismatch": float(a_rank != k),
            "range_gap": range_gap,
        }

    rows = _run_trials(trial, _trial_seeds(seed, 5, trials), jobs)
    worst_disc = max(r["disc"] for r in rows)
    rank_mismatches = int(sum(r["rank_mismatch"] for r in rows))
    worst_range_gap = max(r["range_gap"] for r in rows)

    # fixed hypothesis-violating fixture: F drops full column rank and the
    # law visibly fails
    f0 = np.array([[1.0, 1.0]])
    g0 = np.array([[1.0, 0.0], [0.0, 2.0]])
    counterexample_gap = spectral_norm(
        pseudoinverse(f0 @ g0, tol).pinv
        - pseudoinverse(g0, tol).pinv @ pseudoinverse(f0, tol).pinv
    )
    hypotheses_reject = not check_rol_hypotheses(f0, g0, tol)

    passed = (
        worst_disc <= ROL_REL
        and rank_mismatches == 0
        and worst_range_gap <= NULL_GAP
        and counterexample_gap > ROL_COUNTEREXAMPLE_GAP
        and hypotheses_reject
    )
    return {
        "name": "reverse_order_law",
        "trials": trials,
        "worst_three_way_rel": worst_disc,
        "rank_mismatches": rank_mismatches,
        "worst_range_gap": worst_range_gap,
        "counterexample_gap": counterexample_gap,
        "counterexample_rejected": bool(hypotheses_reject),
        "passed": bool(passed),
    }


def suite_gamma_continuity(
    n_ops, seq_len, max_dim, seed, tol: Tolerances | None = None, jobs: int = 1
):
    """gamma(T + S/n) -> gamma(T) monotonically, dominated by the beta bound."""
    tol = _tol(tol)

    def trial(trial_seed):
        rng = np.random.default_rng(trial_seed)
        rows = int(rng.integers(2, max_dim + 1))
        cols = int(rng.integers(2, max_dim + 1))
        rank = int(rng.integers(1, min(rows, cols) + 1))
        t = _draw_operator(rng, rows, cols, rank, 0.3, 1.2, 3.0)
        alpha = float(rng.uniform(0.05, 0.95)) * 2.0 * reduced_min_modulus(t, tol)

        achieved, bounds = [], []
        worst_excess = -np.inf
        mono_violation = -np.inf
        for n in range(1, seq_len + 1):
            a, b = gamma_continuity_bound(t, s_alpha(t, alpha / n, tol), tol)
            worst_excess = max(worst_excess, a - b)
            if achieved:
                mono_violation = max(
                    mono_violation, a - achieved[-1], b - bounds[-1]
                )
            achieved.append(a)
            bounds.append(b)
        decay_ok = (
            achieved[-1] <= achieved[0] / 5.0 + MONOTONE_SLACK
            and bounds[-1] <= bounds[0] / 5.0 + MONOTONE_SLACK
        )
        return {
            "excess": worst_excess,
            "mono": mono_violation,
            "decay_fail": float(not decay_ok),
        }

    rows = _run_trials(trial, _trial_seeds(seed, 6, n_ops), jobs)
    worst_excess = max(r["excess"] for r in rows)
    worst_mono = max(r["mono"] for r in rows)
    decay_failures = int(sum(r["decay_fail"] for r in rows))
    passed = (
        worst_excess <= BOUND_SLACK
        and worst_mono <= MONOTONE_SLACK
        and decay_failures == 0
    )
    return {
        "name": "gamma_continuity",
        "trials": n_ops,
        "sequence_length": seq_len,
        "worst_bound_excess": worst_excess,
        "worst_monotonicity_violation": worst_mono,
        "decay_failures": decay_failures,
        "passed": bool(passed),
    }


def suite_typo_regressions(seed, tol: Tolerances | None = None):
    """Rectangular regression: theorem-form update works, intro form cannot.

    For surjective T with rows < cols the pseudoinverse is cols x rows while
    (I + pinv(T) S) is cols x cols, so the intro's right-multiplied variant
    does not even conform; the theorem's T'(I + S T')^-1 must match the
    oracle.
    """
    tol = _tol(tol)
    rng = np.random.default_rng((seed, 7))
    t = random_operator(
        GenSpec(rows=2, cols=5, rank=2, gamma_target=0.5, norm_target=1.0,
                seed=int(rng.integers(0, 2**62)))
    )
    s = random_relative_perturbation(t, 0.4, int(rng.integers(0, 2**62)))
    td = pseudoinverse(t, tol).pinv
    intro_inner_dim = (np.eye(5, dtype=np.complex128) + td @ s).shape[0]
    ill_formed = td.shape[1] != intro_inner_dim

    res = update_relative_surjective(t, s, 0.4, 0.0, tol)
    oracle_rel = res.oracle_discrepancy / max(1.0, spectral_norm(td))
    passed = ill_formed and oracle_rel <= RELATIVE_ORACLE_REL
    return {
        "name": "typo_regressions",
        "intro_formula_ill_formed": bool(ill_formed),
        "theorem_form_oracle_rel": oracle_rel,
        "passed": bool(passed),
    }


def run_verification(
    trials: int = 200,
    seed: int = 0,
    max_dim: int = 20,
    jobs: int = 1,
    tol: Tolerances | None = None,
):
    """Run every suite; returns (ordered verdict dict, overall pass flag)."""
    tol = _tol(tol)
    suites = [
        suite_mp_axioms(trials, max_dim, seed, tol, jobs),
        suite_stewart(trials, max_dim, seed, tol, jobs),
        suite_relative(trials, max_dim, seed, tol, jobs),
        suite_neumann(trials, max_dim, seed, tol, jobs),
        suite_reverse_order(trials, max_dim, seed, tol, jobs),
        suite_gamma_continuity(max(10, trials // 10), 20, max_dim, seed, tol, jobs),
        suite_typo_regressions(seed, tol),
    ]
    verdicts = {}
    for result in suites:
        result = dict(result)
        verdicts[result.pop("name")] = result
    return verdicts, all(v["passed"] for v in verdicts.values())

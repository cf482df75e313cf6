"""Closed-form perturbed pseudoinverses and a-priori error bounds.

Every update route first verifies its hypotheses (refusing with a typed
error when they fail), then computes the closed form, and finally certifies
the result against the direct SVD pseudoinverse of the perturbed operator.
A certified-route/oracle mismatch is an :class:`InvariantViolation`, never a
silent fallback.
"""

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisRefusal, InvariantViolation, SingularMatrixError
from .hypotheses import check_null_inclusion, check_relative_bound, check_stewart_hypotheses
from .linalg import (
    Tolerances,
    _tol,
    as_matrix,
    mat_close,
    solve_from_right,
    solve_square,
    spectral_norm,
)
from .pinv import pseudoinverse


@dataclass(frozen=True)
class UpdateResult:
    """A perturbed pseudoinverse from a closed-form update.

    method is one of ``stewart_left``, ``stewart_right``,
    ``relative_surjective``, ``neumann_series``. bound_apriori (when the
    route has one) dominates the true change |(T+S)' - T'|.
    oracle_discrepancy measures the update against the direct SVD
    pseudoinverse of T+S.
    """

    pinv_updated: np.ndarray
    method: str
    bound_apriori: float | None
    oracle_discrepancy: float
    norms_used: dict


@dataclass(frozen=True)
class NeumannResult:
    """Truncated-series pseudoinverse with its certified geometric tail.

    residual_bound = |T'| * ratio**terms_used / (1 - ratio) bounds the
    truncation error whether or not the series reached eps_series;
    converged records whether it did.
    """

    pinv_s: np.ndarray
    terms_used: int
    last_term_norm: float
    ratio: float
    residual_bound: float
    converged: bool


@dataclass(frozen=True)
class DingHuangBounds:
    """Case-specific norm bounds on the perturbed pseudoinverse."""

    case: str
    pinv_norm_bound: float
    pinv_diff_bound: float | None
    measured_pinv_norm: float
    measured_pinv_diff: float


def _pair(t, s):
    mt, ms = as_matrix(t), as_matrix(s)
    if mt.shape != ms.shape:
        from .errors import ShapeMismatchError

        raise ShapeMismatchError(f"T and S must have equal shapes, got {mt.shape} vs {ms.shape}")
    return mt, ms


def update_stewart(t, s, tol: Tolerances | None = None) -> UpdateResult:
    """Perturbed pseudoinverse (T+S)' = (I + T'S)^-1 T' = T' (I + S T')^-1.

    Requires the Stewart hypotheses (strict norm condition plus both
    inclusions); refuses naming the failing condition otherwise. Both forms
    are computed and must agree, the recovery identity
    T' = (T+S)'(I + S T') is verified, and the returned left form is
    compared against the direct oracle.
    """
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    rep = check_stewart_hypotheses(mt, ms, tol)
    if not rep.verdict_stewart:
        thr = tol.eq(rep.norm_S)
        if not rep.norm_TdS < 1.0 - tol.margin_strict:
            raise HypothesisRefusal(
                f"Stewart update refused: ‖T†S‖ = {rep.norm_TdS:.6g} ≥ 1"
                " (norm condition fails)",
                condition="norm_TdS",
            )
        if rep.ttds_residual > thr:
            raise HypothesisRefusal(
                "Stewart update refused: range inclusion R(S) ⊆ R(T) fails"
                f" (‖TT†S - S‖ = {rep.ttds_residual:.6g})",
                condition="range_inclusion",
            )
        raise HypothesisRefusal(
            "Stewart update refused: null-space inclusion N(T) ⊆ N(S) fails"
            f" (‖ST†T - S‖ = {rep.stdt_residual:.6g})",
            condition="null_inclusion",
        )

    td = pseudoinverse(mt, tol).pinv
    norm_td = spectral_norm(td)
    eye_dom = np.eye(mt.shape[1], dtype=np.complex128)
    eye_cod = np.eye(mt.shape[0], dtype=np.complex128)
    left = solve_square(eye_dom + td @ ms, td, tol)
    right = solve_from_right(td, eye_cod + ms @ td, tol)
    if not mat_close(left, right, tol):
        raise InvariantViolation(
            "left and right Stewart forms disagree:"
            f" ‖L - R‖ = {spectral_norm(left - right):.3e}"
        )
    if not mat_close(left @ (eye_cod + ms @ td), td, tol):
        raise InvariantViolation("recovery identity T† = (T+S)†(I + ST†) failed")

    oracle = pseudoinverse(mt + ms, tol).pinv
    bound = rep.norm_S * norm_td**2 / (1.0 - rep.norm_TdS)
    return UpdateResult(
        pinv_updated=left,
        method="stewart_left",
        bound_apriori=bound,
        oracle_discrepancy=spectral_norm(left - oracle),
        norms_used={
            "norm_TdS": rep.norm_TdS,
            "norm_STd": rep.norm_STd,
            "norm_S": rep.norm_S,
            "norm_Td": norm_td,
        },
    )


def update_relative_surjective(
    t, s, lambda1: float, lambda2: float, tol: Tolerances | None = None
) -> UpdateResult:
    """Perturbed pseudoinverse (T+S)' = T' (I + S T')^-1 for surjective T.

    Requires T surjective and the relative bound
    |Sx| <= lambda1 |Tx| + lambda2 |(T+S)x| with lambda1 < 1 (verified by
    sampling). Asserts that T+S stays surjective and that
    |(T+S)'| <= (1 + lambda2) / (1 - lambda1) * |T'|.
    """
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    prt = pseudoinverse(mt, tol)
    rows = mt.shape[0]
    if prt.rank < rows:
        raise HypothesisRefusal(
            f"relative update refused: T is not surjective (rank {prt.rank} < {rows} rows)",
            condition="surjective",
        )
    ok, worst = check_relative_bound(mt, ms, lambda1, lambda2, tol=tol)
    if not ok:
        raise HypothesisRefusal(
            "relative update refused: bound"
            " ‖Sx‖ ≤ λ₁‖Tx‖ +"
            " λ₂‖(T+S)x‖ fails"
            f" (worst slack {worst:.3e})",
            condition="relative_bound",
        )

    td = prt.pinv
    norm_td = spectral_norm(td)
    eye_cod = np.eye(rows, dtype=np.complex128)
    try:
        updated = solve_from_right(td, eye_cod + ms @ td, tol)
    except SingularMatrixError as exc:
        raise InvariantViolation(
            "(I + ST†) is numerically singular although the relative bound holds:"
            f" {exc}"
        ) from exc

    oracle_res = pseudoinverse(mt + ms, tol)
    if oracle_res.rank < rows:
        raise InvariantViolation(
            f"T+S lost surjectivity (rank {oracle_res.rank} < {rows})"
            " although the relative bound holds"
        )
    norm_oracle = spectral_norm(oracle_res.pinv)
    norm_cap = (1.0 + lambda2) / (1.0 - lambda1) * norm_td
    if norm_oracle > norm_cap + tol.eq(norm_cap):
        raise InvariantViolation(
            f"‖(T+S)†‖ = {norm_oracle:.6g} exceeds the certified cap"
            f" {norm_cap:.6g}"
        )

    norm_std = spectral_norm(ms @ td)
    norm_s = spectral_norm(ms)
    bound = None
    if lambda2 == 0.0 and norm_std < 1.0:
        bound = norm_td**2 * norm_s / (1.0 - norm_std)
    return UpdateResult(
        pinv_updated=updated,
        method="relative_surjective",
        bound_apriori=bound,
        oracle_discrepancy=spectral_norm(updated - oracle_res.pinv),
        norms_used={
            "norm_TdS": spectral_norm(td @ ms),
            "norm_STd": norm_std,
            "norm_S": norm_s,
            "norm_Td": norm_td,
        },
    )


def neumann_pinv(
    t,
    s,
    eps_series: float | None = None,
    max_terms: int = 10_000,
    tol: Tolerances | None = None,
) -> NeumannResult:
    """Pseudoinverse of S as the series T' * sum_n (-(S - T) T')^n.

    Valid for surjective T when N(T) is contained in N(S - T) and the ratio
    |(S - T) T'| is below 1; then the minimal lambda1 for the difference
    equals the ratio and the alternating series converges geometrically to
    S' = T' (I + (S - T) T')^-1. Terms accumulate until the next term drops
    below eps_series (default 1e-12 * |T'|) or max_terms is hit; the
    partial sum is checked against the direct oracle at every order using
    the geometric tail bound.
    """
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    prt = pseudoinverse(mt, tol)
    rows = mt.shape[0]
    if prt.rank < rows:
        raise HypothesisRefusal(
            f"Neumann inversion refused: T is not surjective (rank {prt.rank} < {rows})",
            condition="surjective",
        )
    diff = ms - mt
    td = prt.pinv
    norm_td = spectral_norm(td)
    ratio = spectral_norm(diff @ td)
    if not ratio < 1.0 - tol.margin_strict:
        raise HypothesisRefusal(
            f"Neumann inversion refused: ratio ‖(S-T)T†‖ = {ratio:.6g} ≥ 1",
            condition="ratio",
        )
    null_ok, null_resid = check_null_inclusion(mt, diff, tol)
    if not null_ok:
        raise HypothesisRefusal(
            "Neumann inversion refused: N(T) ⊄ N(S-T)"
            f" (residual {null_resid:.3e}), no finite λ₁ with λ₂ = 0",
            condition="null_inclusion",
        )
    ok, worst = check_relative_bound(mt, diff, ratio, 0.0, tol=tol)
    if not ok:
        raise HypothesisRefusal(
            "Neumann inversion refused: relative bound"
            f" ‖(S-T)x‖ ≤ {ratio:.6g}·‖Tx‖ fails"
            f" (worst slack {worst:.3e})",
            condition="relative_bound",
        )
    if max_terms < 1:
        raise ValueError("max_terms must be a positive integer")

    eps = 1e-12 * norm_td if eps_series is None else float(eps_series)
    oracle = pseudoinverse(ms, tol).pinv
    step = diff @ td

    term = td
    total = td.copy()
    terms_used = 1
    last_term_norm = norm_td
    converged = False
    while True:
        tail = norm_td * ratio**terms_used / (1.0 - ratio)
        err = spectral_norm(total - oracle)
        if err > tail + tol.eq_abs:
            raise InvariantViolation(
                f"Neumann partial sum after {terms_used} terms is off by {err:.3e},"
                f" above the certified tail {tail:.3e}"
            )
        nxt = -(term @ step)
        norm_nxt = spectral_norm(nxt)
        if norm_nxt < eps:
            converged = True
            break
        if terms_used >= max_terms:
            break
        term = nxt
        total = total + term
        terms_used += 1
        last_term_norm = norm_nxt

    residual_bound = norm_td * ratio**terms_used / (1.0 - ratio)
    closed = solve_from_right(td, np.eye(rows, dtype=np.complex128) + step, tol)
    slack = residual_bound + tol.eq(max(spectral_norm(total), norm_td))
    if spectral_norm(total - closed) > slack:
        raise InvariantViolation(
            "Neumann series and closed form T†(I+(S-T)T†)⁻¹ disagree"
            f" beyond the certified tail ({spectral_norm(total - closed):.3e} > {slack:.3e})"
        )
    if spectral_norm(total - oracle) > slack:
        raise InvariantViolation(
            "Neumann series and direct pseudoinverse disagree beyond the certified tail"
        )
    return NeumannResult(
        pinv_s=total,
        terms_used=terms_used,
        last_term_norm=last_term_norm,
        ratio=ratio,
        residual_bound=residual_bound,
        converged=converged,
    )


def error_bound_stewart(t, s, tol: Tolerances | None = None) -> float:
    """A-priori bound |S| |T'|^2 / (1 - |T'S|) on |(T+S)' - T'|."""
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    td = pseudoinverse(mt, tol).pinv
    norm_tds = spectral_norm(td @ ms)
    if norm_tds >= 1.0:
        raise HypothesisRefusal(
            f"error bound undefined: ‖T†S‖ = {norm_tds:.6g} ≥ 1",
            condition="norm_TdS",
        )
    return spectral_norm(ms) * spectral_norm(td) ** 2 / (1.0 - norm_tds)


def error_bound_lambda2_zero(t, s, tol: Tolerances | None = None) -> float:
    """A-priori bound |T'|^2 |S| / (1 - |S T'|) for surjective T.

    Also verifies |(I + S T')^-1| <= 1 / (1 - |S T'|) on the way.
    """
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    prt = pseudoinverse(mt, tol)
    rows = mt.shape[0]
    if prt.rank < rows:
        raise HypothesisRefusal(
            f"error bound refused: T is not surjective (rank {prt.rank} < {rows})",
            condition="surjective",
        )
    td = prt.pinv
    norm_std = spectral_norm(ms @ td)
    if norm_std >= 1.0:
        raise HypothesisRefusal(
            f"error bound undefined: ‖ST†‖ = {norm_std:.6g} ≥ 1",
            condition="norm_STd",
        )
    eye_cod = np.eye(rows, dtype=np.complex128)
    inv_norm = spectral_norm(solve_square(eye_cod + ms @ td, eye_cod, tol))
    cap = 1.0 / (1.0 - norm_std)
    if inv_norm > cap + tol.eq(cap):
        raise InvariantViolation(
            f"‖(I+ST†)⁻¹‖ = {inv_norm:.6g} exceeds 1/(1-‖ST†‖)"
            f" = {cap:.6g}"
        )
    return spectral_norm(td) ** 2 * spectral_norm(ms) / (1.0 - norm_std)


def gamma_continuity_bound(t, s, tol: Tolerances | None = None) -> tuple[float, float]:
    """(|gamma(T+S) - gamma(T)|, beta |S|) under the Stewart hypotheses.

    beta = |T'| / (|(T+S)'| (1 - |T'S|)); the achieved change is asserted
    not to exceed the bound.
    """
    tol = _tol(tol)
    mt, ms = _pair(t, s)
    rep = check_stewart_hypotheses(mt, ms, tol)
    if not rep.verdict_stewart:
        raise HypothesisRefusal(
            "gamma continuity bound refused: Stewart hypotheses fail"
            f" (‖T†S‖ = {rep.norm_TdS:.6g},"
            f" range residual {rep.ttds_residual:.3e},"
            f" null residual {rep.stdt_residual:.3e})",
            condition="stewart",
        )
    norm_td = spectral_norm(pseudoinverse(mt, tol).pinv)
    pr_sum = pseudoinverse(mt + ms, tol)
    norm_td_sum = spectral_norm(pr_sum.pinv)
    achieved = abs(pr_sum.gamma - rep.gamma_T)
    if rep.norm_S == 0.0:
        return achieved, 0.0
    beta = norm_td / (norm_td_sum * (1.0 - rep.norm_TdS))
    bound = beta * rep.norm_S
    if achieved > bound + tol.eq(max(1.0, rep.gamma_T)):
        raise InvariantViolation(
            f"gamma moved by {achieved:.6g}, above the continuity bound {bound:.6g}"
        )
    return achieved, bound


_DH_CASES = ("injective", "surjective", "general")


def norm_bounds_ding_huang(t, s, case: str, tol: Tolerances | None = None) -> DingHuangBounds:
    """Case-specific norm bounds on (T+S)' with oracle verification.

    injective:  R(S) in R(T), |T'S| < 1  ->  T+S injective,
                |(T+S)'| <= |T'| / (1 - |T'S|)  and
                |(T+S)' - T'| <= |T'S| |T'| / (1 - |T'S|).
    surjective: N(T) in N(S), |S T'| < 1  ->  T+S surjective, same shape of
                bounds with |S T'|.
    general:    N(T) in N(S), |S| |T'| < 1  ->
                |(T+S)'| <= |T'| / (1 - |S| |T'|)  (no difference bound).
    """
    tol = _tol(tol)
    if case not in _DH_CASES:
        raise ValueError(f"case must be one of {_DH_CASES}, got {case!r}")
    mt, ms = _pair(t, s)
    prt = pseudoinverse(mt, tol)
    td = prt.pinv
    norm_td = spectral_norm(td)
    rows, cols = mt.shape

    if case == "injective":
        if prt.rank < cols:
            raise HypothesisRefusal(
                f"injective case refused: rank {prt.rank} < {cols} columns",
                condition="injective",
            )
        ok, resid = _range_only(prt, mt, ms, tol)
        if not ok:
            raise HypothesisRefusal(
                f"injective case refused: R(S) ⊄ R(T) (residual {resid:.3e})",
                condition="range_inclusion",
            )
        small = spectral_norm(td @ ms)
        if not small < 1.0 - tol.margin_strict:
            raise HypothesisRefusal(
                f"injective case refused: ‖T†S‖ = {small:.6g} ≥ 1",
                condition="norm_TdS",
            )
        norm_bound = norm_td / (1.0 - small)
        diff_bound = small * norm_td / (1.0 - small)
    elif case == "surjective":
        if prt.rank < rows:
            raise HypothesisRefusal(
                f"surjective case refused: rank {prt.rank} < {rows} rows",
                condition="surjective",
            )
        ok, resid = check_null_inclusion(mt, ms, tol)
        if not ok:
            raise HypothesisRefusal(
                f"surjective case refused: N(T) ⊄ N(S) (residual {resid:.3e})",
                condition="null_inclusion",
            )
        small = spectral_norm(ms @ td)
        if not small < 1.0 - tol.margin_strict:
            raise HypothesisRefusal(
                f"surjective case refused: ‖ST†‖ = {small:.6g} ≥ 1",
                condition="norm_STd",
            )
        norm_bound = norm_td / (1.0 - small)
        diff_bound = small * norm_td / (1.0 - small)
    else:
        ok, resid = check_null_inclusion(mt, ms, tol)
        if not ok:
            raise HypothesisRefusal(
                f"general case refused: N(T) ⊄ N(S) (residual {resid:.3e})",
                condition="null_inclusion",
            )
        small = spectral_norm(ms) * norm_td
        if not small < 1.0 - tol.margin_strict:
            raise HypothesisRefusal(
                f"general case refused: ‖S‖‖T†‖ = {small:.6g} ≥ 1",
                condition="norm_product",
            )
        norm_bound = norm_td / (1.0 - small)
        diff_bound = None

    pr_sum = pseudoinverse(mt + ms, tol)
    if case == "injective" and pr_sum.rank < cols:
        raise InvariantViolation(
            f"T+S lost injectivity (rank {pr_sum.rank} < {cols}) under the injective case"
        )
    if case == "surjective" and pr_sum.rank < rows:
        raise InvariantViolation(
            f"T+S lost surjectivity (rank {pr_sum.rank} < {rows}) under the surjective case"
        )
    measured_norm = spectral_norm(pr_sum.pinv)
    measured_diff = spectral_norm(pr_sum.pinv - td)
    if measured_norm > norm_bound + tol.eq(norm_bound):
        raise InvariantViolation(
            f"‖(T+S)†‖ = {measured_norm:.6g} exceeds the {case} bound"
            f" {norm_bound:.6g}"
        )
    if diff_bound is not None and measured_diff > diff_bound + tol.eq(diff_bound):
        raise InvariantViolation(
            f"‖(T+S)† - T†‖ = {measured_diff:.6g} exceeds the {case}"
            f" difference bound {diff_bound:.6g}"
        )
    return DingHuangBounds(
        case=case,
        pinv_norm_bound=norm_bound,
        pinv_diff_bound=diff_bound,
        measured_pinv_norm=measured_norm,
        measured_pinv_diff=measured_diff,
    )


def _range_only(prt, mt, ms, tol):
    from .hypotheses import _range_verdict

    ok, resid_proj, resid_alg = _range_verdict(prt, mt, ms, tol)
    return ok, max(resid_proj, resid_alg)

"""Reverse-order law for factored pseudoinverses.

For A = F G with F of full column rank and G of full row rank, the
pseudoinverse factors as A' = G' F' and has the closed form
G* (G G*)^-1 (F* F)^-1 F*. All three routes are computed and compared;
the intermediate identities A' F = G* (G G*)^-1 and G A' = (F* F)^-1 F*
behind the factorization are asserted as internal checks.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    HypothesisRefusal,
    InvariantViolation,
    ShapeMismatchError,
    SingularMatrixError,
)
from .linalg import (
    Tolerances,
    _tol,
    adjoint,
    as_matrix,
    mat_close,
    numerical_rank,
    singular_values,
    solve_from_right,
    solve_square,
    spectral_norm,
)
from .pinv import pseudoinverse


@dataclass(frozen=True)
class FactoredPinv:
    """The product A = F G and its pseudoinverse by three routes."""

    a: np.ndarray
    pinv_reverse: np.ndarray
    pinv_closed_form: np.ndarray
    pinv_oracle: np.ndarray
    max_pairwise_discrepancy: float


def check_rol_hypotheses(f, g, tol: Tolerances | None = None) -> bool:
    """True iff F has full column rank and G has full row rank (numerically)."""
    tol = _tol(tol)
    mf, mg = as_matrix(f), as_matrix(g)
    if mf.shape[1] != mg.shape[0]:
        raise ShapeMismatchError(
            f"factors do not conform: F is {mf.shape}, G is {mg.shape}"
        )
    rank_f = numerical_rank(singular_values(mf), mf.shape, tol)
    rank_g = numerical_rank(singular_values(mg), mg.shape, tol)
    return rank_f == mf.shape[1] and rank_g == mg.shape[0]


def reverse_order_pinv(f, g, tol: Tolerances | None = None) -> FactoredPinv:
    """Pseudoinverse of A = F G by oracle, reverse order, and closed form."""
    tol = _tol(tol)
    mf, mg = as_matrix(f), as_matrix(g)
    if mf.shape[1] != mg.shape[0]:
        raise ShapeMismatchError(
            f"factors do not conform: F is {mf.shape}, G is {mg.shape}"
        )
    if not check_rol_hypotheses(mf, mg, tol):
        rank_f = numerical_rank(singular_values(mf), mf.shape, tol)
        rank_g = numerical_rank(singular_values(mg), mg.shape, tol)
        raise HypothesisRefusal(
            "reverse-order law refused:"
            f" F needs full column rank (rank {rank_f} of {mf.shape[1]}),"
            f" G needs full row rank (rank {rank_g} of {mg.shape[0]})",
            condition="factor_ranks",
        )

    a = mf @ mg
    oracle = pseudoinverse(a, tol).pinv
    reverse = pseudoinverse(mg, tol).pinv @ pseudoinverse(mf, tol).pinv

    fa, ga = adjoint(mf), adjoint(mg)
    try:
        # G* (G G*)^-1 and (F* F)^-1 F*; both Gram matrices are nonsingular
        # under the rank hypotheses.
        right_factor = solve_from_right(ga, mg @ ga, tol)
        left_factor = solve_square(fa @ mf, fa, tol)
    except SingularMatrixError as exc:
        raise InvariantViolation(
            f"Gram matrix singular despite full-rank factors: {exc}"
        ) from exc
    closed = right_factor @ left_factor

    if not mat_close(oracle @ mf, right_factor, tol):
        raise InvariantViolation(
            "identity A†F = G*(GG*)⁻¹ failed:"
            f" residual {spectral_norm(oracle @ mf - right_factor):.3e}"
        )
    if not mat_close(mg @ oracle, left_factor, tol):
        raise InvariantViolation(
            "identity GA† = (F*F)⁻¹F* failed:"
            f" residual {spectral_norm(mg @ oracle - left_factor):.3e}"
        )

    disc = max(
        spectral_norm(oracle - reverse),
        spectral_norm(oracle - closed),
        spectral_norm(reverse - closed),
    )
    return FactoredPinv(
        a=a,
        pinv_reverse=reverse,
        pinv_closed_form=closed,
        pinv_oracle=oracle,
        max_pairwise_discrepancy=disc,
    )

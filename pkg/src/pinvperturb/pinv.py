"""Moore-Penrose pseudoinverse engine.

Computes the pseudoinverse together with the quantities the perturbation
theory runs on: the reduced minimum modulus (smallest nonzero singular
value) and the canonical orthogonal projections onto the range and the row
space. Also provides the defining-axiom checker used as an independent
oracle throughout the test suite.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, ShapeMismatchError
from .linalg import (
    Tolerances,
    _svd_full,
    _tol,
    adjoint,
    as_matrix,
    mat_close,
    numerical_rank,
    spectral_norm,
)


@dataclass(frozen=True)
class PinvResult:
    """Pseudoinverse plus the metadata of its rank-revealing decomposition.

    pinv
        The Moore-Penrose inverse, shape ``(cols, rows)`` of the source.
    rank
        Numerical rank under the configured cutoff.
    sigma
        All ``min(rows, cols)`` singular values of the source, non-increasing.
    gamma
        Reduced minimum modulus: the smallest nonzero singular value,
        ``sigma[rank - 1]``; 0.0 for the zero matrix.
    proj_range, proj_rowspace
        Orthogonal projections onto the column space and onto the orthogonal
        complement of the null space, built from the singular bases (not
        from pinv products, so they can cross-check those products).
    """

    pinv: np.ndarray
    rank: int
    sigma: np.ndarray
    gamma: float
    proj_range: np.ndarray
    proj_rowspace: np.ndarray


@dataclass(frozen=True)
class AxiomReport:
    """Residuals of the four defining identities of the pseudoinverse."""

    residual_tTt: float
    residual_tdTtd: float
    residual_sym1: float
    residual_sym2: float
    passed: bool


def pseudoinverse(t, tol: Tolerances | None = None) -> PinvResult:
    """Pseudoinverse via SVD with rank cutoff.

    Inverts singular values above the cutoff and zeroes the rest, so the
    result maps the range onto the row space and kills the complement.
    """
    tol = _tol(tol)
    m = as_matrix(t)
    u, s, vh = _svd_full(m)
    r = numerical_rank(s, m.shape, tol)
    ur = u[:, :r]
    vr = vh[:r].conj().T
    if r:
        pinv = (vr / s[:r]) @ ur.conj().T
        gamma = float(s[r - 1])
    else:
        pinv = np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
        gamma = 0.0
    proj_range = ur @ ur.conj().T
    proj_rowspace = vr @ vr.conj().T
    return PinvResult(
        pinv=pinv,
        rank=r,
        sigma=s.copy(),
        gamma=gamma,
        proj_range=proj_range,
        proj_rowspace=proj_rowspace,
    )


def reduced_min_modulus(t, tol: Tolerances | None = None) -> float:
    """Smallest nonzero singular value; 0.0 for the zero matrix.

    Equals the infimum of ``|Tx|`` over unit vectors orthogonal to the null
    space, and the reciprocal of ``|pinv(T)|`` for nonzero ``T``.
    """
    tol = _tol(tol)
    m = as_matrix(t)
    s = np.linalg.svd(m, compute_uv=False)
    r = numerical_rank(s, m.shape, tol)
    return float(s[r - 1]) if r else 0.0


def verify_mp_axioms(t, candidate, tol: Tolerances | None = None) -> AxiomReport:
    """Check whether ``candidate`` satisfies the four pseudoinverse axioms.

    Residuals: ``|T C T - T|``, ``|C T C - C|``, ``|(T C)* - T C|`` and
    ``|(C T)* - C T|``. ``passed`` is true iff each residual is below the
    equality tolerance at its natural norm scale.
    """
    tol = _tol(tol)
    m = as_matrix(t)
    c = as_matrix(candidate)
    if c.shape != (m.shape[1], m.shape[0]):
        raise ShapeMismatchError(
            f"candidate shape {c.shape} does not match transpose of {m.shape}"
        )
    tc = m @ c
    ct = c @ m
    nt = spectral_norm(m)
    nc = spectral_norm(c)
    r1 = spectral_norm(tc @ m - m)
    r2 = spectral_norm(ct @ c - c)
    r3 = spectral_norm(tc.conj().T - tc)
    r4 = spectral_norm(ct.conj().T - ct)
    passed = (
        r1 <= tol.eq(nt)
        and r2 <= tol.eq(nc)
        and r3 <= tol.eq(max(1.0, nt * nc))
        and r4 <= tol.eq(max(1.0, nt * nc))
    )
    return AxiomReport(r1, r2, r3, r4, passed)


def least_squares_min_norm(t, y, tol: Tolerances | None = None) -> np.ndarray:
    """Minimal-norm least-squares solution ``x = pinv(T) @ y``.

    Among all minimizers of ``|Tx - y|`` the returned vector has the
    smallest norm (it is orthogonal to the null space of ``T``).
    """
    m = as_matrix(t)
    vec = np.asarray(y, dtype=np.complex128)
    if vec.ndim != 1:
        raise ShapeMismatchError(f"expected a 1-d vector, got ndim={vec.ndim}")
    if vec.shape[0] != m.shape[0]:
        raise ShapeMismatchError(
            f"vector length {vec.shape[0]} does not match {m.shape[0]} rows"
        )
    return pseudoinverse(m, tol).pinv @ vec


def mp_representation(t, tol: Tolerances | None = None) -> np.ndarray:
    """Pseudoinverse through the two normal-equation routes.

    Computes ``pinv(T*T) @ T*`` and ``T* @ pinv(TT*)``, asserts both agree
    with the direct SVD pseudoinverse, and returns the first route. A
    disagreement is raised as :class:`InvariantViolation`; it signals a
    numerical-rank inconsistency between ``T`` and its Gram matrices.
    """
    tol = _tol(tol)
    m = as_matrix(t)
    ta = adjoint(m)
    direct = pseudoinverse(m, tol).pinv
    via_gram = pseudoinverse(ta @ m, tol).pinv @ ta
    via_cogram = ta @ pseudoinverse(m @ ta, tol).pinv
    if not mat_close(via_gram, direct, tol) or not mat_close(via_cogram, direct, tol):
        raise InvariantViolation(
            "pseudoinverse representations disagree"
            f" (|gram-route - direct| = {spectral_norm(via_gram - direct):.3e},"
            f" |cogram-route - direct| = {spectral_norm(via_cogram - direct):.3e});"
            " numerical rank of the Gram products is inconsistent with the source"
        )
    return via_gram

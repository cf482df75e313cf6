"""Dense complex matrix arithmetic and rank-revealing decompositions.

Everything downstream (pseudoinverse engine, hypothesis checkers, updates)
is built on the handful of primitives in this module. All functions are
pure: inputs are never mutated and results are freshly allocated.

Matrices are plain ``numpy.ndarray`` values; :func:`as_matrix` is the single
entry point that enforces the representation (2-d, positive dimensions,
finite entries, complex128).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DecompositionError,
    ShapeMismatchError,
    SingularMatrixError,
)

_EPS = float(np.finfo(np.float64).eps)


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a validated 2-d complex128 matrix.

    Real input is promoted to complex with zero imaginary part. Raises
    :class:`ShapeMismatchError` for non-2-d or empty shapes and
    ``ValueError`` for non-finite entries.
    """
    m = np.asarray(a)
    if m.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d matrix, got ndim={m.ndim}")
    rows, cols = m.shape
    if rows < 1 or cols < 1:
        raise ShapeMismatchError(f"matrix dimensions must be positive, got {m.shape}")
    m = m.astype(np.complex128)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy: rank cutoff, equality slack, strict-inequality margin.

    rank_rel
        A singular value counts as nonzero iff it exceeds
        ``rank_rel * max(rows, cols) * sigma_max``.
    eq_abs, eq_rel
        Matrices compare equal iff the spectral norm of their difference is
        at most ``eq_abs + eq_rel * max(norms)``.
    margin_strict
        Strict inequalities like ``norm < 1`` certify only below
        ``1 - margin_strict``, so borderline cases never certify a
        numerically divergent inversion.
    """

    rank_rel: float = _EPS
    eq_abs: float = 1e-10
    eq_rel: float = 1e-10
    margin_strict: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "eq_abs", "eq_rel", "margin_strict"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"Tolerances.{name} must be strictly positive")
        if self.rank_rel >= 1.0:
            raise ValueError("Tolerances.rank_rel must be < 1")
        if self.margin_strict >= 1.0:
            raise ValueError("Tolerances.margin_strict must be < 1")

    def eq(self, scale: float) -> float:
        """Absolute equality slack at the given norm scale."""
        return self.eq_abs + self.eq_rel * scale


DEFAULT_TOL = Tolerances()


def _tol(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOL if tol is None else tol


@dataclass(frozen=True)
class SvdFactors:
    """Economy singular value decomposition ``a = u @ diag(sigma) @ v*``.

    ``u`` and ``v`` have orthonormal columns; ``sigma`` is non-increasing
    and non-negative.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


def multiply(a, b) -> np.ndarray:
    """Matrix product; raises :class:`ShapeMismatchError` if inner dims differ."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape[1] != mb.shape[0]:
        raise ShapeMismatchError(
            f"cannot multiply {ma.shape} by {mb.shape}: inner dimensions differ"
        )
    return ma @ mb


def adjoint(a) -> np.ndarray:
    """Conjugate transpose. Involutive: ``adjoint(adjoint(a)) == a`` exactly."""
    return as_matrix(a).conj().T


def _svd_full(m: np.ndarray):
    try:
        return np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed to converge for shape {m.shape}: {exc}") from exc


def svd(a) -> SvdFactors:
    """Economy SVD with validated input; deterministic for identical input.

    Non-convergence raises :class:`DecompositionError` rather than returning
    garbage factors.
    """
    m = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed to converge for shape {m.shape}: {exc}") from exc
    return SvdFactors(u=u, sigma=s, v=vh.conj().T)


def singular_values(a) -> np.ndarray:
    """Singular values only (non-increasing)."""
    m = as_matrix(a)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed to converge for shape {m.shape}: {exc}") from exc


def spectral_norm(a) -> float:
    """Largest singular value; 0.0 for matrices with a zero dimension."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d matrix, got ndim={m.ndim}")
    if m.size == 0:
        return 0.0
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD failed to converge for shape {m.shape}: {exc}") from exc
    return float(s[0])


def numerical_rank(sigma: np.ndarray, shape: tuple, tol: Tolerances | None = None) -> int:
    """Rank of a matrix with the given singular values under the rank cutoff."""
    tol = _tol(tol)
    if sigma.size == 0 or sigma[0] <= 0.0:
        return 0
    cutoff = tol.rank_rel * max(shape) * float(sigma[0])
    return int(np.count_nonzero(sigma > cutoff))


def mat_close(a, b, tol: Tolerances | None = None) -> bool:
    """Spectral-norm equality test: ``|a - b| <= eq_abs + eq_rel * max(|a|, |b|)``."""
    tol = _tol(tol)
    ma = np.asarray(a, dtype=np.complex128)
    mb = np.asarray(b, dtype=np.complex128)
    if ma.shape != mb.shape:
        return False
    scale = max(spectral_norm(ma), spectral_norm(mb))
    return spectral_norm(ma - mb) <= tol.eq(scale)


def solve_square(a, b, tol: Tolerances | None = None) -> np.ndarray:
    """Solve ``a @ x = b`` for square, numerically nonsingular ``a``.

    Raises :class:`SingularMatrixError` naming the smallest singular value
    when ``a`` is singular to the rank cutoff.
    """
    tol = _tol(tol)
    ma, mb = as_matrix(a), as_matrix(b)
    n = ma.shape[0]
    if ma.shape[1] != n:
        raise ShapeMismatchError(f"solve_square needs a square matrix, got {ma.shape}")
    if mb.shape[0] != n:
        raise ShapeMismatchError(
            f"right-hand side has {mb.shape[0]} rows, expected {n}"
        )
    s = singular_values(ma)
    cutoff = tol.rank_rel * n * float(s[0]) if s[0] > 0.0 else 0.0
    smin = float(s[-1])
    if smin <= cutoff:
        raise SingularMatrixError(
            f"matrix is singular to tolerance: smallest singular value {smin:.6e}"
            f" (cutoff {cutoff:.6e})",
            smallest_sigma=smin,
        )
    return np.linalg.solve(ma, mb)


def solve_from_right(a, b, tol: Tolerances | None = None) -> np.ndarray:
    """Solve ``x @ b = a`` for square nonsingular ``b``, i.e. ``a @ inv(b)``."""
    return solve_square(np.asarray(b, dtype=np.complex128).T,
                        np.asarray(a, dtype=np.complex128).T, tol).T


def orthonormal_range_basis(a, tol: Tolerances | None = None) -> np.ndarray:
    """Orthonormal basis of the numerical column space, as matrix columns.

    Returns a ``(rows, rank)`` array; zero columns for the zero matrix.
    """
    tol = _tol(tol)
    m = as_matrix(a)
    u, s, _ = _svd_full(m)
    r = numerical_rank(s, m.shape, tol)
    return u[:, :r].copy()


def null_space_basis(a, tol: Tolerances | None = None) -> np.ndarray:
    """Orthonormal basis of the numerical null space, as matrix columns."""
    tol = _tol(tol)
    m = as_matrix(a)
    _, s, vh = _svd_full(m)
    r = numerical_rank(s, m.shape, tol)
    return vh[r:].conj().T.copy()


def _check_orthonormal(basis: np.ndarray, tol: Tolerances, label: str) -> None:
    k = basis.shape[1]
    if k == 0:
        return
    gram = basis.conj().T @ basis
    if spectral_norm(gram - np.eye(k)) > tol.eq(1.0):
        raise ValueError(f"{label} does not have orthonormal columns")


def principal_angle_gap(basis_a, basis_b, tol: Tolerances | None = None) -> float:
    """Spectral norm of the difference of the two orthogonal projections.

    Zero iff the spanned subspaces coincide; 1 for orthogonal lines. Inputs
    must have orthonormal columns (zero-column bases are allowed and span
    the trivial subspace).
    """
    tol = _tol(tol)
    ba = np.asarray(basis_a, dtype=np.complex128)
    bb = np.asarray(basis_b, dtype=np.complex128)
    if ba.ndim != 2 or bb.ndim != 2:
        raise ShapeMismatchError("bases must be 2-d arrays of column vectors")
    if ba.shape[0] != bb.shape[0]:
        raise ShapeMismatchError(
            f"bases live in different ambient spaces: {ba.shape[0]} vs {bb.shape[0]}"
        )
    _check_orthonormal(ba, tol, "first basis")
    _check_orthonormal(bb, tol, "second basis")
    n = ba.shape[0]
    pa = ba @ ba.conj().T if ba.shape[1] else np.zeros((n, n), dtype=np.complex128)
    pb = bb @ bb.conj().T if bb.shape[1] else np.zeros((n, n), dtype=np.complex128)
    return spectral_norm(pa - pb)

"""Dense matrix primitives with explicit tolerance contracts.

Everything numerically delicate (gauge fixing, degeneracy grouping,
symmetry checks) lives here so the physics modules stay policy free.
All residuals are absolute max-norm.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, SingularInput

TOL_ENV_VAR = "GAUSS_REDUCE_TOL"


@dataclass(frozen=True)
class ToleranceConfig:
    structural_tol: float = 1e-10
    degeneracy_tol: float = 1e-8

    def __post_init__(self):
        if not (self.structural_tol > 0 and self.degeneracy_tol > 0):
            raise InvalidInput("tolerances must be strictly positive")

    @classmethod
    def from_env(cls, **overrides) -> "ToleranceConfig":
        """Defaults, then ``GAUSS_REDUCE_TOL``, then explicit overrides."""
        kwargs = {}
        env = os.environ.get(TOL_ENV_VAR)
        if env:
            try:
                kwargs["structural_tol"] = float(env)
            except ValueError as exc:
                raise InvalidInput(f"{TOL_ENV_VAR}={env!r} is not a number") from exc
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


DEFAULT_TOL = ToleranceConfig()


def max_abs(M) -> float:
    M = np.asarray(M)
    return float(np.max(np.abs(M))) if M.size else 0.0


def as_matrix(M, name="matrix", square=True, dtype=complex) -> np.ndarray:
    M = np.asarray(M, dtype=dtype)
    if M.ndim != 2:
        raise InvalidInput(f"{name} must be two dimensional, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise InvalidInput(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidInput(f"{name} has non-finite entries")
    return M


def unitarity_residual(U) -> float:
    U = np.asarray(U)
    return max_abs(U @ U.conj().T - np.eye(U.shape[0]))


def is_unitary(U, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return unitarity_residual(U) <= tol.structural_tol


def group_degenerate(values, rel_tol: float) -> list[list[int]]:
    """Split a descending sequence into runs of nearly equal values.

    Neighbours belong to the same group when their gap is below
    ``rel_tol`` relative to the larger magnitude (absolute when both are
    below 1).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    groups = [[0]]
    for k in range(1, values.size):
        scale = max(1.0, abs(values[k - 1]), abs(values[k]))
        if abs(values[k - 1] - values[k]) <= rel_tol * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _fix_column_phases(U: np.ndarray, tiny: float = 1e-12) -> np.ndarray:
    """Phase factors making each column's first nonzero entry real positive."""
    phases = np.ones(U.shape[1], dtype=complex)
    for j in range(U.shape[1]):
        col = U[:, j]
        nz = np.flatnonzero(np.abs(col) > tiny)
        if nz.size:
            z = col[nz[0]]
            phases[j] = np.conj(z) / abs(z)
    return phases


def svd(M, tol: ToleranceConfig = DEFAULT_TOL):
    """Singular value decomposition ``M = U diag(sigma) V^dagger``.

    Returns ``(U, sigma, V)`` with ``sigma`` descending. Each column of
    ``U`` is rotated so its first nonzero entry is real positive; the
    matching column of ``V`` gets the same phase so the product is
    unchanged.
    """
    M = as_matrix(M, "M", square=False)
    U, sigma, Vh = np.linalg.svd(M)
    V = Vh.conj().T
    k = sigma.size
    phases = _fix_column_phases(U[:, :k])
    U = U.copy()
    U[:, :k] *= phases
    V = V.copy()
    V[:, :k] *= phases
    return U, sigma, V


def eigh_symmetric(M, tol: ToleranceConfig = DEFAULT_TOL):
    """Eigendecomposition of a real symmetric matrix, eigenvalues descending.

    Eigenvector signs are fixed so the first nonzero entry is positive.
    """
    M = as_matrix(M, "M", dtype=float)
    if max_abs(M - M.T) > tol.structural_tol:
        raise InvalidInput(f"matrix is not symmetric (residual {max_abs(M - M.T):.3g})")
    w, O = np.linalg.eigh(0.5 * (M + M.T))
    # stable on ties so degenerate blocks keep LAPACK's column order
    order = np.argsort(-w, kind="stable")
    w, O = w[order], O[:, order]
    return w, O * _fix_column_phases(O).real


def polar_decompose(S, tol: ToleranceConfig = DEFAULT_TOL):
    """Right polar decomposition ``S = O P`` of an invertible real matrix.

    ``O`` is orthogonal and ``P = (S^T S)^{1/2}`` symmetric positive definite.
    """
    S = as_matrix(S, "S", dtype=float)
    W, sigma, Zt = np.linalg.svd(S)
    if sigma[-1] <= tol.structural_tol:
        raise SingularInput(f"matrix is numerically singular (smallest singular value {sigma[-1]:.3g})")
    O = W @ Zt
    P = (Zt.T * sigma) @ Zt
    return O, 0.5 * (P + P.T)


def complete_unitary(cols: np.ndarray, n: int) -> np.ndarray:
    """Extend orthonormal columns (n x k) to an n x n unitary."""
    cols = np.asarray(cols, dtype=complex).reshape(n, -1)
    k = cols.shape[1]
    if k == n:
        return cols
    proj = np.eye(n) - cols @ cols.conj().T
    # the complement is the range of the projector
    Uc, s, _ = np.linalg.svd(proj)
    return np.hstack([cols, Uc[:, : n - k]])


def takagi(M, tol: ToleranceConfig = DEFAULT_TOL):
    """Takagi factorization ``M = W diag(d) W^T`` of a complex symmetric matrix.

    Uses the real symmetric embedding ``[[Re M, Im M], [Im M, -Re M]]``,
    whose eigenpairs ``(x, y), d`` give Takagi vectors ``x + i y``.
    Returns ``(W, d)`` with ``d`` descending.
    """
    M = as_matrix(M, "M")
    n = M.shape[0]
    if max_abs(M - M.T) > tol.structural_tol:
        raise InvalidInput(f"matrix is not symmetric (residual {max_abs(M - M.T):.3g})")
    M = 0.5 * (M + M.T)
    if n == 0:
        return np.zeros((0, 0), complex), np.zeros(0)
    P, Q = M.real, M.imag
    H = np.block([[P, Q], [Q, -P]])
    w, vecs = np.linalg.eigh(H)
    order = np.argsort(w)[::-1][:n]
    d = np.clip(w[order], 0.0, None)
    cols = vecs[:n, order] + 1j * vecs[n:, order]
    cols = cols / np.linalg.norm(cols, axis=0)

    # Zero singular values: the embedding cannot separate w from i w,
    # so rebuild that block as an orthonormal complement.
    keep = d > tol.structural_tol * max(1.0, d[0] if d.size else 0.0)
    W = complete_unitary(_orthonormalize(cols[:, keep]), n)
    d = np.concatenate([d[keep], np.zeros(n - keep.sum())])
    # only a sign is free per column (an arbitrary phase would break W d W^T)
    return W * column_signs(W), d


def column_signs(U: np.ndarray, tiny: float = 1e-12) -> np.ndarray:
    """Signs making the first non-negligible entry of each column lean positive.

    The real part decides; a purely imaginary leading entry uses its
    imaginary part.
    """
    signs = np.ones(U.shape[1])
    for j in range(U.shape[1]):
        col = U[:, j]
        nz = np.flatnonzero(np.abs(col) > tiny)
        if nz.size:
            z = col[nz[0]]
            key = z.real if abs(z.real) > tiny else z.imag
            signs[j] = -1.0 if key < 0 else 1.0
    return signs


def _orthonormalize(cols: np.ndarray) -> np.ndarray:
    """Nearest matrix with orthonormal columns (polar factor)."""
    if cols.shape[1] == 0:
        return cols
    Uc, _, Vh = np.linalg.svd(cols, full_matrices=False)
    return Uc @ Vh


def closest_unitary(M: np.ndarray) -> np.ndarray:
    return _orthonormalize(np.asarray(M, dtype=complex))

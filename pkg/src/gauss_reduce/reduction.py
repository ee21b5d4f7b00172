"""Bloch-Messiah reduction: ``A = U cosh(r) V^dagger``, ``B = U sinh(r) V^T``.

The factorization is computed on the real symplectic image ``S`` of the
transform. ``S = O P`` (polar); the positive symplectic factor ``P`` has
eigenvalues ``e^{r}``/``e^{-r}`` in partner pairs whose eigenvectors are
related by the symplectic form, which gives an orthogonal-symplectic
eigenbasis ``K`` with ``P = K diag(e^r, e^-r) K^T``. Orthogonal-symplectic
matrices ``[[X, -Y], [Y, X]]`` are the unitaries ``X + iY``, so
``V = X_K + i Y_K`` and ``U = (O K)`` read as a unitary.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bogoliubov import GaussianTransform, require_valid, to_real_symplectic, transform_distance
from .errors import InvalidInput, NumericalFailure
from .kernels import (
    DEFAULT_TOL,
    ToleranceConfig,
    closest_unitary,
    column_signs,
    complete_unitary,
    eigh_symmetric,
    group_degenerate,
    polar_decompose,
    svd,
    unitarity_residual,
)


@dataclass(frozen=True, eq=False)
class BlochMessiahForm:
    U: np.ndarray
    V: np.ndarray
    r: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        U = np.asarray(self.U, dtype=complex)
        V = np.asarray(self.V, dtype=complex)
        r = np.asarray(self.r, dtype=float)
        beta = np.zeros(r.size, complex) if self.beta is None else np.asarray(self.beta, dtype=complex)
        n = r.size
        if U.shape != (n, n) or V.shape != (n, n) or beta.shape != (n,):
            raise InvalidInput(f"inconsistent shapes U{U.shape} V{V.shape} r({n},) beta{beta.shape}")
        for name, value in (("U", U), ("V", V), ("r", r), ("beta", beta)):
            object.__setattr__(self, name, value)

    @property
    def n_modes(self) -> int:
        return self.r.size

    @property
    def A_D(self) -> np.ndarray:
        return np.diag(np.cosh(self.r))

    @property
    def B_D(self) -> np.ndarray:
        return np.diag(np.sinh(self.r))

    def check(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        for name, M in (("U", self.U), ("V", self.V)):
            res = unitarity_residual(M)
            if res > tol.structural_tol:
                raise InvalidInput(f"{name} is not unitary (residual {res:.3g})")
        if np.any(self.r < 0) or np.any(np.diff(self.r) > 0):
            raise InvalidInput("r must be non-negative and sorted descending")
        if not np.all(np.isfinite(self.r)):
            raise InvalidInput("r must be finite")


def recompose(form: BlochMessiahForm, tol: ToleranceConfig = DEFAULT_TOL) -> GaussianTransform:
    form.check(tol)
    U, V, r = form.U, form.V, form.r
    return GaussianTransform(
        (U * np.cosh(r)) @ V.conj().T,
        (U * np.sinh(r)) @ V.T,
        form.beta,
    )


def _orthogonal_symplectic_to_unitary(K: np.ndarray) -> np.ndarray:
    n = K.shape[0] // 2
    X = 0.5 * (K[:n, :n] + K[n:, n:])
    Y = 0.5 * (K[n:, :n] - K[:n, n:])
    return X + 1j * Y


def _fix_gauge(U, V, r, tol: ToleranceConfig):
    """Canonical representative of the residual freedom.

    For a degenerate block with r > 0 the freedom is ``U -> U W``,
    ``V -> V W`` with real orthogonal ``W``; it is fixed by diagonalizing
    the Gram matrix of the block's real part. For the r = 0 block the
    freedom is any unitary ``W``, chosen so that block of ``V`` is lower
    trapezoidal with positive diagonal (``V = I`` for passive transforms).
    Column signs then follow the lean-positive rule.
    """
    U, V = U.copy(), V.copy()
    zero = r == 0.0
    for group in group_degenerate(np.cosh(r), tol.degeneracy_tol):
        idx = np.asarray(group)
        if zero[idx[0]] or idx.size < 2:
            continue
        X = U[:, idx].real
        _, W = np.linalg.eigh(X.T @ X)
        W = W[:, ::-1]
        U[:, idx] = U[:, idx] @ W
        V[:, idx] = V[:, idx] @ W
    if zero.any():
        idx = np.flatnonzero(zero)
        Q, R = np.linalg.qr(V[:, idx].conj().T)
        # V_blk Q = R^dagger is lower trapezoidal; rotate its diagonal real positive
        d = np.diagonal(R)
        ph = np.where(np.abs(d) > 0, d / np.where(np.abs(d) > 0, np.abs(d), 1.0), 1.0)
        W = Q * ph
        U[:, idx] = U[:, idx] @ W
        V[:, idx] = V[:, idx] @ W
    signs = column_signs(U)
    signs[zero] = 1.0
    return U * signs, V * signs


def reduce(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> BlochMessiahForm:
    """Factor a valid transform into multiport V^dagger, squeezers r, multiport U.

    ``r`` is canonical; ``U`` and ``V`` are one valid witness, fixed by a
    deterministic gauge rule when ``r`` is degenerate. The displacement is
    carried through untouched.
    """
    require_valid(T, tol)
    n = T.n_modes
    S = to_real_symplectic(T, tol)
    O, P = polar_decompose(S, tol)
    lam, vecs = eigh_symmetric(P, tol)

    # partner eigenvalues e^{r} and e^{-r} sit at mirrored positions
    partner = lam * lam[::-1]
    mismatch = float(np.max(np.abs(partner - 1.0)))
    if mismatch > tol.degeneracy_tol:
        raise NumericalFailure(f"symplectic eigenvalue pairing failed (|lambda lambda' - 1| = {mismatch:.3g})",
                               residual=mismatch)
    r = 0.5 * (np.log(lam[:n]) - np.log(lam[::-1][:n]))
    r = np.where(r < tol.structural_tol, 0.0, r)

    # x-columns of K are the e^{r} eigenvectors (x; y); as unitary columns they read x + i y
    active = r > 0.0
    cols = vecs[:n, :n][:, active] + 1j * vecs[n:, :n][:, active]
    # near-degenerate partners can leak into each other; snap back to orthonormal
    cols = closest_unitary(cols) if cols.shape[1] else cols
    Vmat = complete_unitary(cols, n)

    # O K read as a unitary: U = U_O V
    U = _orthogonal_symplectic_to_unitary(O) @ Vmat
    U, Vmat = _fix_gauge(U, Vmat, r, tol)
    form = BlochMessiahForm(U, Vmat, r, T.beta)

    residual = transform_distance(recompose(form, tol), T)
    if residual > 10 * tol.structural_tol:
        raise NumericalFailure(f"reduction residual {residual:.3g} exceeds {10 * tol.structural_tol:.3g}",
                               residual=residual)
    return form


def squeeze_spectrum(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Sorted squeezing parameters, ``arcsinh`` of the singular values of B.

    ``arcsinh`` is used instead of the equivalent ``arccosh`` of the
    singular values of A because it stays well conditioned near r = 0.
    """
    require_valid(T, tol)
    _, sigma_b, _ = svd(T.B, tol)
    return np.arcsinh(sigma_b)


def spectrum_from_A(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    _, sigma_a, _ = svd(T.A, tol)
    return np.arccosh(np.maximum(sigma_a, 1.0))


def squeezer_count(T: GaussianTransform, threshold: float, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    if not threshold > 0:
        raise InvalidInput("threshold must be positive")
    return int(np.sum(squeeze_spectrum(T, tol) > threshold))


def squeezing_db(r) -> np.ndarray:
    """Quadrature-variance ratio ``10 log10(e^{2r})``."""
    return 20.0 * np.asarray(r, dtype=float) / np.log(10.0)

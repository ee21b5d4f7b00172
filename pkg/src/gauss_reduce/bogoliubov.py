"""Linear Bogoliubov transformations ``b = A a + B a^dagger + beta``.

Quadrature convention (fixed for the whole package): ``x = (a + a^dagger)/sqrt(2)``,
``p = -i (a - a^dagger)/sqrt(2)``, ordered ``(x_1..x_n, p_1..p_n)``; the
symplectic form is ``Omega = [[0, I], [-I, 0]]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .errors import InvalidInput
from .kernels import DEFAULT_TOL, ToleranceConfig, as_matrix, max_abs


@dataclass(frozen=True, eq=False)
class GaussianTransform:
    """Coefficient matrices of ``b_j = sum_k (A_jk a_k + B_jk a_k^dagger) + beta_j``."""

    A: np.ndarray
    B: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        n = A.shape[0]
        beta = np.zeros(n, complex) if self.beta is None else np.asarray(self.beta, dtype=complex)
        if B.shape != A.shape:
            raise InvalidInput(f"A is {A.shape} but B is {B.shape}")
        if beta.shape != (n,):
            raise InvalidInput(f"beta must have length {n}, got shape {beta.shape}")
        if not np.all(np.isfinite(beta)):
            raise InvalidInput("beta has non-finite entries")
        for name, value in (("A", A), ("B", B), ("beta", beta)):
            value = value.copy()
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_modes(self) -> int:
        return self.A.shape[0]

    @classmethod
    def identity(cls, n: int) -> "GaussianTransform":
        return cls(np.eye(n, dtype=complex), np.zeros((n, n), complex), np.zeros(n, complex))

    @property
    def is_passive(self) -> bool:
        return not np.any(self.B)

    def without_displacement(self) -> "GaussianTransform":
        return GaussianTransform(self.A, self.B, np.zeros(self.n_modes, complex))

    def __repr__(self):
        return f"GaussianTransform(n_modes={self.n_modes})"


@dataclass(frozen=True)
class ValidationReport:
    """Max residuals of the four commutator-preservation conditions."""

    rel1: float  # A B^T symmetric
    rel2: float  # A A^dagger = B B^dagger + I
    rel3: float  # A^dagger B symmetric
    rel4: float  # A^dagger A = (B^dagger B)^T + I
    structural_tol: float

    @property
    def max_residual(self) -> float:
        return max(self.rel1, self.rel2, self.rel3, self.rel4)

    @property
    def valid(self) -> bool:
        return self.max_residual <= self.structural_tol

    def as_dict(self) -> dict:
        return {"rel1": self.rel1, "rel2": self.rel2, "rel3": self.rel3, "rel4": self.rel4,
                "max_residual": self.max_residual, "valid": self.valid}


def validate(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> ValidationReport:
    A, B = T.A, T.B
    I = np.eye(T.n_modes)
    ABt = A @ B.T
    AhB = A.conj().T @ B
    return ValidationReport(
        rel1=max_abs(ABt - ABt.T),
        rel2=max_abs(A @ A.conj().T - B @ B.conj().T - I),
        rel3=max_abs(AhB - AhB.T),
        rel4=max_abs(A.conj().T @ A - (B.conj().T @ B).T - I),
        structural_tol=tol.structural_tol,
    )


def require_valid(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> None:
    report = validate(T, tol)
    if not report.valid:
        raise InvalidInput(
            f"transform violates the canonical commutation constraints "
            f"(max residual {report.max_residual:.3g} > {tol.structural_tol:.3g})"
        )


def _check_same_size(T1: GaussianTransform, T2: GaussianTransform) -> None:
    if T1.n_modes != T2.n_modes:
        raise InvalidInput(f"mode-count mismatch: {T1.n_modes} vs {T2.n_modes}")


def compose(second: GaussianTransform, first: GaussianTransform) -> GaussianTransform:
    """Apply ``first`` then ``second``."""
    _check_same_size(second, first)
    A1, B1, b1 = first.A, first.B, first.beta
    A2, B2, b2 = second.A, second.B, second.beta
    return GaussianTransform(
        A2 @ A1 + B2 @ B1.conj(),
        A2 @ B1 + B2 @ A1.conj(),
        b2 + A2 @ b1 + B2 @ b1.conj(),
    )


def compose_all(transforms, n: int | None = None) -> GaussianTransform:
    """Compose a time-ordered sequence (first element acts first)."""
    transforms = list(transforms)
    if not transforms:
        if n is None:
            raise InvalidInput("empty sequence needs an explicit mode count")
        return GaussianTransform.identity(n)
    out = transforms[0]
    for T in transforms[1:]:
        out = compose(T, out)
    return out


def inverse(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> GaussianTransform:
    require_valid(T, tol)
    Ah = T.A.conj().T
    return GaussianTransform(Ah, -T.B.T, -Ah @ T.beta + T.B.T @ T.beta.conj())


def symplectic_form(n: int) -> np.ndarray:
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def symplectic_residual(S) -> float:
    S = np.asarray(S, dtype=float)
    Om = symplectic_form(S.shape[0] // 2)
    return max_abs(S @ Om @ S.T - Om)


def to_real_symplectic(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    require_valid(T, tol)
    P, M = T.A + T.B, T.A - T.B
    return np.block([[P.real, -M.imag], [P.imag, M.real]])


def from_real_symplectic(S, tol: ToleranceConfig = DEFAULT_TOL) -> GaussianTransform:
    S = as_matrix(S, "S", dtype=float)
    if S.shape[0] % 2:
        raise InvalidInput(f"symplectic matrix must have even size, got {S.shape}")
    res = symplectic_residual(S)
    if res > tol.structural_tol:
        raise InvalidInput(f"matrix is not symplectic (residual {res:.3g})")
    n = S.shape[0] // 2
    Sxx, Sxp, Spx, Spp = S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]
    A = 0.5 * ((Sxx + Spp) + 1j * (Spx - Sxp))
    B = 0.5 * ((Sxx - Spp) + 1j * (Spx + Sxp))
    return GaussianTransform(A, B, np.zeros(n, complex))


def transform_distance(T1: GaussianTransform, T2: GaussianTransform) -> float:
    _check_same_size(T1, T2)
    return max(max_abs(T1.A - T2.A), max_abs(T1.B - T2.B), max_abs(T1.beta - T2.beta))


def random_transform(n: int, max_r: float, seed: int) -> GaussianTransform:
    """Haar multiport, independent squeezers with r ~ U[0, max_r], Haar multiport."""
    if n < 1:
        raise InvalidInput("n must be at least 1")
    if max_r < 0:
        raise InvalidInput("max_r must be non-negative")
    rng = np.random.default_rng(seed)
    U, V = _haar(n, rng), _haar(n, rng)
    r = rng.uniform(0.0, max_r, size=n)
    return from_components(U, r, V)


def _haar(n: int, rng) -> np.ndarray:
    if n == 1:
        return np.exp(2j * np.pi * rng.uniform(size=(1, 1)))
    return unitary_group.rvs(n, random_state=rng)


def from_components(U, r, V, beta=None) -> GaussianTransform:
    """``multiport(U) . squeezers(r) . multiport(V)`` with ``V`` applied first."""
    r = np.asarray(r, dtype=float)
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    return GaussianTransform(
        (U * np.cosh(r)) @ V,
        (U * np.sinh(r)) @ V.conj(),
        np.zeros(r.size, complex) if beta is None else beta,
    )

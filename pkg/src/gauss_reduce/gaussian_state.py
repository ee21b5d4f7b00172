"""Pure zero-displacement Gaussian states and their truncated Fock expansion.

A state is ``exp(1/2 sum_jk Bmat_jk b_j^dagger b_k^dagger)|0>``, stored
unnormalized (vacuum amplitude 1). Fock vectors are truncated by total
photon number.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm, logm
from scipy.sparse.linalg import expm_multiply

from .bogoliubov import GaussianTransform, require_valid
from .elements import Circuit
from .errors import InvalidInput, UnsupportedInput
from .kernels import DEFAULT_TOL, ToleranceConfig, as_matrix, max_abs, takagi
from .reduction import reduce


@dataclass(frozen=True, eq=False)
class PureGaussianState:
    Bmat: np.ndarray
    modes: tuple = None  # labels of the physical modes, in Bmat order

    def __post_init__(self):
        B = np.asarray(self.Bmat, dtype=complex)
        if B.size == 0:
            B = np.zeros((0, 0), complex)
        B = as_matrix(B, "Bmat")
        modes = tuple(range(B.shape[0])) if self.modes is None else tuple(int(m) for m in self.modes)
        if len(modes) != B.shape[0]:
            raise InvalidInput(f"{len(modes)} mode labels for a {B.shape[0]}-mode state")
        object.__setattr__(self, "Bmat", B)
        object.__setattr__(self, "modes", modes)

    @property
    def n_modes(self) -> int:
        return self.Bmat.shape[0]

    def check(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        if self.n_modes == 0:
            return
        _, d = takagi(self.Bmat, tol)
        if d[0] >= 1.0:
            raise InvalidInput(f"state is not normalizable (largest Takagi value {d[0]:.6g} >= 1)")


@dataclass
class ConditionedState:
    """``(sum_m coeffs[m] b_m^dagger) |base>``, unnormalized."""

    base: PureGaussianState
    coeffs: np.ndarray
    click_mode: int
    detected_vacuum: tuple
    null: bool = False

    @property
    def modes(self) -> tuple:
        return self.base.modes


class FockBasis:
    """Occupation tuples with total photon number <= cutoff, in lexicographic order."""

    def __init__(self, n_modes: int, cutoff: int):
        if cutoff < 0:
            raise InvalidInput("cutoff must be non-negative")
        self.n_modes = n_modes
        self.cutoff = cutoff
        self.states = [t for t in itertools.product(range(cutoff + 1), repeat=n_modes) if sum(t) <= cutoff]
        self.index = {t: k for k, t in enumerate(self.states)}
        self.totals = np.array([sum(t) for t in self.states], dtype=int)

    def __len__(self):
        return len(self.states)

    @functools.cached_property
    def _creators(self) -> list[sp.csr_matrix]:
        ops = []
        dim = len(self)
        for m in range(self.n_modes):
            rows, cols, vals = [], [], []
            for k, t in enumerate(self.states):
                if sum(t) < self.cutoff:
                    up = t[:m] + (t[m] + 1,) + t[m + 1:]
                    rows.append(self.index[up])
                    cols.append(k)
                    vals.append(np.sqrt(t[m] + 1))
            ops.append(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=complex))
        return ops

    def create(self, m: int) -> sp.csr_matrix:
        return self._creators[m]

    def destroy(self, m: int) -> sp.csr_matrix:
        return self._creators[m].conj().T.tocsr()


@functools.lru_cache(maxsize=32)
def fock_basis(n_modes: int, cutoff: int) -> FockBasis:
    return FockBasis(n_modes, cutoff)


@dataclass
class FockVector:
    n_modes: int
    cutoff: int
    vector: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.vector = np.asarray(self.vector, dtype=complex)
        if self.vector.shape != (len(self.basis),):
            raise InvalidInput(f"vector length {self.vector.shape} does not match the basis ({len(self.basis)})")
        if not np.all(np.isfinite(self.vector)):
            raise InvalidInput("amplitudes must be finite")

    @property
    def basis(self) -> FockBasis:
        return fock_basis(self.n_modes, self.cutoff)

    @property
    def amplitudes(self) -> dict:
        return dict(zip(self.basis.states, self.vector))

    def amplitude(self, occupation: Sequence[int]) -> complex:
        k = self.basis.index.get(tuple(occupation))
        return 0j if k is None else complex(self.vector[k])

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def normalized(self) -> "FockVector":
        nrm = self.norm()
        if nrm == 0:
            raise InvalidInput("cannot normalize a zero vector")
        return FockVector(self.n_modes, self.cutoff, self.vector / nrm)

    def truncate(self, cutoff: int) -> "FockVector":
        if cutoff > self.cutoff:
            raise InvalidInput("cannot raise the cutoff of a truncated vector")
        small = fock_basis(self.n_modes, cutoff)
        big = self.basis
        return FockVector(self.n_modes, cutoff, self.vector[[big.index[t] for t in small.states]])

    def dumps(self) -> str:
        """One line ``n_1 .. n_k re im`` per occupation tuple, lexicographic order."""
        lines = []
        for t, z in zip(self.basis.states, self.vector):
            occ = " ".join(str(x) for x in t)
            lines.append(f"{occ} {z.real:.17g} {z.imag:.17g}".lstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "FockVector":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        n = len(rows[0]) - 2
        cutoff = max(sum(int(x) for x in row[:n]) for row in rows)
        basis = fock_basis(n, cutoff)
        vec = np.zeros(len(basis), complex)
        for row in rows:
            vec[basis.index[tuple(int(x) for x in row[:n])]] = float(row[n]) + 1j * float(row[n + 1])
        return cls(n, cutoff, vec)


def overlap(f1: FockVector, f2: FockVector) -> complex:
    """``<f1|f2>`` after normalizing both within the truncated space."""
    if (f1.n_modes, f1.cutoff) != (f2.n_modes, f2.cutoff):
        raise InvalidInput("overlap needs vectors with equal mode count and cutoff")
    return complex(np.vdot(f1.normalized().vector, f2.normalized().vector))


def evolve_vacuum(T: GaussianTransform, tol: ToleranceConfig = DEFAULT_TOL) -> PureGaussianState:
    """Output state of ``T`` on vacuum: ``Bmat = U diag(tanh r) U^T``.

    The input multiport V^dagger leaves the vacuum invariant, so only U and r matter.
    """
    if np.any(T.beta):
        raise UnsupportedInput("displaced transforms are not supported; factor the displacement off first")
    require_valid(T, tol)
    form = reduce(T, tol)
    Bmat = (form.U * np.tanh(form.r)) @ form.U.T
    state = PureGaussianState(0.5 * (Bmat + Bmat.T))
    state.check(tol)
    return state


def _pair_operator(basis: FockBasis, Bmat: np.ndarray) -> sp.csr_matrix:
    """``1/2 sum_jk Bmat_jk a_j^dagger a_k^dagger`` on the truncated space."""
    n = basis.n_modes
    op = sp.csr_matrix((len(basis), len(basis)), dtype=complex)
    for j in range(n):
        for k in range(n):
            if Bmat[j, k] != 0:
                op = op + 0.5 * Bmat[j, k] * (basis.create(j) @ basis.create(k))
    return op


def fock_amplitudes(state: PureGaussianState, cutoff: int) -> FockVector:
    """Power series of the pair-creation exponential on vacuum, up to ``cutoff`` photons."""
    basis = fock_basis(state.n_modes, cutoff)
    psi = np.zeros(len(basis), complex)
    psi[basis.index[(0,) * state.n_modes]] = 1.0
    if state.n_modes == 0:
        return FockVector(0, cutoff, psi)
    Q = _pair_operator(basis, state.Bmat)
    term = psi.copy()
    for k in range(1, cutoff // 2 + 1):
        term = (Q @ term) / k
        psi = psi + term
    return FockVector(state.n_modes, cutoff, psi)


def _check_subset(state: PureGaussianState, modes: Iterable[int]) -> list[int]:
    modes = [int(m) for m in modes]
    unknown = set(modes) - set(state.modes)
    if unknown:
        raise InvalidInput(f"modes {sorted(unknown)} are not in the state (has {list(state.modes)})")
    return modes


def project_vacuum(state: PureGaussianState, detected: Iterable[int]) -> PureGaussianState:
    """``<0_det|psi>``: keep the principal submatrix on the undetected modes.

    Detecting every mode leaves the zero-mode state, i.e. the scalar overlap 1.
    """
    detected = set(_check_subset(state, detected))
    keep = [k for k, m in enumerate(state.modes) if m not in detected]
    return PureGaussianState(state.Bmat[np.ix_(keep, keep)], tuple(state.modes[k] for k in keep))


def condition_single_photon(state: PureGaussianState, detected_vacuum: Iterable[int], click_mode: int,
                            tol: ToleranceConfig = DEFAULT_TOL) -> ConditionedState:
    """One photon in ``click_mode`` and none in ``detected_vacuum``."""
    detected_vacuum = tuple(_check_subset(state, detected_vacuum))
    (click_mode,) = _check_subset(state, [click_mode])
    if click_mode in detected_vacuum:
        raise InvalidInput(f"click mode {click_mode} is also listed as detecting vacuum")
    base = project_vacuum(state, set(detected_vacuum) | {click_mode})
    row = state.modes.index(click_mode)
    cols = [state.modes.index(m) for m in base.modes]
    coeffs = state.Bmat[row, cols].copy()
    null = max_abs(coeffs) <= tol.structural_tol
    return ConditionedState(base, coeffs, click_mode, detected_vacuum, null)


def conditioned_fock(cond: ConditionedState, cutoff: int) -> FockVector:
    """Fock expansion of the analytic single-excitation form."""
    base = fock_amplitudes(cond.base, cutoff)
    basis = base.basis
    out = np.zeros(len(basis), complex)
    for k, c in enumerate(cond.coeffs):
        if c != 0:
            out += c * (basis.create(k) @ base.vector)
    return FockVector(cond.base.n_modes, cutoff, out)


def brute_force_conditioned(full: FockVector, modes: Sequence[int], detected_vacuum: Sequence[int],
                            click_mode: int) -> FockVector:
    """Annihilate ``click_mode`` then keep only amplitudes with no photons in detected modes.

    ``modes`` labels the axes of ``full``. Exact for totals up to ``full.cutoff - 1``.
    """
    modes = list(modes)
    basis = full.basis
    lowered = basis.destroy(modes.index(click_mode)) @ full.vector
    gone = {modes.index(m) for m in detected_vacuum} | {modes.index(click_mode)}
    keep = [k for k in range(len(modes)) if k not in gone]
    cutoff = full.cutoff - 1
    small = fock_basis(len(keep), cutoff)
    out = np.zeros(len(small), complex)
    for idx, t in enumerate(basis.states):
        if sum(t) <= cutoff and all(t[g] == 0 for g in gone):
            out[small.index[tuple(t[k] for k in keep)]] = lowered[idx]
    return FockVector(len(keep), cutoff, out)


@dataclass
class StructureReport:
    coeffs: np.ndarray
    base_matrix: np.ndarray
    modes: tuple
    null: bool
    discrepancy: float  # max |analytic - brute force| after normalization
    fit_residual: float  # brute-force distance from span{b_m^dagger |base>}
    fitted_coeffs: np.ndarray
    confirmed: bool
    cutoff: int
    one_photon_weight: float = 0.0  # probability of exactly one photon in the conditioned state

    def as_dict(self) -> dict:
        from .serialization import encode_complex

        return {
            "modes": list(self.modes),
            "coeffs": encode_complex(self.coeffs),
            "fitted_coeffs": encode_complex(self.fitted_coeffs),
            "base_matrix": encode_complex(self.base_matrix),
            "null": self.null,
            "discrepancy": self.discrepancy,
            "fit_residual": self.fit_residual,
            "confirmed": self.confirmed,
            "cutoff": self.cutoff,
            "one_photon_weight": self.one_photon_weight,
        }


def verify_single_excitation_structure(T: GaussianTransform, detected_vacuum: Iterable[int], click_mode: int,
                                       cutoff: int, atol: float = 1e-6,
                                       tol: ToleranceConfig = DEFAULT_TOL) -> StructureReport:
    """Compare the analytic conditioned state with a brute-force Fock computation.

    The brute-force route expands the full output state, applies the
    annihilator of the click mode and projects the detected modes on
    vacuum. It is then least-squares fitted onto single creation
    operators acting on the projected Gaussian; a vanishing fit residual
    means the conditioned state holds exactly one extra excitation.
    """
    if cutoff < 2:
        raise InvalidInput("cutoff must be at least 2")
    state = evolve_vacuum(T, tol)
    detected_vacuum = tuple(_check_subset(state, detected_vacuum))
    cond = condition_single_photon(state, detected_vacuum, click_mode, tol)

    brute = brute_force_conditioned(fock_amplitudes(state, cutoff), state.modes, detected_vacuum, click_mode)
    analytic = conditioned_fock(cond, cutoff - 1)

    base = fock_amplitudes(cond.base, cutoff - 1)
    basis = base.basis
    columns = np.column_stack([basis.create(k) @ base.vector for k in range(cond.base.n_modes)]) \
        if cond.base.n_modes else np.zeros((len(basis), 0), complex)

    bnorm = brute.norm()
    scale = max(bnorm, analytic.norm())
    if scale <= tol.structural_tol:
        # no first-order click amplitude on either route
        return StructureReport(cond.coeffs, cond.base.Bmat, cond.modes, True, 0.0, 0.0,
                               np.zeros_like(cond.coeffs), cond.null, cutoff)
    if columns.shape[1]:
        fitted, *_ = np.linalg.lstsq(columns, brute.vector, rcond=None)
        fit_residual = float(np.linalg.norm(columns @ fitted - brute.vector) / bnorm)
    else:
        fitted = np.zeros(0, complex)
        fit_residual = 1.0
    if analytic.norm() == 0 or bnorm == 0:
        discrepancy = 1.0
    else:
        discrepancy = max_abs(analytic.normalized().vector - brute.normalized().vector)
    confirmed = discrepancy < atol and fit_residual < atol
    weight = 0.0
    if analytic.norm() > 0:
        probs = np.abs(analytic.normalized().vector) ** 2
        weight = float(probs[analytic.basis.totals == 1].sum())
    return StructureReport(cond.coeffs, cond.base.Bmat, cond.modes, cond.null, discrepancy, fit_residual,
                           fitted, confirmed, cutoff, weight)


# ---------------------------------------------------------------------------
# Direct circuit simulation on a truncated Fock space (independent oracle)


def _quadrature_ops(basis: FockBasis, m: int):
    a, ad = basis.destroy(m), basis.create(m)
    return (a + ad) / np.sqrt(2), -1j * (a - ad) / np.sqrt(2)


def element_generator(el, n: int, basis: FockBasis) -> sp.csr_matrix:
    """Anti-Hermitian ``G`` with ``e^{-G} a e^{G}`` equal to the element's Bogoliubov map."""
    kind, modes, p = el.kind, el.modes, el.params
    c, d = basis.create, basis.destroy
    if kind == "squeezer":
        m, r, phi = modes[0], p["r"], p.get("phi", 0.0)
        return 0.5 * r * (np.exp(1j * phi) * (c(m) @ c(m)) - np.exp(-1j * phi) * (d(m) @ d(m)))
    if kind == "two_mode_downconverter":
        i, j = modes
        return p["r"] * (c(i) @ c(j) - d(i) @ d(j))
    if kind == "four_mode_downconverter":
        m1, m2, m3, m4 = modes
        r = p["r"]
        return r * (c(m1) @ c(m2) - d(m1) @ d(m2) + c(m3) @ c(m4) - d(m3) @ d(m4))
    if kind == "qnd_coupler":
        x1, _ = _quadrature_ops(basis, modes[0])
        _, p2 = _quadrature_ops(basis, modes[1])
        return -1j * (x1 @ p2)
    if kind == "displacement":
        raise UnsupportedInput("displacements are not simulated")
    # passive: generator sum_jk L_jk a_j^dagger a_k with e^L = U
    U = el.to_transform(n).A
    L = logm(U)
    if max_abs(expm(L) - U) > 1e-10:
        raise UnsupportedInput("matrix logarithm of the passive element is inaccurate")
    G = sp.csr_matrix((len(basis), len(basis)), dtype=complex)
    for j, k in zip(*np.nonzero(np.abs(L) > 1e-15)):
        G = G + L[j, k] * (c(j) @ d(k))
    return G


def simulate_circuit(circuit: Circuit, cutoff: int, internal_cutoff: int | None = None) -> FockVector:
    """Propagate vacuum through each element's exponential on a truncated Fock space.

    Truncation at ``internal_cutoff`` (total photons) perturbs the low
    photon amplitudes only through leakage from the boundary, so it
    should sit well above ``cutoff``. Returns the normalized amplitudes
    up to ``cutoff``.
    """
    n = circuit.n_modes
    big = fock_basis(n, internal_cutoff if internal_cutoff is not None else cutoff + 24)
    psi = np.zeros(len(big), complex)
    psi[big.index[(0,) * n]] = 1.0
    for el in circuit.elements:
        psi = expm_multiply(element_generator(el, n, big).tocsc(), psi)
    return FockVector(n, big.cutoff, psi).truncate(cutoff).normalized()

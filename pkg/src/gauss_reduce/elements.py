"""Primitive optical elements and declarative circuits.

Phase conventions (the physics leaves them free, these are fixed here):

* squeezer: ``b = cosh(r) a + e^{i phi} sinh(r) a^dagger``
* beamsplitter on modes (i, j): ``[[cos t, -e^{i phi} sin t], [e^{-i phi} sin t, cos t]]``,
  energy transmission ``cos^2 t``
* permutation: ``b_i = a_{perm[i]}`` (a polarizing beam splitter is a pure relabelling)

With these, ``BS(pi/4, 0) . [S(r) x S(-r)] . BS(pi/4, pi)`` equals the two-mode
down-converter exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .bogoliubov import GaussianTransform, compose
from .errors import InvalidInput
from .kernels import DEFAULT_TOL, ToleranceConfig, as_matrix, unitarity_residual

ELEMENT_KINDS = (
    "squeezer",
    "two_mode_downconverter",
    "four_mode_downconverter",
    "beamsplitter",
    "phase_shifter",
    "multiport",
    "permutation",
    "displacement",
    "qnd_coupler",
)

_ARITY = {
    "squeezer": 1,
    "two_mode_downconverter": 2,
    "four_mode_downconverter": 4,
    "beamsplitter": 2,
    "phase_shifter": 1,
    "qnd_coupler": 2,
}


def _check_modes(n: int, modes: Sequence[int], count: int | None = None) -> list[int]:
    modes = [int(m) for m in modes]
    if count is not None and len(modes) != count:
        raise InvalidInput(f"expected {count} mode indices, got {len(modes)}")
    if len(set(modes)) != len(modes):
        raise InvalidInput(f"mode indices must be distinct, got {modes}")
    for m in modes:
        if not 0 <= m < n:
            raise InvalidInput(f"mode index {m} outside [0, {n})")
    return modes


def _check_finite(**params) -> None:
    for name, value in params.items():
        if not np.all(np.isfinite(value)):
            raise InvalidInput(f"{name} must be finite, got {value}")


def embed(n: int, modes: Sequence[int], A_local, B_local=None) -> GaussianTransform:
    """Act with a k-mode (A, B) block on ``modes``; identity elsewhere."""
    idx = np.asarray(modes, dtype=int)
    A = np.eye(n, dtype=complex)
    B = np.zeros((n, n), complex)
    A[np.ix_(idx, idx)] = A_local
    if B_local is not None:
        B[np.ix_(idx, idx)] = B_local
    return GaussianTransform(A, B, np.zeros(n, complex))


def squeezer(n: int, mode: int, r: float, phi: float = 0.0) -> GaussianTransform:
    (mode,) = _check_modes(n, [mode], 1)
    _check_finite(r=r, phi=phi)
    return embed(n, [mode], [[np.cosh(r)]], [[np.exp(1j * phi) * np.sinh(r)]])


def squeezers(r: Sequence[float]) -> GaussianTransform:
    """Parallel single-mode squeezers, one per mode."""
    r = np.asarray(r, dtype=float)
    _check_finite(r=r)
    n = r.size
    return GaussianTransform(np.diag(np.cosh(r)).astype(complex), np.diag(np.sinh(r)).astype(complex),
                             np.zeros(n, complex))


def two_mode_downconverter(n: int, mode_i: int, mode_j: int, r: float) -> GaussianTransform:
    modes = _check_modes(n, [mode_i, mode_j], 2)
    _check_finite(r=r)
    c, s = np.cosh(r), np.sinh(r)
    return embed(n, modes, [[c, 0], [0, c]], [[0, s], [s, 0]])


def four_mode_downconverter(n: int, modes: Sequence[int], r: float) -> GaussianTransform:
    """Equal-strength pair creation on (m1, m2) and (m3, m4)."""
    m1, m2, m3, m4 = _check_modes(n, modes, 4)
    _check_finite(r=r)
    c, s = np.cosh(r), np.sinh(r)
    A = c * np.eye(4)
    B = np.zeros((4, 4))
    B[0, 1] = B[1, 0] = B[2, 3] = B[3, 2] = s
    return embed(n, [m1, m2, m3, m4], A, B)


def beamsplitter_block(theta: float, phi: float = 0.0) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -np.exp(1j * phi) * s], [np.exp(-1j * phi) * s, c]])


def beamsplitter(n: int, mode_i: int, mode_j: int, theta: float, phi: float = 0.0) -> GaussianTransform:
    modes = _check_modes(n, [mode_i, mode_j], 2)
    _check_finite(theta=theta, phi=phi)
    return embed(n, modes, beamsplitter_block(theta, phi))


def phase_shifter(n: int, mode: int, phi: float) -> GaussianTransform:
    (mode,) = _check_modes(n, [mode], 1)
    _check_finite(phi=phi)
    return embed(n, [mode], [[np.exp(1j * phi)]])


def multiport(n: int, U, modes: Sequence[int] | None = None,
              tol: ToleranceConfig = DEFAULT_TOL) -> GaussianTransform:
    """Passive interferometer ``b = U a`` on ``modes`` (all modes by default)."""
    U = as_matrix(U, "U")
    modes = list(range(n)) if modes is None or len(modes) == 0 else modes
    modes = _check_modes(n, modes, U.shape[0])
    res = unitarity_residual(U)
    if res > tol.structural_tol:
        raise InvalidInput(f"multiport matrix is not unitary (residual {res:.3g})")
    return embed(n, modes, U)


def permutation(n: int, perm: Sequence[int]) -> GaussianTransform:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise InvalidInput(f"{perm} is not a permutation of range({n})")
    A = np.zeros((n, n), complex)
    A[np.arange(n), perm] = 1.0
    return GaussianTransform(A, np.zeros((n, n), complex), np.zeros(n, complex))


def displacement(n: int, beta, modes: Sequence[int] | None = None) -> GaussianTransform:
    beta = np.atleast_1d(np.asarray(beta, dtype=complex))
    modes = list(range(n)) if modes is None or len(modes) == 0 else modes
    modes = _check_modes(n, modes, beta.size)
    _check_finite(beta=beta)
    full = np.zeros(n, complex)
    full[modes] = beta
    return GaussianTransform(np.eye(n, dtype=complex), np.zeros((n, n), complex), full)


QND_A = np.array([[1.0, -0.5], [0.5, 1.0]], dtype=complex)
QND_B = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)


def qnd_coupler(n: int = 2, modes: Sequence[int] = (0, 1)) -> GaussianTransform:
    """Back-action-evading coupling: x2 -> x2 + x1, p1 -> p1 - p2."""
    modes = _check_modes(n, modes, 2)
    return embed(n, modes, QND_A, QND_B)


@dataclass
class CircuitElement:
    kind: str
    modes: list[int]
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ELEMENT_KINDS:
            raise InvalidInput(f"unknown element kind {self.kind!r}; expected one of {ELEMENT_KINDS}")
        self.modes = [int(m) for m in self.modes]

    def to_transform(self, n: int) -> GaussianTransform:
        kind, modes, p = self.kind, self.modes, self.params
        arity = _ARITY.get(kind)
        if arity is not None:
            _check_modes(n, modes, arity)
        try:
            if kind == "squeezer":
                return squeezer(n, modes[0], p["r"], p.get("phi", 0.0))
            if kind == "two_mode_downconverter":
                return two_mode_downconverter(n, modes[0], modes[1], p["r"])
            if kind == "four_mode_downconverter":
                return four_mode_downconverter(n, modes, p["r"])
            if kind == "beamsplitter":
                return beamsplitter(n, modes[0], modes[1], p["theta"], p.get("phi", 0.0))
            if kind == "phase_shifter":
                return phase_shifter(n, modes[0], p["phi"])
            if kind == "multiport":
                return multiport(n, p["unitary"], modes)
            if kind == "permutation":
                return permutation(n, modes)
            if kind == "displacement":
                return displacement(n, p["beta"], modes)
            return qnd_coupler(n, modes)
        except KeyError as exc:
            raise InvalidInput(f"{kind} element is missing parameter {exc.args[0]!r}") from None


@dataclass
class Circuit:
    """Elements applied left to right in time."""

    n_modes: int
    elements: list[CircuitElement] = field(default_factory=list)

    def __post_init__(self):
        if int(self.n_modes) < 1:
            raise InvalidInput("a circuit needs at least one mode")
        self.n_modes = int(self.n_modes)

    def append(self, kind: str, modes: Sequence[int], **params) -> "Circuit":
        self.elements.append(CircuitElement(kind, list(modes), params))
        return self

    def count(self, kind: str) -> int:
        return sum(el.kind == kind for el in self.elements)


def compile_circuit(circuit: Circuit) -> GaussianTransform:
    T = GaussianTransform.identity(circuit.n_modes)
    for el in circuit.elements:
        T = compose(el.to_transform(circuit.n_modes), T)
    return T

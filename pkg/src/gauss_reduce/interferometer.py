"""Triangular (Reck-style) beam-splitter meshes for passive unitaries."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elements import Circuit, beamsplitter_block
from .errors import InvalidInput
from .kernels import DEFAULT_TOL, ToleranceConfig, as_matrix, unitarity_residual

# stages with |sin theta| below this are dropped as exact identities
_NEGLIGIBLE = 1e-14


@dataclass(frozen=True)
class Stage:
    i: int
    j: int
    theta: float
    phi: float


@dataclass
class PassiveNetwork:
    """``U = diag(e^{i output_phases}) T_K ... T_1`` with ``T_1 = stages[0]`` acting first."""

    n_modes: int
    stages: list[Stage] = field(default_factory=list)
    output_phases: np.ndarray = None

    def __post_init__(self):
        if self.output_phases is None:
            self.output_phases = np.zeros(self.n_modes)
        self.output_phases = np.asarray(self.output_phases, dtype=float)


def evaluate(network: PassiveNetwork) -> np.ndarray:
    n = network.n_modes
    if network.output_phases.shape != (n,):
        raise InvalidInput(f"expected {n} output phases, got {network.output_phases.shape}")
    M = np.eye(n, dtype=complex)
    for st in network.stages:
        if st.i == st.j or not (0 <= st.i < n and 0 <= st.j < n):
            raise InvalidInput(f"bad stage modes ({st.i}, {st.j}) for {n} modes")
        idx = [st.i, st.j]
        M[idx, :] = beamsplitter_block(st.theta, st.phi) @ M[idx, :]
    return np.exp(1j * network.output_phases)[:, None] * M


def synthesize(U, tol: ToleranceConfig = DEFAULT_TOL) -> PassiveNetwork:
    """Null the sub-diagonal of ``U`` row by row from the bottom.

    Each stage mixes adjacent columns (j, j+1) to zero ``U[row, j]``; what
    remains is a diagonal phase layer.
    """
    U = as_matrix(U, "U")
    res = unitarity_residual(U)
    if res > tol.structural_tol:
        raise InvalidInput(f"matrix is not unitary (residual {res:.3g})")
    n = U.shape[0]
    W = U.copy()
    stages = []
    for row in range(n - 1, 0, -1):
        for j in range(row):
            up, uq = W[row, j], W[row, j + 1]
            if abs(up) <= _NEGLIGIBLE:
                continue
            if abs(uq) <= _NEGLIGIBLE:
                theta, phi = np.pi / 2, -np.angle(up)
            else:
                theta = np.arctan2(abs(up), abs(uq))
                phi = np.angle(uq) - np.angle(up)
            T = beamsplitter_block(theta, phi)
            W[:, [j, j + 1]] = W[:, [j, j + 1]] @ T.conj().T
            stages.append(Stage(j, j + 1, float(theta), float(np.angle(np.exp(1j * phi)))))
    return PassiveNetwork(n, stages, np.angle(np.diagonal(W)))


def mixing_angle(M) -> float:
    """Angle t in [0, pi/2] of a 2x2 unitary, with energy transmission cos^2 t."""
    M = np.asarray(M)
    return float(np.arccos(np.clip(abs(M[0, 0]), 0.0, 1.0)))


def network_elements(network: PassiveNetwork, circuit: Circuit) -> Circuit:
    """Append the network's stages and non-trivial phases to ``circuit``."""
    for st in network.stages:
        circuit.append("beamsplitter", [st.i, st.j], theta=st.theta, phi=st.phi)
    for m, ph in enumerate(network.output_phases):
        if ph != 0.0:
            circuit.append("phase_shifter", [m], phi=float(ph))
    return circuit


def full_circuit(form, tol: ToleranceConfig = DEFAULT_TOL) -> Circuit:
    """Primitive circuit: mesh for V^dagger, squeezers, mesh for U, displacement."""
    form.check(tol)
    n = form.n_modes
    circuit = Circuit(n)
    network_elements(synthesize(form.V.conj().T, tol), circuit)
    for m, r in enumerate(form.r):
        if r > 0.0:
            circuit.append("squeezer", [m], r=float(r), phi=0.0)
    network_elements(synthesize(form.U, tol), circuit)
    if np.any(form.beta):
        circuit.append("displacement", [], beta=form.beta.copy())
    return circuit

"""Named circuits and the explicit QND decompositions used by demos and tests."""
from __future__ import annotations

import numpy as np

from .bogoliubov import random_transform
from .elements import Circuit
from .errors import InvalidInput
from .interferometer import full_circuit
from .reduction import BlochMessiahForm, reduce

DEFAULT_R = 0.5

# angle of the unbalanced QND factors, 1/2 asin(2/sqrt 5) ~ 31.72 degrees
QND_THETA = 0.5 * np.arcsin(2.0 / np.sqrt(5.0))
# golden-ratio squeezing: cosh r = sqrt(5)/2, sinh r = 1/2
QND_R = float(np.log((1.0 + np.sqrt(5.0)) / 2.0))


def qnd_unbalanced_form() -> BlochMessiahForm:
    """Factors built from unequal beam splitters (transmissions 27.64% / 72.36%)."""
    s, c = np.sin(QND_THETA), np.cos(QND_THETA)
    U = np.array([[s, -1j * c], [c, 1j * s]])
    V = np.array([[c, -1j * s], [s, 1j * c]])
    return BlochMessiahForm(U, V, [QND_R, QND_R], None)


def qnd_balanced_form() -> BlochMessiahForm:
    """Alternative factors using only 50:50 splitters (the squeezing is degenerate)."""
    e = np.exp(1j * QND_THETA)
    U = np.array([[1j * e, 1j * e.conjugate()], [-e, e.conjugate()]]) / np.sqrt(2)
    V = np.array([[-e.conjugate(), e], [-1j * e.conjugate(), -1j * e]]) / np.sqrt(2)
    return BlochMessiahForm(U, V, [QND_R, QND_R], None)


def qnd_circuit() -> Circuit:
    return Circuit(2).append("qnd_coupler", [0, 1])


def d2_circuit(r: float = DEFAULT_R) -> Circuit:
    return Circuit(2).append("two_mode_downconverter", [0, 1], r=r)


def e4_circuit(r: float = DEFAULT_R) -> Circuit:
    return Circuit(4).append("four_mode_downconverter", [0, 1, 2, 3], r=r)


def fig2_circuit(r: float = DEFAULT_R) -> Circuit:
    """Oppositely squeezed pair recombined on a 50:50 splitter.

    The leading splitter only matters as an operator identity; on vacuum
    input it can be dropped (see :func:`fig2_vacuum_circuit`).
    """
    return (
        Circuit(2)
        .append("beamsplitter", [0, 1], theta=np.pi / 4, phi=np.pi)
        .append("squeezer", [0], r=r, phi=0.0)
        .append("squeezer", [1], r=r, phi=np.pi)
        .append("beamsplitter", [0, 1], theta=np.pi / 4, phi=0.0)
    )


def fig2_vacuum_circuit(r: float = DEFAULT_R) -> Circuit:
    """Two squeezers then one 50:50 splitter: same output state as D2 on vacuum."""
    return (
        Circuit(2)
        .append("squeezer", [0], r=r, phi=0.0)
        .append("squeezer", [1], r=r, phi=np.pi)
        .append("beamsplitter", [0, 1], theta=np.pi / 4, phi=0.0)
    )


# Two independent pair sources, routed by polarizing splitters so each
# output pair (0,1), (2,3) carries one photon from each source.
FIG3_ROUTING = [0, 3, 2, 1]


def fig3_circuit(r: float = DEFAULT_R) -> Circuit:
    return (
        Circuit(4)
        .append("two_mode_downconverter", [0, 3], r=r)
        .append("two_mode_downconverter", [2, 1], r=r)
        .append("permutation", FIG3_ROUTING)
    )


def random_circuit(seed: int, n: int = 4, max_r: float = 1.0) -> Circuit:
    return full_circuit(reduce(random_transform(n, max_r, seed)))


SINGLE = {
    "qnd": qnd_circuit,
    "d2": d2_circuit,
    "e4": e4_circuit,
    "fig2": fig2_circuit,
    "fig3": fig3_circuit,
}

# (left, right) pairs for equivalence checks
PAIRS = {
    "fig2": (fig2_circuit, d2_circuit),
    "fig3": (fig3_circuit, e4_circuit),
}


def builtin_circuit(name: str, seed: int = 0) -> Circuit:
    if name == "random":
        return random_circuit(seed)
    try:
        return SINGLE[name]()
    except KeyError:
        raise InvalidInput(f"unknown builtin {name!r}; choose from {sorted([*SINGLE, 'random'])}") from None


def builtin_pair(name: str) -> tuple[Circuit, Circuit]:
    try:
        left, right = PAIRS[name]
    except KeyError:
        raise InvalidInput(f"no equivalence pair named {name!r}; choose from {sorted(PAIRS)}") from None
    return left(), right()

import numpy as np
import pytest
from scipy.stats import unitary_group

from gauss_reduce.elements import Circuit


def haar(n, seed):
    return unitary_group.rvs(n, random_state=np.random.default_rng(seed)) if n > 1 else \
        np.exp(2j * np.pi * np.random.default_rng(seed).uniform(size=(1, 1)))


def random_primitive_circuit(seed, max_modes=3, max_r=0.3):
    """Squeezers, down-converters, splitters and phases with bounded squeezing.

    Squeezing per element stays small so a Fock-space simulation truncated
    at ~40 photons remains accurate to well below 1e-8.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_modes + 1))
    circuit = Circuit(n)
    kinds = ["squeezer", "beamsplitter", "phase_shifter", "two_mode_downconverter"] if n > 1 \
        else ["squeezer", "phase_shifter"]
    for _ in range(int(rng.integers(3, 7))):
        kind = rng.choice(kinds)
        if kind == "squeezer":
            circuit.append("squeezer", [int(rng.integers(n))], r=float(rng.uniform(-max_r, max_r)),
                           phi=float(rng.uniform(0, 2 * np.pi)))
        elif kind == "phase_shifter":
            circuit.append("phase_shifter", [int(rng.integers(n))], phi=float(rng.uniform(0, 2 * np.pi)))
        else:
            i, j = (int(x) for x in rng.choice(n, 2, replace=False))
            if kind == "beamsplitter":
                circuit.append("beamsplitter", [i, j], theta=float(rng.uniform(0, np.pi / 2)),
                               phi=float(rng.uniform(0, 2 * np.pi)))
            else:
                circuit.append("two_mode_downconverter", [i, j], r=float(rng.uniform(-max_r, max_r)))
    return circuit


def align_phase(f, g):
    """Rotate ``f`` by the global phase that best matches ``g``."""
    z = np.vdot(f, g)
    return f * (z / abs(z)) if abs(z) else f


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

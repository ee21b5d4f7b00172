"""JSON encodings. Complex numbers are ``[re, im]`` pairs everywhere."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bogoliubov import GaussianTransform
from .elements import Circuit, CircuitElement
from .errors import InvalidInput
from .interferometer import PassiveNetwork, Stage
from .reduction import BlochMessiahForm


def encode_complex(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 0:
        return [float(x.real), float(x.imag)]
    return [encode_complex(v) for v in x]


def decode_complex(data, ndim: int) -> np.ndarray:
    """Inverse of :func:`encode_complex`; plain reals are accepted too."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == ndim:
        return arr.astype(complex)
    if arr.size == 0:
        return np.zeros((0,) * ndim, complex)
    raise InvalidInput(f"cannot decode complex array of rank {ndim} from shape {arr.shape}")


def transform_to_dict(T: GaussianTransform) -> dict:
    return {"n_modes": T.n_modes, "A": encode_complex(T.A), "B": encode_complex(T.B),
            "beta": encode_complex(T.beta)}


def transform_from_dict(data: dict) -> GaussianTransform:
    try:
        A = decode_complex(data["A"], 2)
        B = decode_complex(data["B"], 2)
    except KeyError as exc:
        raise InvalidInput(f"transform is missing field {exc.args[0]!r}") from None
    n = int(data.get("n_modes", A.shape[0]))
    beta = decode_complex(data["beta"], 1) if "beta" in data else np.zeros(n, complex)
    if A.shape != (n, n):
        raise InvalidInput(f"n_modes={n} but A has shape {A.shape}")
    return GaussianTransform(A, B, beta)


def _encode_param(key, value):
    if key == "beta":
        return encode_complex(np.atleast_1d(value))
    if key == "unitary":
        return encode_complex(value)
    return float(value)


def circuit_to_dict(circuit: Circuit) -> dict:
    return {
        "n_modes": circuit.n_modes,
        "elements": [
            {"kind": el.kind, "modes": list(el.modes),
             "params": {k: _encode_param(k, v) for k, v in el.params.items()}}
            for el in circuit.elements
        ],
    }


def circuit_from_dict(data: dict) -> Circuit:
    if "n_modes" not in data:
        raise InvalidInput("circuit is missing 'n_modes'")
    elements = []
    for k, raw in enumerate(data.get("elements", [])):
        if "kind" not in raw:
            raise InvalidInput(f"element {k} has no 'kind'")
        params = dict(raw.get("params", {}))
        if "beta" in params:
            params["beta"] = decode_complex(params["beta"], 1)
        if "unitary" in params:
            params["unitary"] = decode_complex(params["unitary"], 2)
        elements.append(CircuitElement(raw["kind"], list(raw.get("modes", [])), params))
    return Circuit(int(data["n_modes"]), elements)


def form_to_dict(form: BlochMessiahForm) -> dict:
    return {"n_modes": form.n_modes, "U": encode_complex(form.U), "V": encode_complex(form.V),
            "r": [float(x) for x in form.r], "beta": encode_complex(form.beta)}


def form_from_dict(data: dict) -> BlochMessiahForm:
    return BlochMessiahForm(decode_complex(data["U"], 2), decode_complex(data["V"], 2),
                            np.asarray(data["r"], dtype=float), decode_complex(data["beta"], 1))


def network_to_dict(net: PassiveNetwork) -> dict:
    return {"n_modes": net.n_modes,
            "stages": [{"i": s.i, "j": s.j, "theta": s.theta, "phi": s.phi} for s in net.stages],
            "output_phases": [float(x) for x in net.output_phases]}


def network_from_dict(data: dict) -> PassiveNetwork:
    phases = np.asarray(data["output_phases"], dtype=float)
    stages = [Stage(int(s["i"]), int(s["j"]), float(s["theta"]), float(s["phi"])) for s in data["stages"]]
    return PassiveNetwork(int(data.get("n_modes", phases.size)), stages, phases)


def load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def load_circuit_or_transform(data: dict):
    """A document with an ``A`` matrix is a raw transform, otherwise a circuit."""
    if not isinstance(data, dict):
        raise InvalidInput("top-level JSON value must be an object")
    if "A" in data:
        return transform_from_dict(data)
    return circuit_from_dict(data)

"""Bloch-Messiah reduction of multimode linear optical (Bogoliubov) transforms."""
from .bogoliubov import GaussianTransform, compose, compose_all, inverse, transform_distance, validate
from .elements import Circuit, CircuitElement, compile_circuit
from .errors import GaussReduceError, InvalidInput, NumericalFailure, SingularInput, UnsupportedInput
from .kernels import ToleranceConfig
from .reduction import BlochMessiahForm, recompose, reduce, squeeze_spectrum, squeezer_count

__all__ = [
    "BlochMessiahForm",
    "Circuit",
    "CircuitElement",
    "GaussReduceError",
    "GaussianTransform",
    "InvalidInput",
    "NumericalFailure",
    "SingularInput",
    "ToleranceConfig",
    "UnsupportedInput",
    "compile_circuit",
    "compose",
    "compose_all",
    "inverse",
    "recompose",
    "reduce",
    "squeeze_spectrum",
    "squeezer_count",
    "transform_distance",
    "validate",
]

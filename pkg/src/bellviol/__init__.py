"""Hardy-type Bell operators for N spin-1/2 particles."""

from .bell_ops import (
    BellSpec,
    DirectionSettings,
    MeasurementSettings,
    Pairing,
    build_bell3,
    build_bellN,
)
from .linalg_core import Direction, InvalidInputError
from .states import PairState, ProductState, PureState, ghz_state

__all__ = [
    "BellSpec",
    "Direction",
    "DirectionSettings",
    "InvalidInputError",
    "MeasurementSettings",
    "PairState",
    "Pairing",
    "ProductState",
    "PureState",
    "build_bell3",
    "build_bellN",
    "ghz_state",
]

"""Perimeter-dependent forcing terms.

Every supported flow variant has the form f(L) = c / L; the constant c
selects how the enclosed area evolves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonpositivePerimeter


@dataclass(frozen=True)
class ForceSpec:
    """Selects the forcing variant.

    variant "ap":     area-preserving flow of simple curves, c = 2*pi.
    variant "ap-ind": area-preserving flow of a curve with turning
                      number ``ind`` (nonzero), c = 2*pi*ind.
    variant "rate":   area changes at the prescribed rate -beta,
                      c = 2*pi - beta.
    """

    variant: str
    ind: int = 1
    beta: float = 0.0

    def __post_init__(self):
        if self.variant not in ("ap", "ap-ind", "rate"):
            raise ValueError(f"unknown forcing variant {self.variant!r}")
        if self.variant == "ap-ind" and self.ind == 0:
            raise ValueError("turning number must be nonzero")

    @classmethod
    def area_preserving(cls) -> "ForceSpec":
        return cls("ap")

    @classmethod
    def area_preserving_nonsimple(cls, ind: int) -> "ForceSpec":
        return cls("ap-ind", ind=int(ind))

    @classmethod
    def prescribed_rate(cls, beta: float) -> "ForceSpec":
        return cls("rate", beta=float(beta))

    @property
    def coefficient(self) -> float:
        """The constant c in f(L) = c / L."""
        if self.variant == "ap":
            return 2.0 * np.pi
        if self.variant == "ap-ind":
            return 2.0 * np.pi * self.ind
        return 2.0 * np.pi - self.beta


def force(spec: ForceSpec, length: float) -> float:
    """Evaluate f(L) = c / L.  Raises NonpositivePerimeter for L <= 0."""
    if length <= 0.0:
        raise NonpositivePerimeter(f"perimeter must be positive, got {length}")
    return spec.coefficient / length

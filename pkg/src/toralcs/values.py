"""Partition-function values with exact |det K| bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .phases import PhaseSum


def det_power(abs_det: int, exponent) -> float:
    """``abs_det ** exponent`` for a half-integer exponent, exact where floats allow.

    Integer exponents are computed in integer arithmetic; half-integral ones
    as a correctly rounded square root of an exact integer or its reciprocal.
    """
    e = Fraction(exponent)
    if abs_det <= 0:
        raise ValueError("abs_det must be positive")
    if e.denominator == 1:
        k = e.numerator
        return float(abs_det ** k) if k >= 0 else 1.0 / float(abs_det ** -k)
    if e.denominator != 2:
        raise ValueError(f"exponent {e} is not a half-integer")
    k = e.numerator
    if k > 0:
        return math.sqrt(abs_det ** k)
    return 1.0 / math.sqrt(abs_det ** -k)


@dataclass(frozen=True)
class PartitionValue:
    """A complex amplitude together with the power of |det K| it contains."""

    amplitude: complex
    det_k_exponent: Fraction | None
    source_notes: str = ""
    phase_sum: PhaseSum | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        z = complex(self.amplitude)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("partition value must be finite")
        object.__setattr__(self, "amplitude", z)

    @property
    def magnitude(self) -> float:
        return abs(self.amplitude)

    def to_json(self) -> dict:
        out = {
            "re": self.amplitude.real,
            "im": self.amplitude.imag,
            "magnitude": self.magnitude,
            "detKExponent": (float(self.det_k_exponent)
                             if self.det_k_exponent is not None else None),
        }
        if self.source_notes:
            out["notes"] = self.source_notes
        return out

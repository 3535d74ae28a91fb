"""Natural units and their conversion to SI.

All computations use hbar = c = eps0 = mu0 = 1, so the RS vector is
F = (D + iB)/sqrt(2) and frequencies equal wave numbers. A single length
scale (metres per natural length unit) fixes the conversion of every other
quantity; it is applied only at the I/O boundary.
"""

from __future__ import annotations

HBAR = 1.054571817e-34  # J s
C_LIGHT = 299792458.0  # m / s

DEFAULT_LENGTH_UNIT = 1e-6  # metres


def units_block(si: bool = False, length_unit: float = DEFAULT_LENGTH_UNIT) -> dict:
    """Header describing the unit system of an output file."""
    if not si:
        return {
            "system": "natural",
            "hbar": 1.0,
            "c": 1.0,
            "eps0": 1.0,
            "mu0": 1.0,
            "length_unit_m": length_unit,
        }
    return {
        "system": "SI",
        "length": "m",
        "time": "s",
        "wave_number": "1/m",
        "frequency": "rad/s",
        "energy": "J",
        "momentum": "kg m/s",
        "angular_momentum": "J s",
        "length_unit_m": length_unit,
    }


# conversion factors natural -> SI, keyed by dimension name
def si_factor(kind: str, length_unit: float = DEFAULT_LENGTH_UNIT) -> float:
    factors = {
        "length": length_unit,
        "time": length_unit / C_LIGHT,
        "wave_number": 1.0 / length_unit,
        "frequency": C_LIGHT / length_unit,
        "energy": HBAR * C_LIGHT / length_unit,
        "momentum": HBAR / length_unit,
        "angular_momentum": HBAR,
        "dimensionless": 1.0,
    }
    try:
        return factors[kind]
    except KeyError:
        raise ValueError(f"unknown dimension {kind!r}") from None


def to_si(value, kind: str, length_unit: float = DEFAULT_LENGTH_UNIT):
    """Scale a natural-unit value (scalar or sequence) to SI."""
    f = si_factor(kind, length_unit)
    if isinstance(value, (list, tuple)):
        return [None if v is None else v * f for v in value]
    return None if value is None else value * f

"""Dimensionless unit system and physical calibration.

All internal quantities are expressed in natural units of the atomic
transition: rates in units of the single-atom free-space decay rate
``GAMMA0``, lengths in units of the transition wavelength ``LAMBDA0``,
times in units of ``1/GAMMA0``. The wavenumber ``K0 = 2*pi/LAMBDA0`` is
exactly ``2*pi`` in these units.

Conversion to laboratory units happens only at the presentation layer via
an explicit :class:`Calibration`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CalibrationError

GAMMA0 = 1.0
LAMBDA0 = 1.0
K0 = 2.0 * math.pi

# Cesium D2 line, the reference platform for the default calibration.
DEFAULT_LAMBDA0_NM = 852.0
DEFAULT_GAMMA0_HZ = 2.0 * math.pi * 5.22e6

_KINDS = ("time", "length", "rate")


@dataclass(frozen=True)
class Calibration:
    """Physical scale of one natural unit.

    lambda0_m: length of one LAMBDA0 in meters.
    gamma0_hz: angular rate of one GAMMA0 in rad/s.
    """

    lambda0_m: float = DEFAULT_LAMBDA0_NM * 1e-9
    gamma0_hz: float = DEFAULT_GAMMA0_HZ

    def __post_init__(self):
        if not (self.lambda0_m > 0.0) or not math.isfinite(self.lambda0_m):
            raise CalibrationError(f"lambda0_m must be positive, got {self.lambda0_m}")
        if not (self.gamma0_hz > 0.0) or not math.isfinite(self.gamma0_hz):
            raise CalibrationError(f"gamma0_hz must be positive, got {self.gamma0_hz}")


def to_physical(value: float, kind: str, calibration: Calibration) -> float:
    """Convert a natural-unit value to SI (seconds, meters, rad/s)."""
    if kind == "time":
        return value / calibration.gamma0_hz
    if kind == "length":
        return value * calibration.lambda0_m
    if kind == "rate":
        return value * calibration.gamma0_hz
    raise ValueError(f"unknown kind {kind!r}; expected one of {_KINDS}")


def from_physical(value: float, kind: str, calibration: Calibration) -> float:
    """Convert an SI value (seconds, meters, rad/s) to natural units."""
    if kind == "time":
        return value * calibration.gamma0_hz
    if kind == "length":
        return value / calibration.lambda0_m
    if kind == "rate":
        return value / calibration.gamma0_hz
    raise ValueError(f"unknown kind {kind!r}; expected one of {_KINDS}")

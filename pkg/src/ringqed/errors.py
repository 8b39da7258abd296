"""Exception types shared across the package.

Every failure mode that callers are expected to catch gets its own class;
generic misuse (bad argument types, contract violations at call sites)
raises ValueError as usual.
"""


class RingQEDError(Exception):
    """Base class for all package-specific errors."""


class CalibrationError(RingQEDError):
    """Physical calibration is unusable (non-positive scale factors)."""


class GenerationError(RingQEDError):
    """A geometry sampler could not produce a valid configuration."""


class NearCoincidenceError(RingQEDError):
    """Two atoms are close enough that the pair Green's function diverges.

    Carries the offending pair indices (when known) and their separation so
    ensemble drivers can log and discard the realization.
    """

    def __init__(self, separation, i=None, j=None):
        self.separation = float(separation)
        self.i = i
        self.j = j
        where = f" (atoms {i}, {j})" if i is not None else ""
        super().__init__(
            f"atom pair separation {separation:.3e} lambda0 below coincidence "
            f"threshold{where}"
        )


class DefectiveMatrixError(RingQEDError):
    """The evolution matrix has no usable biorthogonal eigenbasis."""


class DarkPoleError(RingQEDError):
    """A steady-state weight hits a pole (eigenvalue resonant with the drive)."""


class UndefinedTransmissionError(RingQEDError):
    """Bus transmission requested with zero drive amplitude."""


class StepSizeError(RingQEDError):
    """Fixed-step integration produced unacceptable trace drift."""


class ConsistencyError(RingQEDError):
    """An internal cross-check failed (e.g. imaginary residue too large)."""


class EnsembleError(RingQEDError):
    """An ensemble produced no usable trials."""


class ConfigError(RingQEDError):
    """Run configuration is malformed (unknown key or invalid field)."""

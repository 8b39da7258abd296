import math

import numpy as np
import pytest

from ringqed.errors import CalibrationError
from ringqed.units import (
    DEFAULT_GAMMA0_HZ,
    DEFAULT_LAMBDA0_NM,
    GAMMA0,
    K0,
    LAMBDA0,
    Calibration,
    from_physical,
    to_physical,
)


def test_internal_constants():
    assert GAMMA0 == 1.0
    assert LAMBDA0 == 1.0
    assert K0 == 2.0 * math.pi
    assert DEFAULT_LAMBDA0_NM == 852.0
    assert DEFAULT_GAMMA0_HZ == pytest.approx(2.0 * math.pi * 5.22e6, rel=1e-12)


def test_length_conversion():
    cal = Calibration(lambda0_m=852e-9, gamma0_hz=1.0 / 30e-9)
    # 0.3 lambda0 at 852 nm is 255.6 nm
    assert to_physical(0.3, "length", cal) == pytest.approx(255.6e-9, rel=1e-12)


def test_time_conversion():
    cal = Calibration(lambda0_m=852e-9, gamma0_hz=1.0 / 30e-9)
    # 2 / Gamma0 with a 30 ns lifetime is 60 ns
    assert to_physical(2.0, "time", cal) == pytest.approx(60e-9, rel=1e-12)


def test_rate_conversion():
    cal = Calibration(lambda0_m=852e-9, gamma0_hz=2 * math.pi * 5.22e6)
    assert to_physical(0.5, "rate", cal) == pytest.approx(math.pi * 5.22e6, rel=1e-12)


def test_round_trip():
    cal = Calibration(lambda0_m=780e-9, gamma0_hz=2 * math.pi * 6.07e6)
    rng = np.random.default_rng(42)
    for kind in ("time", "length", "rate"):
        for value in rng.uniform(1e-3, 1e3, size=25):
            back = from_physical(to_physical(value, kind, cal), kind, cal)
            assert back == pytest.approx(value, rel=1e-14)


def test_unknown_kind_rejected():
    cal = Calibration(lambda0_m=852e-9, gamma0_hz=1e7)
    with pytest.raises(ValueError):
        to_physical(1.0, "energy", cal)
    with pytest.raises(ValueError):
        from_physical(1.0, "frequency", cal)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"lambda0_m": 0.0, "gamma0_hz": 1e7},
        {"lambda0_m": -852e-9, "gamma0_hz": 1e7},
        {"lambda0_m": 852e-9, "gamma0_hz": 0.0},
        {"lambda0_m": 852e-9, "gamma0_hz": -1.0},
        {"lambda0_m": math.nan, "gamma0_hz": 1e7},
    ],
)
def test_invalid_calibration(kwargs):
    with pytest.raises(CalibrationError):
        Calibration(**kwargs)

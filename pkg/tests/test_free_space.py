"""Free-space dyadic coupling against an independent special-function oracle.

The reference implementation below builds the pair coupling from mpmath's
half-integer Hankel functions instead of the closed exponential forms used
in the package, so agreement checks the algebra and not just the typing.
"""

import math

import mpmath as mp
import numpy as np
import pytest

from ringqed.errors import NearCoincidenceError
from ringqed.free_space import (
    COINCIDENCE_THRESHOLD,
    build_free_matrix,
    dissipative_matrix,
    greens_pair,
    polarization_coefficient,
)
from ringqed.geometry import AtomConfig
from ringqed.units import K0

mp.mp.dps = 30


def _sph_hankel1(n, x):
    return mp.sqrt(mp.pi / (2 * x)) * mp.hankel1(n + mp.mpf(1) / 2, x)


def _oracle_pair(r_i, r_j):
    d = np.asarray(r_i, dtype=float) - np.asarray(r_j, dtype=float)
    r = float(np.linalg.norm(d))
    x = mp.mpf(2) * mp.pi * mp.mpf(r)
    cos_t = mp.mpf(float(d[0] / r))
    c = (1 - 3 * cos_t**2) / 4
    val = -mp.mpf(1) / 2 * mp.mpc(0, 1) * (_sph_hankel1(0, x) + c * _sph_hankel1(2, x))
    return complex(val)


def _random_config(rng, n, min_sep=0.08):
    while True:
        pos = rng.normal(0.0, 0.6, size=(n, 3))
        pos[:, 2] = np.abs(pos[:, 2]) + 0.1
        d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        if n == 1 or d[np.triu_indices(n, 1)].min() > min_sep:
            return AtomConfig(pos, pos[:, 1].copy(), f"rand-{n}")


def test_polarization_coefficient_extremes():
    # along the dipole axis vs transverse to it
    assert polarization_coefficient(1.0) == pytest.approx(-0.5, abs=1e-15)
    assert polarization_coefficient(-1.0) == pytest.approx(-0.5, abs=1e-15)
    assert polarization_coefficient(0.0) == pytest.approx(0.25, abs=1e-15)


def test_pair_axial_closed_form():
    # half-wavelength separation along the quantization axis
    g = greens_pair(np.array([0.0, 0.0, 0.5]), np.array([0.5, 0.0, 0.5]))
    j12 = 0.75 * (1.0 / math.pi - 1.0 / math.pi**3)
    gamma12 = -3.0 / (2.0 * math.pi**2)
    assert g.real == pytest.approx(j12, abs=1e-14)
    assert g.imag == pytest.approx(-gamma12 / 2.0, abs=1e-14)


def test_pair_transverse_matches_oracle():
    g = greens_pair(np.array([0.0, 0.0, 0.5]), np.array([0.0, 0.5, 0.5]))
    ref = _oracle_pair(np.array([0.0, 0.0, 0.5]), np.array([0.0, 0.5, 0.5]))
    assert abs(g - ref) < 1e-13


def test_pair_random_matches_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(40):
        r_i = rng.normal(0.0, 0.7, 3)
        r_j = rng.normal(0.0, 0.7, 3)
        if np.linalg.norm(r_i - r_j) < 0.05:
            continue
        assert abs(greens_pair(r_i, r_j) - _oracle_pair(r_i, r_j)) < 1e-12


def test_pair_symmetry_under_exchange():
    rng = np.random.default_rng(8)
    r_i = rng.normal(size=3)
    r_j = rng.normal(size=3)
    assert greens_pair(r_i, r_j) == greens_pair(r_j, r_i)


def test_near_coincidence_limit():
    # dissipative part tends to the single-atom rate as kr -> 0
    g = greens_pair(np.zeros(3), np.array([1e-4, 0.0, 0.0]))
    assert abs(-2.0 * g.imag - 1.0) < 1e-6


def test_far_field_envelope():
    # transverse pair at 10 lambda0: |G| -> (1 - c)/2 * 1/(k r)
    r = 10.0
    g = greens_pair(np.zeros(3), np.array([0.0, r, 0.0]))
    asym = (1.0 - 0.25) / (2.0 * K0 * r)
    assert abs(abs(g) - asym) / asym < 1e-2


def test_matrix_bitwise_symmetric():
    rng = np.random.default_rng(31)
    for n in (2, 5, 9):
        gf = build_free_matrix(_random_config(rng, n))
        iu, ju = np.triu_indices(n, 1)
        # reciprocity must hold bit for bit, not just to tolerance
        assert np.array_equal(gf[iu, ju], gf[ju, iu])
        np.testing.assert_array_equal(np.diag(gf), np.full(n, -0.5j))


def test_matrix_matches_pairwise():
    rng = np.random.default_rng(77)
    cfg = _random_config(rng, 6)
    gf = build_free_matrix(cfg)
    for i in range(6):
        for j in range(i + 1, 6):
            ref = greens_pair(cfg.positions[i], cfg.positions[j])
            assert gf[i, j] == pytest.approx(ref, abs=1e-15)


def test_dissipative_part_positive_semidefinite():
    rng = np.random.default_rng(5150)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 13))
        gf = build_free_matrix(_random_config(rng, n, min_sep=0.05))
        gamma = dissipative_matrix(gf)
        np.testing.assert_allclose(gamma, gamma.T, atol=1e-15)
        worst = min(worst, np.linalg.eigvalsh(gamma).min())
    assert worst >= -1e-10


def test_translation_invariance():
    rng = np.random.default_rng(12)
    cfg = _random_config(rng, 7)
    shift = np.array([1.3, -0.7, 2.1])
    shifted = AtomConfig(
        cfg.positions + shift, cfg.phase_coords.copy(), "shifted"
    )
    np.testing.assert_allclose(
        build_free_matrix(cfg), build_free_matrix(shifted), atol=1e-12
    )


def test_rotation_about_dipole_axis_invariance():
    # rotations about x preserve every pair distance and angle to x; the
    # extra z shift keeps atoms above the chip and is covered by translation
    # invariance
    rng = np.random.default_rng(13)
    cfg = _random_config(rng, 7)
    a = rng.uniform(0, 2 * np.pi)
    rot = np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, np.cos(a), -np.sin(a)],
            [0.0, np.sin(a), np.cos(a)],
        ]
    )
    pos = cfg.positions @ rot.T
    pos[:, 2] += 10.0
    rotated = AtomConfig(pos, cfg.phase_coords.copy(), "rotated")
    np.testing.assert_allclose(
        build_free_matrix(cfg), build_free_matrix(rotated), atol=1e-12
    )


def test_coincident_atoms_rejected():
    pos = np.array([[0.0, 0.0, 0.5], [0.0, 5e-10, 0.5], [0.3, 0.0, 0.5]])
    cfg = AtomConfig(pos, pos[:, 1].copy(), "overlap")
    with pytest.raises(NearCoincidenceError) as exc:
        build_free_matrix(cfg)
    assert exc.value.separation < COINCIDENCE_THRESHOLD
    assert {exc.value.i, exc.value.j} == {0, 1}

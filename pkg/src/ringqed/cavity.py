"""Microring cavity coupling: evanescent coupling profile, the adiabatically
eliminated cavity-mediated coupling matrix, drive vector, and bus readout.

After adiabatic elimination of a single whispering-gallery mode with total
linewidth kappa = kappa_i + kappa_e and detuning delta_c, the atoms acquire
the rank-one non-Hermitian coupling

    G_c = (1 / kappa_tilde) u u^dagger,   kappa_tilde = delta_c + i kappa / 2,

with mode vector u_j = g_j exp(-i phi_j). The coupling g_j follows the
evanescent tail g(z) = g_ref exp(-(z - z_ref)/z_ev) and the phase phi_j is
the guided-mode propagation phase at each atom's position along the bus.

For a closed ring path the mode must be resonant: the propagation constant
is snapped to the nearest integer number of wavelengths around the
circumference, which removes the unphysical phase seam a literal open-path
phase would leave at the closure point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedTransmissionError
from .geometry import AtomConfig
from .units import GAMMA0, K0, LAMBDA0


def default_evanescent_length(n_eff: float) -> float:
    """1/e decay length of the evanescent field above the resonator.

    For a guided mode with effective index n_eff the transverse decay
    constant is k0 sqrt(n_eff^2 - 1). At n_eff = 1 the mode is unconfined
    and the length degenerates to infinity (height-independent coupling).
    """
    if n_eff < 1.0:
        raise ValueError(f"n_eff must be >= 1, got {n_eff}")
    if n_eff == 1.0:
        return math.inf
    return LAMBDA0 / (2.0 * math.pi * math.sqrt(n_eff**2 - 1.0))


@dataclass(frozen=True)
class CavityParams:
    """Single-mode ring resonator parameters (rates in GAMMA0 units).

    c_ref is the single-atom cooperativity of an atom at the reference
    height z_ref; it fixes the coupling scale via g_ref^2 = c_ref*kappa/4.
    """

    kappa_i: float = 100.0
    kappa_e: float = 100.0
    delta_c: float = 0.0
    n_eff: float = 1.69
    c_ref: float = 0.05
    z_ref: float = 330.0 / 852.0
    z_ev: float | None = None
    eta: float = 1.0

    def __post_init__(self):
        if self.kappa_i < 0.0 or self.kappa_e < 0.0:
            raise ValueError("kappa_i and kappa_e must be >= 0")
        if not self.kappa_i + self.kappa_e > 0.0:
            raise ValueError("total linewidth kappa_i + kappa_e must be > 0")
        if self.n_eff < 1.0:
            raise ValueError(f"n_eff must be >= 1, got {self.n_eff}")
        if self.c_ref < 0.0:
            raise ValueError(f"c_ref must be >= 0, got {self.c_ref}")
        if self.z_ev is None:
            object.__setattr__(self, "z_ev", default_evanescent_length(self.n_eff))
        if not self.z_ev > 0.0:
            raise ValueError(f"z_ev must be > 0, got {self.z_ev}")

    @property
    def kappa(self) -> float:
        return self.kappa_i + self.kappa_e

    @property
    def kappa_tilde(self) -> complex:
        return self.delta_c + 0.5j * self.kappa

    @property
    def g_ref(self) -> float:
        return math.sqrt(self.c_ref * self.kappa * GAMMA0 / 4.0)


def coupling_at(z, params: CavityParams) -> np.ndarray:
    """Single-atom coupling rate g(z) on the evanescent tail."""
    z = np.asarray(z, dtype=float)
    return params.g_ref * np.exp(-(z - params.z_ref) / params.z_ev)


def cooperativity(g, params: CavityParams) -> np.ndarray:
    """Single-atom cooperativity C = 4 g^2 / (kappa GAMMA0)."""
    g = np.asarray(g, dtype=float)
    return 4.0 * g**2 / (params.kappa * GAMMA0)


@dataclass(frozen=True)
class CavityMatrix:
    """Eliminated cavity coupling for one atom configuration."""

    matrix: np.ndarray
    couplings: np.ndarray
    phases: np.ndarray
    params: CavityParams

    @property
    def n(self) -> int:
        return self.couplings.shape[0]

    @property
    def kappa_tilde(self) -> complex:
        return self.params.kappa_tilde

    @property
    def mode_vector(self) -> np.ndarray:
        """u_j = g_j exp(-i phi_j); G_c = u u^dagger / kappa_tilde."""
        return self.couplings * np.exp(-1j * self.phases)

    @property
    def cooperativities(self) -> np.ndarray:
        return cooperativity(self.couplings, self.params)


def _propagation_k(params: CavityParams, k_wg: float | None,
                   closure_length: float | None) -> float:
    """Guided-mode propagation constant, resonant on closed paths."""
    k = params.n_eff * K0 if k_wg is None else float(k_wg)
    if closure_length is not None and k != 0.0:
        winding = round(k * closure_length / (2.0 * math.pi))
        k = 2.0 * math.pi * winding / closure_length
    return k


def build_cavity_matrix(config: AtomConfig, params: CavityParams,
                        uniform_c: bool = False,
                        k_wg: float | None = None) -> CavityMatrix:
    """Cavity coupling matrix for a configuration.

    uniform_c pins every atom's coupling to g_ref regardless of height.
    k_wg overrides the propagation constant n_eff * K0 (used by waveguide
    dispersion scans); the evanescent length stays tied to params.z_ev.
    """
    n = config.n
    if uniform_c:
        g = np.full(n, params.g_ref)
    else:
        g = coupling_at(config.positions[:, 2], params)
    k = _propagation_k(params, k_wg, config.closure_length)
    phi = k * config.phase_coords
    u = g * np.exp(-1j * phi)
    matrix = np.outer(u, np.conj(u)) / params.kappa_tilde
    return CavityMatrix(matrix=matrix, couplings=g, phases=np.asarray(phi, float),
                        params=params)


def drive_vector(cav: CavityMatrix) -> np.ndarray:
    """Effective atomic drive Omega_j = -u_j eta / kappa_tilde from the bus."""
    return -cav.mode_vector * (cav.params.eta / cav.kappa_tilde)


def cavity_field(sigma, cav: CavityMatrix) -> complex:
    """Slaved intracavity amplitude <a> for atomic coherences sigma.

    <a> = (sum_j g_j e^{+i phi_j} sigma_j + eta) / kappa_tilde.
    """
    sigma = np.asarray(sigma, dtype=complex)
    return complex((np.vdot(cav.mode_vector, sigma) + cav.params.eta)
                   / cav.kappa_tilde)


def bus_transmission(sigma, cav: CavityMatrix) -> complex:
    """Transmission amplitude past the resonator, t = 1 - i kappa_e <a> / eta."""
    if cav.params.eta == 0.0:
        raise UndefinedTransmissionError("transmission undefined at zero drive")
    a = cavity_field(sigma, cav)
    return complex(1.0 - 1j * cav.params.kappa_e * a / cav.params.eta)


def empty_transmission(delta, kappa_i: float, kappa_e: float) -> np.ndarray:
    """Bare-resonator transmission at detuning delta (no atoms).

    t_0(delta) = 1 - i kappa_e / (delta + i kappa/2); at critical coupling
    (kappa_e = kappa_i) this gives full extinction on resonance.
    """
    delta = np.asarray(delta, dtype=float)
    kt = delta + 0.5j * (kappa_i + kappa_e)
    return 1.0 - 1j * kappa_e / kt

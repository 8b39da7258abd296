"""Free-space dipole-dipole coupling for circularly polarized emitters.

The non-Hermitian pair coupling between two sigma+ dipoles (quantization
axis x, transverse to the bus waveguide along y) is

    G_ij = -(i/2) * [ h0(k0 r) + c(theta) h2(k0 r) ] * GAMMA0,

with h0, h2 the outgoing spherical Hankel functions (h2 up to sign
conventions absorbed below), r the pair separation, and theta the angle
between the separation vector and the quantization axis. The angular
factor is c(theta) = (1 - 3 cos^2 theta) / 4. Real part: coherent shift
J_ij; imaginary part: -Gamma_ij/2 with Gamma the collective decay matrix.

The diagonal is the single-atom limit G_jj = -i/2 * GAMMA0.
"""

from __future__ import annotations

import numpy as np

from .errors import NearCoincidenceError
from .geometry import AtomConfig
from .units import GAMMA0, K0

# Below this separation (units of LAMBDA0) the pair term is numerically
# divergent and the realization must be discarded.
COINCIDENCE_THRESHOLD = 1e-9


def polarization_coefficient(cos_theta) -> np.ndarray:
    """Angular weight of the quadrupole-like term for sigma+ dipoles."""
    cos_theta = np.asarray(cos_theta, dtype=float)
    return (1.0 - 3.0 * cos_theta**2) / 4.0


def _pair_value(r, cos_theta):
    """G for separation r > 0 (vectorized over arrays)."""
    x = K0 * np.asarray(r, dtype=float)
    eix = np.exp(1j * x)
    h0 = eix / (1j * x)
    h2 = eix * (-3j / x**3 - 3.0 / x**2 + 1j / x)
    return -0.5j * (h0 + polarization_coefficient(cos_theta) * h2) * GAMMA0


def greens_pair(r_i, r_j) -> complex:
    """Pair coupling between atoms at r_i and r_j (3-vectors, LAMBDA0 units)."""
    d = np.asarray(r_i, dtype=float) - np.asarray(r_j, dtype=float)
    r = float(np.sqrt(d @ d))
    if r <= COINCIDENCE_THRESHOLD:
        raise NearCoincidenceError(r)
    return complex(_pair_value(r, d[0] / r))


def build_free_matrix(config: AtomConfig) -> np.ndarray:
    """Full n x n free-space coupling matrix for a configuration.

    Bitwise symmetric by construction: off-diagonal entries are computed
    once per unordered pair and mirrored.
    """
    pos = config.positions
    n = pos.shape[0]
    g = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(g, -0.5j * GAMMA0)
    if n == 1:
        return g
    iu, ju = np.triu_indices(n, k=1)
    d = pos[iu] - pos[ju]
    r = np.sqrt(np.einsum("ij,ij->i", d, d))
    k = int(np.argmin(r))
    if r[k] <= COINCIDENCE_THRESHOLD:
        raise NearCoincidenceError(r[k], int(iu[k]), int(ju[k]))
    vals = _pair_value(r, d[:, 0] / r)
    g[iu, ju] = vals
    g[ju, iu] = vals
    return g


def dissipative_matrix(g_free: np.ndarray) -> np.ndarray:
    """Collective decay matrix Gamma = i (G - G^dagger) = -2 Im{G}.

    Real symmetric and positive semidefinite for any physical configuration;
    the diagonal equals GAMMA0.
    """
    return -2.0 * np.imag(g_free)

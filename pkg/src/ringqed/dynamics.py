"""Single-excitation dynamics: evolution matrix, biorthogonal eigenmodes,
excitation protocols, emission rates, and decay metrics.

In the weak-drive limit the atomic coherence vector sigma obeys

    d sigma / dt = i M sigma + i Omega,
    M = Delta_A * I - G_c - G_f,

so a mode with eigenvalue lambda evolves as exp(i lambda t) and decays at
Gamma_alpha = 2 Im{lambda_alpha} >= 0. Photon emission rates into the two
channels are quadratic forms with the Hermitian rate matrices

    Gamma^c = i (G_c - G_c^dagger),   Gamma^f = i (G_f - G_f^dagger),

and the undriven energy balance R_c + R_f = -d|sigma|^2/dt is exact at any
detuning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cavity import CavityMatrix
from .errors import (
    ConsistencyError,
    DarkPoleError,
    DefectiveMatrixError,
)
from . import reports

# Overlap magnitude below which a left/right pair counts as defective.
_OVERLAP_FLOOR = 1e-12

# Absolute floor under which a metric denominator makes the metric undefined.
_DIV_FLOOR = 1e-18

# Residual imaginary part allowed on a Hermitian quadratic form.
_RESIDUE_ERROR = 1e-9

DEFAULT_TIMES = np.geomspace(1e-3, 50.0, 200)


def _cavity_part(g_cav) -> np.ndarray:
    if isinstance(g_cav, CavityMatrix):
        return g_cav.matrix
    return np.asarray(g_cav, dtype=complex)


def build_evolution_matrix(g_cav, g_free, delta_a: float = 0.0) -> np.ndarray:
    """M = Delta_A I - G_c - G_f."""
    gc = _cavity_part(g_cav)
    gf = np.asarray(g_free, dtype=complex)
    n = gc.shape[0]
    return delta_a * np.eye(n) - gc - gf


def channel_rate_matrices(g_cav, g_free) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian emission-rate matrices (Gamma^c, Gamma^f)."""
    gc = _cavity_part(g_cav)
    gf = np.asarray(g_free, dtype=complex)
    return 1j * (gc - gc.conj().T), 1j * (gf - gf.conj().T)


def _real_qform(mat: np.ndarray, sigma: np.ndarray) -> float:
    """sigma^dagger mat sigma for Hermitian mat, checked real."""
    q = complex(np.vdot(sigma, mat @ sigma))
    if abs(q.imag) > _RESIDUE_ERROR:
        raise ConsistencyError(
            f"quadratic form residue {q.imag:.3e} exceeds {_RESIDUE_ERROR}"
        )
    return q.real


@dataclass(frozen=True)
class EigenSystem:
    """Biorthogonal eigendecomposition of the evolution matrix M.

    Columns of `right`/`left` hold right and left eigenvectors paired by
    eigenvalue and normalized to L_alpha^T R_alpha = 1 (right columns keep
    unit 2-norm).
    """

    lambdas: np.ndarray
    right: np.ndarray
    left: np.ndarray
    biorth_error: float
    match_distance: float

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    @property
    def decay_rates(self) -> np.ndarray:
        """Mode decay rates Gamma_alpha = 2 Im{lambda_alpha}."""
        return 2.0 * np.imag(self.lambdas)

    @property
    def mode_shifts(self) -> np.ndarray:
        """Collective frequency shifts -Re{lambda_alpha}."""
        return -np.real(self.lambdas)


def _clusters(lambdas: np.ndarray, tol: float) -> list[np.ndarray]:
    """Connected groups of eigenvalues closer than tol."""
    n = lambdas.shape[0]
    close = np.abs(lambdas[:, None] - lambdas[None, :]) <= tol
    seen = np.zeros(n, dtype=bool)
    groups = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = []
        while stack:
            i = stack.pop()
            members.append(i)
            for j in np.nonzero(close[i] & ~seen)[0]:
                seen[j] = True
                stack.append(int(j))
        groups.append(np.sort(np.asarray(members)))
    return groups


def eigendecompose(m_matrix) -> EigenSystem:
    """Pair left and right eigenvectors of M and normalize biorthogonally.

    Left vectors come from eig(M^T); pairs are matched to the right
    spectrum by optimal assignment on eigenvalue distance. Degenerate
    clusters with vanishing overlaps are re-paired inside the cluster by
    maximizing |L^T R| before the decomposition is declared defective.
    """
    m = np.asarray(m_matrix, dtype=complex)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    lam, right = np.linalg.eig(m)
    order = np.lexsort((lam.imag, lam.real))
    lam, right = lam[order], right[:, order]
    lam_l, left = np.linalg.eig(m.T)
    scale = max(float(np.linalg.norm(m, ord="fro")), 1.0)

    cost = np.abs(lam[:, None] - lam_l[None, :])
    rows, cols = linear_sum_assignment(cost)
    left = left[:, cols]
    match_distance = float(cost[rows, cols].max()) if n else 0.0

    overlaps = np.einsum("ia,ia->a", left, right)
    if np.any(np.abs(overlaps) < _OVERLAP_FLOOR):
        # Arbitrary vector choices inside a degenerate cluster can land on
        # orthogonal pairings; fix by overlap-maximizing reassignment.
        for group in _clusters(lam, 1e-8 * scale):
            if group.size < 2 or np.all(np.abs(overlaps[group]) >= _OVERLAP_FLOOR):
                continue
            block = np.abs(left[:, group].T @ right[:, group])
            r_idx, c_idx = linear_sum_assignment(-block)
            left[:, group[c_idx]] = left[:, group[r_idx]]
            overlaps = np.einsum("ia,ia->a", left, right)
        bad = np.abs(overlaps) < _OVERLAP_FLOOR
        if np.any(bad):
            raise DefectiveMatrixError(
                f"{int(bad.sum())} eigenvector pair(s) with |L^T R| < "
                f"{_OVERLAP_FLOOR}; matrix is numerically defective"
            )
    left = left / overlaps[None, :]
    biorth_error = float(np.max(np.abs(left.T @ right - np.eye(n))))
    return EigenSystem(
        lambdas=lam,
        right=right,
        left=left,
        biorth_error=biorth_error,
        match_distance=match_distance,
    )


@dataclass(frozen=True)
class ExcitationState:
    """Initial coherence vector plus its modal weights.

    drive_scale records any rescaling applied to respect the weak-drive
    bound max|sigma_j| <= 0.1 (all reported metrics are scale invariant).
    """

    sigma: np.ndarray
    weights: np.ndarray
    kind: str
    drive_scale: float = 1.0


def weights_tds(eig: EigenSystem, omega: np.ndarray, eps: float = 0.01) -> np.ndarray:
    """Modal weights of the timed-Dicke state eps * Omega / |Omega|."""
    if not 0.0 < eps <= 0.1:
        raise ValueError(f"eps must be in (0, 0.1], got {eps}")
    omega = np.asarray(omega, dtype=complex)
    norm = float(np.linalg.norm(omega))
    if norm == 0.0:
        raise ValueError("drive vector is zero; timed-Dicke state undefined")
    return eps * (eig.left.T @ omega) / norm


def excite_tds(eig: EigenSystem, omega: np.ndarray, eps: float = 0.01) -> ExcitationState:
    """Timed-Dicke excitation: sigma proportional to the drive vector."""
    omega = np.asarray(omega, dtype=complex)
    w = weights_tds(eig, omega, eps)
    sigma = eps * omega / np.linalg.norm(omega)
    return ExcitationState(sigma=sigma, weights=w, kind="tds")


def weights_ss(eig: EigenSystem, omega: np.ndarray) -> np.ndarray:
    """Modal weights of the driven steady state sigma_ss = -M^{-1} Omega."""
    omega = np.asarray(omega, dtype=complex)
    small = np.abs(eig.lambdas) < 1e-12
    if np.any(small):
        raise DarkPoleError(
            f"steady state undefined: eigenvalue magnitude "
            f"{np.abs(eig.lambdas).min():.3e} below 1e-12"
        )
    return -(eig.left.T @ omega) / eig.lambdas


def excite_ss(eig: EigenSystem, omega: np.ndarray) -> ExcitationState:
    """Steady-state excitation under the bus drive, weak-drive normalized."""
    w = weights_ss(eig, omega)
    sigma = eig.right @ w
    peak = float(np.max(np.abs(sigma))) if sigma.size else 0.0
    scale = 1.0
    if peak > 0.1:
        scale = 0.1 / peak
        sigma = sigma * scale
        w = w * scale
    return ExcitationState(sigma=sigma, weights=w, kind="ss", drive_scale=scale)


def steady_state_sigma(m_matrix, omega) -> np.ndarray:
    """Direct-solve steady state sigma_ss = -M^{-1} Omega (no rescaling)."""
    return np.linalg.solve(np.asarray(m_matrix, complex),
                           -np.asarray(omega, complex))


def evolve(eig: EigenSystem, weights: np.ndarray, times) -> np.ndarray:
    """sigma(t) = sum_alpha w_alpha exp(i lambda_alpha t) R_alpha.

    Returns shape (n,) for scalar t, else (n, len(times)).
    """
    t = np.asarray(times, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    phases = np.exp(1j * np.outer(eig.lambdas, t))
    out = eig.right @ (np.asarray(weights, complex)[:, None] * phases)
    return out[:, 0] if scalar else out


def emission_rates(sigma, g_cav, g_free) -> tuple[np.ndarray, np.ndarray]:
    """Photon emission rates (R_c, R_f) for one state or a trajectory.

    sigma may be (n,) or (n, T); rates come back as scalars or length-T
    arrays. Each rate is the Hermitian quadratic form sigma^dagger
    Gamma^Q sigma; a residual imaginary part above 1e-9 raises
    ConsistencyError, smaller residues are discarded.
    """
    gam_c, gam_f = channel_rate_matrices(g_cav, g_free)
    s = np.asarray(sigma, dtype=complex)
    if s.ndim == 1:
        return _real_qform(gam_c, s), _real_qform(gam_f, s)
    qc = np.einsum("it,ij,jt->t", s.conj(), gam_c, s)
    qf = np.einsum("it,ij,jt->t", s.conj(), gam_f, s)
    resid = max(np.max(np.abs(qc.imag)), np.max(np.abs(qf.imag)))
    if resid > _RESIDUE_ERROR:
        raise ConsistencyError(
            f"rate residue {resid:.3e} exceeds {_RESIDUE_ERROR}"
        )
    return qc.real, qf.real


@dataclass(frozen=True)
class DecayMetrics:
    """Initial-slope metrics of a decaying state.

    gamma_f, gamma_c: excitation decay rates into each channel,
        R_Q(0) / e(0).
    Gamma_f, Gamma_c: photon-rate decay contributions, -Rdot_Q(0) / R(0).
    Gamma_exp: observed cavity-rate decay -Rdot_c(0) / R_c(0)
        (equals Gamma_c + theta * Gamma_f).
    theta: channel asymmetry [Rdot_c/R_c] / [Rdot_f/R_f].

    Metrics whose denominators vanish are None and excluded from
    ensemble statistics.
    """

    gamma_f: float
    gamma_c: float
    Gamma_f: float | None
    Gamma_c: float | None
    Gamma_exp: float | None
    theta: float | None

    def as_dict(self) -> dict:
        return {
            "gamma_f": self.gamma_f,
            "gamma_c": self.gamma_c,
            "Gamma_f": self.Gamma_f,
            "Gamma_c": self.Gamma_c,
            "Gamma_exp": self.Gamma_exp,
            "theta": self.theta,
        }


def decay_metrics(sigma, m_matrix, g_cav, g_free) -> DecayMetrics:
    """Instantaneous decay metrics of the undriven state sigma at t = 0."""
    s = np.asarray(sigma, dtype=complex)
    e0 = float(np.vdot(s, s).real)
    if not e0 > 0.0:
        raise ValueError("excited population must be positive")
    gam_c, gam_f = channel_rate_matrices(g_cav, g_free)
    r_c = _real_qform(gam_c, s)
    r_f = _real_qform(gam_f, s)
    sdot = 1j * (np.asarray(m_matrix, complex) @ s)
    rdot_c = 2.0 * float(np.real(np.vdot(sdot, gam_c @ s)))
    rdot_f = 2.0 * float(np.real(np.vdot(sdot, gam_f @ s)))
    r_tot = r_c + r_f

    def _ratio(num, den):
        return (num / den) if abs(den) > _DIV_FLOOR else None

    big_f = _ratio(-rdot_f, r_tot)
    big_c = _ratio(-rdot_c, r_tot)
    gamma_exp = _ratio(-rdot_c, r_c)
    theta = None
    if abs(r_c) > _DIV_FLOOR and abs(r_f) > _DIV_FLOOR and abs(rdot_f) > _DIV_FLOOR:
        theta = (rdot_c / r_c) / (rdot_f / r_f)
    return DecayMetrics(
        gamma_f=r_f / e0,
        gamma_c=r_c / e0,
        Gamma_f=big_f,
        Gamma_c=big_c,
        Gamma_exp=gamma_exp,
        theta=theta,
    )


@dataclass(frozen=True)
class EmissionRecord:
    """Time-resolved emission of an undriven initial state."""

    times: np.ndarray
    rate_cavity: np.ndarray
    rate_free: np.ndarray
    excited: np.ndarray
    metrics: DecayMetrics
    lambdas: np.ndarray
    kind: str

    def to_csv(self, path):
        return reports.write_csv(
            path,
            ["t", "rate_cavity", "rate_free", "excited"],
            [self.times, self.rate_cavity, self.rate_free, self.excited],
        )

    def metrics_payload(self) -> dict:
        return {
            "kind": self.kind,
            "metrics": self.metrics.as_dict(),
            "eigenvalues": [
                {"re": float(l.real), "im": float(l.imag)} for l in self.lambdas
            ],
        }


def emission_record(m_matrix, g_cav, g_free, state: ExcitationState,
                    times=None, eig: EigenSystem | None = None) -> EmissionRecord:
    """Evolve an excitation and record channel rates on a time grid.

    Validates rate positivity and the energy balance
    R_c + R_f = -de/dt on the grid.
    """
    if eig is None:
        eig = eigendecompose(m_matrix)
    t = DEFAULT_TIMES.copy() if times is None else np.asarray(times, dtype=float)
    traj = evolve(eig, state.weights, t)
    r_c, r_f = emission_rates(traj, g_cav, g_free)
    floor = -1e-12
    if np.min(r_c) < floor or np.min(r_f) < floor:
        raise ConsistencyError(
            f"negative emission rate: min R_c = {np.min(r_c):.3e}, "
            f"min R_f = {np.min(r_f):.3e}"
        )
    e = np.einsum("it,it->t", traj.conj(), traj).real
    sdot = eig.right @ (
        (1j * eig.lambdas * np.asarray(state.weights, complex))[:, None]
        * np.exp(1j * np.outer(eig.lambdas, t))
    )
    dedt = 2.0 * np.einsum("it,it->t", traj.conj(), sdot).real
    balance = float(np.max(np.abs(r_c + r_f + dedt)))
    if balance > 1e-8:
        raise ConsistencyError(
            f"energy balance violated: max |R_c + R_f + de/dt| = {balance:.3e}"
        )
    metrics = decay_metrics(state.sigma, m_matrix, g_cav, g_free)
    return EmissionRecord(
        times=t,
        rate_cavity=np.asarray(r_c),
        rate_free=np.asarray(r_f),
        excited=e,
        metrics=metrics,
        lambdas=eig.lambdas.copy(),
        kind=state.kind,
    )


def photon_budget(eig: EigenSystem, weights, g_cav, g_free) -> tuple[float, float]:
    """Time-integrated photon numbers (cavity, free space) of a decay.

    Closed form over mode pairs:
        integral.0^inf sigma^dagger Gamma^Q sigma dt
            = sum_{ab} K^Q_{ab} * i / (lambda_b - conj(lambda_a)),
    with K^Q = B^dagger Gamma^Q B and B the weighted right eigenvectors.
    Requires every mode to decay; the two numbers sum to e(0).
    """
    rates = eig.decay_rates
    if np.any(rates <= 1e-14):
        raise ValueError(
            f"photon budget undefined: slowest mode decay {rates.min():.3e}"
        )
    gam_c, gam_f = channel_rate_matrices(g_cav, g_free)
    b = eig.right * np.asarray(weights, complex)[None, :]
    denom = eig.lambdas[None, :] - eig.lambdas.conj()[:, None]
    kernel = 1j / denom
    out = []
    for gam in (gam_c, gam_f):
        k = b.conj().T @ gam @ b
        val = complex(np.sum(k * kernel))
        if abs(val.imag) > _RESIDUE_ERROR:
            raise ConsistencyError(
                f"photon budget residue {val.imag:.3e} exceeds {_RESIDUE_ERROR}"
            )
        out.append(val.real)
    return out[0], out[1]

"""Reference master-equation propagators.

Two independent models cross-check the eigenmode machinery:

* an *eliminated* model on the basis {|G>, |e_j>} (dimension N+1) whose
  Hamiltonian and collective jump matrix are the Hermitian and
  anti-Hermitian parts of the total coupling G = G_c + G_f, so that the
  coherence vector obeys exactly d sigma/dt = i M sigma + i Omega;

* a *full cavity* model on {|G,0>, |e_j,0>, |G,1>} (dimension N+2) that
  keeps the photon mode explicitly (one-photon truncation) with coherent
  atom-photon exchange, photon loss at kappa, and the free-space
  collective decay; adiabatic elimination is not assumed, so agreement
  with the eliminated model is a genuine physics check that improves as
  kappa grows.

Both use fixed-step RK4 with conservative default steps; trace drift
beyond 1e-6 raises StepSizeError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityMatrix, build_cavity_matrix, drive_vector
from .dynamics import (
    build_evolution_matrix,
    channel_rate_matrices,
    eigendecompose,
    emission_rates,
    evolve,
)
from .errors import ConsistencyError, StepSizeError
from .free_space import build_free_matrix
from .geometry import AtomConfig

_TRACE_LIMIT = 1e-6
_HERM_LIMIT = 1e-10
_PURITY_LIMIT = 1.0 + 1e-10

# A model-comparison instance stays small enough to integrate densely.
MAX_ORACLE_ATOMS = 6


@dataclass(frozen=True)
class Trajectory:
    """Recorded observables of one master-equation propagation."""

    times: np.ndarray
    excited: np.ndarray
    rate_cavity: np.ndarray
    rate_free: np.ndarray
    coherences: np.ndarray
    trace_drift: float
    hermiticity_error: float
    purity_max: float
    rho_final: np.ndarray
    field: np.ndarray | None = None
    rate_cavity_external: np.ndarray | None = None
    rate_cavity_intrinsic: np.ndarray | None = None


def atomic_density(sigma, extra_levels: int = 0) -> np.ndarray:
    """Pure-state density matrix for ground/excited amplitudes sigma.

    The state is sqrt(1 - |sigma|^2) |G> + sum_j sigma_j |e_j>, zero-padded
    with extra_levels trailing basis states (the photon level of the full
    model).
    """
    s = np.asarray(sigma, dtype=complex).reshape(-1)
    p = float(np.vdot(s, s).real)
    if p > 1.0:
        raise ValueError(f"|sigma|^2 = {p} exceeds 1")
    c = np.concatenate([[math.sqrt(1.0 - p)], s, np.zeros(extra_levels, complex)])
    return np.outer(c, c.conj())


def photon_density(n_atoms: int) -> np.ndarray:
    """Full-model density matrix with one photon and all atoms in |g>."""
    dim = n_atoms + 2
    rho = np.zeros((dim, dim), dtype=complex)
    rho[dim - 1, dim - 1] = 1.0
    return rho


def slaved_density(sigma, cav: CavityMatrix, drive: float = 0.0) -> np.ndarray:
    """Full-model pure state with the photon amplitude slaved to sigma.

    The eliminated model describes the joint state in which the cavity
    follows the atoms as <a> = (u^dagger sigma + eta) / kappa_tilde;
    starting the explicit-photon model there removes the O(e^{-kappa t/2})
    loading transient a vacuum start would add.
    """
    s = np.asarray(sigma, dtype=complex).reshape(-1)
    a = (np.vdot(cav.mode_vector, s) + drive) / cav.kappa_tilde
    n = s.shape[0]
    c = np.zeros(n + 2, dtype=complex)
    c[1:n + 1] = s
    c[n + 1] = a
    occ = float(np.vdot(c, c).real)
    if occ > 1.0:
        raise ValueError(f"excitation weight {occ} exceeds 1")
    c[0] = math.sqrt(1.0 - occ)
    return np.outer(c, c.conj())


def _record_grid(t_end: float, n_points: int) -> np.ndarray:
    if not t_end > 0.0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    return np.linspace(0.0, t_end, n_points)


def _substeps(t_step: float, dt_target: float) -> int:
    return max(1, int(math.ceil(t_step / dt_target)))


def _rk4_segment(rho, rhs, dt, steps):
    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + (0.5 * dt) * k1)
        k3 = rhs(rho + (0.5 * dt) * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho


def _check_state(rho, trace_drift, herm_err, purity):
    if trace_drift > _TRACE_LIMIT:
        raise StepSizeError(
            f"trace drift {trace_drift:.3e} exceeds {_TRACE_LIMIT}; "
            "reduce the integration step"
        )
    if herm_err > _HERM_LIMIT:
        raise ConsistencyError(f"density matrix lost Hermiticity: {herm_err:.3e}")
    if purity > _PURITY_LIMIT:
        raise ConsistencyError(f"purity {purity} exceeds 1")


def propagate_eliminated(g_cav, g_free, omega, rho0, t_end: float,
                         dt: float | None = None, delta_a: float = 0.0,
                         n_points: int = 201) -> Trajectory:
    """RK4 integration of the cavity-eliminated master equation.

    omega is the effective atomic drive (zero vector for free decay);
    rho0 lives on the (N+1)-dimensional basis {|G>, |e_j>}.
    """
    gc = g_cav.matrix if isinstance(g_cav, CavityMatrix) else np.asarray(g_cav, complex)
    gf = np.asarray(g_free, dtype=complex)
    n = gc.shape[0]
    g_total = gc + gf
    omega = np.zeros(n) if omega is None else np.asarray(omega, complex)

    h = np.zeros((n + 1, n + 1), dtype=complex)
    h[1:, 1:] = 0.5 * (g_total + g_total.conj().T) - delta_a * np.eye(n)
    h[1:, 0] = -omega
    h[0, 1:] = -omega.conj()
    gam_total = 1j * (g_total - g_total.conj().T)
    gam_c, gam_f = channel_rate_matrices(gc, gf)
    gam_emb = np.zeros_like(h)
    gam_emb[1:, 1:] = gam_total

    def rhs(rho):
        out = -1j * (h @ rho - rho @ h)
        out -= 0.5 * (gam_emb @ rho + rho @ gam_emb)
        out[0, 0] += np.einsum("ij,ji->", gam_total, rho[1:, 1:])
        return out

    if dt is None:
        dt = 0.01 / max(float(np.max(np.abs(g_total))), abs(delta_a), 1.0)
    times = _record_grid(t_end, n_points)
    step = times[1] - times[0]
    sub = _substeps(step, dt)

    rho = np.asarray(rho0, dtype=complex).copy()
    if rho.shape != (n + 1, n + 1):
        raise ValueError(f"rho0 must have shape {(n + 1, n + 1)}, got {rho.shape}")
    exc = np.empty(n_points)
    r_c = np.empty(n_points)
    r_f = np.empty(n_points)
    coh = np.empty((n_points, n), dtype=complex)
    drift = herm = pur = 0.0
    for k in range(n_points):
        if k:
            rho = _rk4_segment(rho, rhs, step / sub, sub)
        ree = rho[1:, 1:]
        exc[k] = float(np.trace(ree).real)
        r_c[k] = float(np.einsum("ij,ji->", gam_c, ree).real)
        r_f[k] = float(np.einsum("ij,ji->", gam_f, ree).real)
        coh[k] = rho[1:, 0]
        drift = max(drift, abs(complex(np.trace(rho)) - 1.0))
        herm = max(herm, float(np.max(np.abs(rho - rho.conj().T))))
        pur = max(pur, float(np.einsum("ij,ji->", rho, rho).real))
    _check_state(rho, drift, herm, pur)
    return Trajectory(
        times=times, excited=exc, rate_cavity=r_c, rate_free=r_f,
        coherences=coh, trace_drift=drift, hermiticity_error=herm,
        purity_max=pur, rho_final=rho,
    )


def propagate_full_cavity(cav: CavityMatrix, g_free, rho0, t_end: float,
                          dt: float | None = None, delta_a: float = 0.0,
                          drive: float | None = None,
                          n_points: int = 201) -> Trajectory:
    """RK4 integration with the photon mode kept explicitly (one photon).

    Basis {|G,0>, |e_j,0>, |G,1>}; drive defaults to cav.params.eta and can
    be overridden (0.0 for free decay).
    """
    gf = np.asarray(g_free, dtype=complex)
    n = cav.n
    p = cav.params
    eta = p.eta if drive is None else float(drive)
    u = cav.mode_vector
    dim = n + 2

    h = np.zeros((dim, dim), dtype=complex)
    h[1:n + 1, 1:n + 1] = 0.5 * (gf + gf.conj().T) - delta_a * np.eye(n)
    h[1:n + 1, n + 1] = u
    h[n + 1, 1:n + 1] = u.conj()
    h[n + 1, n + 1] = -p.delta_c
    h[0, n + 1] = eta
    h[n + 1, 0] = eta

    gam_f = 1j * (gf - gf.conj().T)
    gam_emb = np.zeros_like(h)
    gam_emb[1:n + 1, 1:n + 1] = gam_f
    gam_emb[n + 1, n + 1] = p.kappa

    def rhs(rho):
        out = -1j * (h @ rho - rho @ h)
        out -= 0.5 * (gam_emb @ rho + rho @ gam_emb)
        out[0, 0] += np.einsum("ij,ji->", gam_f, rho[1:n + 1, 1:n + 1])
        out[0, 0] += p.kappa * rho[n + 1, n + 1]
        return out

    if dt is None:
        dt = 0.4 / max(p.kappa, float(np.max(np.abs(gf))), abs(delta_a), 1.0)
    times = _record_grid(t_end, n_points)
    step = times[1] - times[0]
    sub = _substeps(step, dt)

    rho = np.asarray(rho0, dtype=complex).copy()
    if rho.shape != (dim, dim):
        raise ValueError(f"rho0 must have shape {(dim, dim)}, got {rho.shape}")
    exc = np.empty(n_points)
    r_ext = np.empty(n_points)
    r_int = np.empty(n_points)
    r_f = np.empty(n_points)
    coh = np.empty((n_points, n), dtype=complex)
    fld = np.empty(n_points, dtype=complex)
    drift = herm = pur = 0.0
    for k in range(n_points):
        if k:
            rho = _rk4_segment(rho, rhs, step / sub, sub)
        ratoms = rho[1:n + 1, 1:n + 1]
        nph = float(rho[n + 1, n + 1].real)
        exc[k] = float(np.trace(ratoms).real)
        r_ext[k] = p.kappa_e * nph
        r_int[k] = p.kappa_i * nph
        r_f[k] = float(np.einsum("ij,ji->", gam_f, ratoms).real)
        coh[k] = rho[1:n + 1, 0]
        fld[k] = rho[n + 1, 0]
        drift = max(drift, abs(complex(np.trace(rho)) - 1.0))
        herm = max(herm, float(np.max(np.abs(rho - rho.conj().T))))
        pur = max(pur, float(np.einsum("ij,ji->", rho, rho).real))
    _check_state(rho, drift, herm, pur)
    return Trajectory(
        times=times, excited=exc, rate_cavity=r_ext + r_int, rate_free=r_f,
        coherences=coh, trace_drift=drift, hermiticity_error=herm,
        purity_max=pur, rho_final=rho, field=fld,
        rate_cavity_external=r_ext, rate_cavity_intrinsic=r_int,
    )


def _sup_deviation(a, b, ref) -> float:
    scale = max(float(np.max(np.abs(ref))), 1e-300)
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / scale


@dataclass(frozen=True)
class ModelComparison:
    """Cross-model agreement report for one small instance."""

    times: np.ndarray
    eigen_vs_eliminated: dict
    eliminated_vs_full: dict | None
    t_min_full: float
    tol_eigen: float
    tol_full: float
    passed: bool

    @property
    def max_eigen_deviation(self) -> float:
        return max(self.eigen_vs_eliminated.values())

    @property
    def max_full_deviation(self) -> float | None:
        if self.eliminated_vs_full is None:
            return None
        return max(self.eliminated_vs_full.values())


def compare_models(config: AtomConfig, cavity_params, *, sigma0=None,
                   delta_a: float = 0.0, t_end: float = 3.0,
                   include_full: bool = True, dt_eliminated: float | None = None,
                   dt_full: float | None = None, tol_eigen: float = 1e-6,
                   tol_full: float = 0.03, n_points: int = 121,
                   eps: float = 0.01, uniform_c: bool = False) -> ModelComparison:
    """Free decay of one initial state through all three descriptions.

    Compares eigenmode evolution against the eliminated RK4 model
    (tolerance tol_eigen on e, R_c, R_f relative to each curve's peak) and,
    when include_full is set, the eliminated model against the explicit
    photon model for t >= 5/kappa (tolerance tol_full).
    """
    if config.n > MAX_ORACLE_ATOMS:
        raise ValueError(
            f"model comparison limited to {MAX_ORACLE_ATOMS} atoms, got {config.n}"
        )
    gf = build_free_matrix(config)
    cav = build_cavity_matrix(config, cavity_params, uniform_c=uniform_c)
    if sigma0 is None:
        omega = drive_vector(cav)
        sigma0 = eps * omega / np.linalg.norm(omega)
    sigma0 = np.asarray(sigma0, dtype=complex)
    m = build_evolution_matrix(cav, gf, delta_a)

    eig = eigendecompose(m)
    w = eig.left.T @ sigma0
    times = _record_grid(t_end, n_points)
    traj = evolve(eig, w, times)
    r_c_eig, r_f_eig = emission_rates(traj, cav, gf)
    e_eig = np.einsum("it,it->t", traj.conj(), traj).real

    elim = propagate_eliminated(cav, gf, None, atomic_density(sigma0), t_end,
                                dt=dt_eliminated, delta_a=delta_a,
                                n_points=n_points)
    dev_eigen = {
        "excited": _sup_deviation(e_eig, elim.excited, e_eig),
        "rate_cavity": _sup_deviation(r_c_eig, elim.rate_cavity, r_c_eig),
        "rate_free": _sup_deviation(r_f_eig, elim.rate_free, r_f_eig),
    }

    dev_full = None
    t_min_full = 5.0 / cavity_params.kappa
    if include_full:
        full = propagate_full_cavity(cav, gf, slaved_density(sigma0, cav), t_end,
                                     dt=dt_full, delta_a=delta_a, drive=0.0,
                                     n_points=n_points)
        mask = times >= t_min_full
        dev_full = {
            "excited": _sup_deviation(full.excited[mask], elim.excited[mask],
                                      elim.excited[mask]),
            "rate_cavity": _sup_deviation(full.rate_cavity[mask],
                                          elim.rate_cavity[mask],
                                          elim.rate_cavity[mask]),
            "rate_free": _sup_deviation(full.rate_free[mask],
                                        elim.rate_free[mask],
                                        elim.rate_free[mask]),
        }
    passed = max(dev_eigen.values()) <= tol_eigen and (
        dev_full is None or max(dev_full.values()) <= tol_full
    )
    return ModelComparison(
        times=times, eigen_vs_eliminated=dev_eigen, eliminated_vs_full=dev_full,
        t_min_full=t_min_full, tol_eigen=tol_eigen, tol_full=tol_full,
        passed=passed,
    )

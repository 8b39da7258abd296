"""Ensemble drivers: cloud statistics, transmission spectra, array maps,
disorder and geometry sweeps, and the Lorentzian line fitter.

Every stochastic driver draws one child seed per trial from a master
SeedSequence and folds results in trial order, so outputs are
bit-identical for any worker count. Trials whose realization or
decomposition is unusable are excluded and counted by reason; an ensemble
with zero accepted trials raises EnsembleError.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import norm

from . import reports
from .cavity import (
    CavityParams,
    build_cavity_matrix,
    drive_vector,
    empty_transmission,
)
from .dynamics import (
    build_evolution_matrix,
    decay_metrics,
    eigendecompose,
    excite_ss,
)
from .errors import (
    DarkPoleError,
    DefectiveMatrixError,
    EnsembleError,
    GenerationError,
    NearCoincidenceError,
)
from .free_space import build_free_matrix
from .geometry import (
    ArrayParams,
    CloudParams,
    Z_FLOOR,
    build_array,
    sample_cloud,
    spawn_seeds,
)
from .stats import EnsembleStats, histogram_edges
from .units import GAMMA0, K0

METRIC_NAMES = ("gamma_f", "gamma_c", "Gamma_f", "Gamma_c", "Gamma_exp", "theta")

_BIORTH_LIMIT = 1e-10


def _map_ordered(fn, tasks, workers):
    """Yield fn(task) for each task, strictly in task order.

    Streaming lets callers fold results incrementally (and keep whatever
    arrived if interrupted); the order never depends on the worker count.
    """
    tasks = list(tasks)
    workers = 1 if workers is None else int(workers)
    if workers <= 1 or len(tasks) <= 1:
        for t in tasks:
            yield fn(t)
        return
    with ProcessPoolExecutor(max_workers=workers) as ex:
        chunk = max(1, len(tasks) // (workers * 4))
        yield from ex.map(fn, tasks, chunksize=chunk)


def coupling_calibration_factor(cloud: CloudParams, z_ev: float,
                                floor: float = Z_FLOOR) -> float:
    """Mean evanescent cooperativity factor over the cloud's height spread.

    E[exp(-2 (z - z_mean)/z_ev)] for z normal (z_mean, sigma_z) truncated
    to z > floor, in closed form via Gaussian survival functions.
    """
    if not math.isfinite(z_ev):
        return 1.0
    sigma = cloud.sigma_z
    if sigma == 0.0:
        return 1.0
    a = 2.0 / z_ev
    alpha = (floor - cloud.z_mean) / sigma
    log_e = (0.5 * a * a * sigma * sigma
             + norm.logsf(alpha + a * sigma) - norm.logsf(alpha))
    return float(np.exp(log_e))


def calibrated_for_cloud(params: CavityParams, cloud: CloudParams) -> CavityParams:
    """Pin the ensemble-mean single-atom cooperativity to params.c_ref.

    Height-dependent coupling makes E[C] exceed the cooperativity at the
    mean height; the reference is moved to the cloud's mean height and
    c_ref divided by the analytic truncated-Gaussian factor so that the
    ensemble mean lands on the nominal value.
    """
    factor = coupling_calibration_factor(cloud, params.z_ev)
    return replace(params, c_ref=params.c_ref / factor, z_ref=cloud.z_mean)


def _config_metrics(config, cav_params, kind, uniform_c, k_wg, eps):
    """Metrics of one configuration, or (None, reason) on exclusion."""
    try:
        gf = build_free_matrix(config)
    except NearCoincidenceError:
        return None, "near_coincidence"
    return _config_metrics_with_free(config, gf, cav_params, kind,
                                     uniform_c, k_wg, eps)


def _config_metrics_with_free(config, gf, cav_params, kind, uniform_c,
                              k_wg, eps):
    cav = build_cavity_matrix(config, cav_params, uniform_c=uniform_c, k_wg=k_wg)
    omega = drive_vector(cav)
    m = build_evolution_matrix(cav, gf)
    if kind == "tds":
        # initial-slope metrics need only the state vector, so skip the
        # eigendecomposition; highly symmetric arrays (rings) have
        # degenerate modes whose biorthogonal pairing is ill-conditioned
        # even though the metrics themselves are perfectly defined
        norm = float(np.linalg.norm(omega))
        if norm == 0.0:
            return None, "zero_drive"
        sigma = eps * omega / norm
        return decay_metrics(sigma, m, cav, gf).as_dict(), None
    if kind != "ss":
        raise ValueError(f"unknown excitation kind {kind!r}")
    try:
        eig = eigendecompose(m)
    except DefectiveMatrixError:
        return None, "defective"
    if eig.biorth_error > _BIORTH_LIMIT:
        return None, "biorthogonality"
    try:
        state = excite_ss(eig, omega)
    except DarkPoleError:
        return None, "dark_pole"
    return decay_metrics(state.sigma, m, cav, gf).as_dict(), None


def _cloud_trial(task):
    seed, cloud, cav_params, kind, uniform_c, ks, eps = task
    try:
        config = sample_cloud(cloud, seed)
        gf = build_free_matrix(config)
    except NearCoincidenceError:
        return None, "near_coincidence"
    except GenerationError:
        return None, "generation"
    out = []
    for k in ks:
        k_wg = None if k is None else k * K0
        metrics, reason = _config_metrics_with_free(
            config, gf, cav_params, kind, uniform_c, k_wg, eps)
        if reason is not None:
            return None, reason
        out.append(metrics)
    return out, None


def run_cloud_ensemble(cloud: CloudParams, cavity: CavityParams,
                       excitation: str = "tds", k_scan=None,
                       trials: int = 1000, seed=0, uniform_c: bool = False,
                       workers: int = 1, eps: float = 0.01,
                       histogram_bins: int = 60):
    """Monte Carlo decay metrics over cloud realizations.

    k_scan, when given, is a list of waveguide propagation constants in
    units of K0 evaluated on shared realizations; the return value is then
    a dict {k: EnsembleStats}, otherwise a single EnsembleStats. A trial
    excluded at any scan point is excluded everywhere, keeping the trial
    sets identical across the scan.
    """
    if excitation not in ("tds", "ss"):
        raise ValueError(f"excitation must be 'tds' or 'ss', got {excitation!r}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cav_eff = cavity if uniform_c else calibrated_for_cloud(cavity, cloud)
    ks = [None] if k_scan is None else [float(k) for k in k_scan]
    edges = {
        "gamma_f": histogram_edges(3.0 * GAMMA0, histogram_bins),
        "gamma_c": histogram_edges(
            3.0 * cloud.n_atoms * cavity.c_ref * GAMMA0, histogram_bins),
    }
    all_stats = [EnsembleStats(METRIC_NAMES, edges) for _ in ks]
    tasks = [
        (s, cloud, cav_eff, excitation, uniform_c, ks, eps)
        for s in spawn_seeds(seed, trials)
    ]
    partial = False
    try:
        for metrics_list, reason in _map_ordered(_cloud_trial, tasks, workers):
            for st in all_stats:
                if reason is not None:
                    st.exclude_trial(reason)
            if reason is None:
                for st, metrics in zip(all_stats, metrics_list):
                    st.add_trial(metrics)
    except KeyboardInterrupt:
        partial = True
    for st in all_stats:
        st.partial = partial
        st.validate()
    if k_scan is None:
        return all_stats[0]
    return {k: st for k, st in zip(ks, all_stats)}


@dataclass(frozen=True)
class FitResult:
    """Lorentzian fit y = offset + amplitude / (1 + ((x - center)/(fwhm/2))^2)."""

    center: float
    fwhm: float
    amplitude: float
    offset: float
    residual: float
    converged: bool
    message: str = ""


def _initial_lorentzian_guess(x, y):
    off0 = float(np.median(np.concatenate([y[:3], y[-3:]])))
    dev = y - off0
    ipk = int(np.argmax(np.abs(dev)))
    amp0 = float(dev[ipk])
    cen0 = float(x[ipk])
    half = 0.5 * abs(amp0)
    absdev = np.abs(dev)
    lo = ipk
    while lo > 0 and absdev[lo] >= half:
        lo -= 1
    hi = ipk
    while hi < x.size - 1 and absdev[hi] >= half:
        hi += 1
    # Interpolate each half-maximum crossing where possible.
    if absdev[lo] < half and lo < ipk:
        f = (half - absdev[lo]) / (absdev[lo + 1] - absdev[lo])
        xl = x[lo] + f * (x[lo + 1] - x[lo])
    else:
        xl = x[lo]
    if absdev[hi] < half and hi > ipk:
        f = (half - absdev[hi]) / (absdev[hi - 1] - absdev[hi])
        xr = x[hi] - f * (x[hi] - x[hi - 1])
    else:
        xr = x[hi]
    width0 = abs(xr - xl)
    if not width0 > 0.0:
        width0 = (x[-1] - x[0]) / 4.0
    return np.array([cen0, width0, amp0, off0])


def fit_lorentzian(x, y) -> FitResult:
    """Least-squares Lorentzian fit with data-driven initialization.

    Requires at least 8 samples; terminates on a relative parameter step
    below 1e-9 or 500 iterations. Flat input is flagged (converged False)
    instead of fitted.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if x.size < 8:
        raise ValueError(f"need at least 8 samples, got {x.size}")
    span = float(np.ptp(y))
    scale = max(float(np.max(np.abs(y))), 1.0)
    if span <= 1e-14 * scale:
        return FitResult(center=float(np.mean(x)), fwhm=float("nan"),
                         amplitude=0.0, offset=float(np.mean(y)),
                         residual=float(np.std(y)), converged=False,
                         message="flat input")
    p0 = _initial_lorentzian_guess(x, y)

    def resid(p):
        c, w, a, o = p
        return o + a / (1.0 + ((x - c) / (0.5 * w)) ** 2) - y

    sol = least_squares(resid, p0, xtol=1e-9, ftol=2.3e-16, gtol=1e-15,
                        max_nfev=500 * (p0.size + 1))
    c, w, a, o = sol.x
    rms = float(np.sqrt(np.mean(sol.fun**2)))
    converged = bool(sol.status > 0)
    return FitResult(center=float(c), fwhm=float(abs(w)), amplitude=float(a),
                     offset=float(o), residual=rms, converged=converged,
                     message=str(sol.message))


@dataclass(frozen=True)
class SpectrumResult:
    """Ensemble-averaged bus transmission scan.

    transmission is mean |t|^2, extinction its complement, and
    atomic_power the mean |t - t_empty|^2 (power radiated by the atoms
    into the bus, with the bare-resonator response subtracted
    coherently); the Lorentzian fit runs on atomic_power.
    """

    detunings: np.ndarray
    transmission: np.ndarray
    extinction: np.ndarray
    atomic_power: np.ndarray
    fit: FitResult
    n_trials: int
    excluded: dict
    partial: bool = False

    def to_csv(self, path) -> Path:
        return reports.write_csv(
            path,
            ["delta", "transmission", "extinction", "atomic_power"],
            [self.detunings, self.transmission, self.extinction,
             self.atomic_power],
        )


def default_detuning_grid(n_atoms: int, c1: float, points: int = 201) -> np.ndarray:
    """Symmetric grid covering +-5 collective linewidths (1 + N C1)."""
    half = 5.0 * (1.0 + n_atoms * c1) * GAMMA0
    return np.linspace(-half, half, points)


def _spectrum_trial(task):
    (seed, geom, cav_params, deltas, uniform_c, no_freespace) = task
    try:
        if isinstance(geom, CloudParams):
            config = sample_cloud(geom, seed)
        else:
            config = build_array(geom, seed)
        if no_freespace:
            # drop only the collective dipole-dipole coupling; every atom
            # keeps its individual free-space decay GAMMA0
            gf = np.diag(np.full(config.n, -0.5j))
        else:
            gf = build_free_matrix(config)
    except NearCoincidenceError:
        return None, "near_coincidence"
    except GenerationError:
        return None, "generation"
    p = cav_params
    cav = build_cavity_matrix(config, p, uniform_c=uniform_c)
    u = cav.mode_vector
    n = config.n
    kt = deltas + 0.5j * p.kappa
    eye = np.eye(n)
    ms = (deltas[:, None, None] * eye[None]
          - np.einsum("i,j->ij", u, u.conj())[None] / kt[:, None, None]
          - gf[None])
    rhs = u[None, :] * (p.eta / kt[:, None])
    try:
        sig = np.linalg.solve(ms, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        return None, "singular"
    amp = (np.einsum("kj,j->k", sig, u.conj()) + p.eta) / kt
    t = 1.0 - 1j * p.kappa_e * amp / p.eta
    t_empty = empty_transmission(deltas, p.kappa_i, p.kappa_e)
    return (np.abs(t) ** 2, np.abs(t - t_empty) ** 2), None


def compute_spectrum(geometry, cavity: CavityParams, detunings=None,
                     trials: int = 100, seed=0, uniform_c: bool = False,
                     poisson_n: bool | None = None,
                     no_freespace: bool = False, no_stochastic: bool = False,
                     workers: int = 1, grid_points: int = 201) -> SpectrumResult:
    """Scan the bus transmission, co-moving atom and cavity detuning.

    At each grid point delta the laser-frame detunings are
    Delta_A = Delta_C = delta. no_stochastic fixes the atom number,
    pins uniform coupling, and removes the height spread while keeping
    in-plane randomness.
    """
    if isinstance(geometry, CloudParams):
        geom = geometry
        if poisson_n is not None:
            geom = replace(geom, poisson_n=poisson_n)
        if no_stochastic:
            geom = replace(geom, poisson_n=False, sigma_z=0.0)
            uniform_c = True
        n_nominal = geom.n_atoms
        cav_eff = cavity if uniform_c else calibrated_for_cloud(cavity, geom)
    elif isinstance(geometry, ArrayParams):
        geom = geometry
        if no_stochastic:
            geom = replace(geom, delta_z=0.0)
            uniform_c = True
        n_nominal = geom.target_atoms or geom.n_sites
        cav_eff = cavity
    else:
        raise TypeError("geometry must be CloudParams or ArrayParams")
    if detunings is None:
        deltas = default_detuning_grid(n_nominal, cavity.c_ref, grid_points)
    else:
        deltas = np.asarray(detunings, dtype=float)
    if deltas.size < 8:
        raise ValueError("detuning grid must hold at least 8 points")

    tasks = [
        (s, geom, cav_eff, deltas, uniform_c, no_freespace)
        for s in spawn_seeds(seed, trials)
    ]
    t2_rows = []
    ap_rows = []
    excluded: dict[str, int] = {}
    partial = False
    try:
        for payload, reason in _map_ordered(_spectrum_trial, tasks, workers):
            if reason is not None:
                excluded[reason] = excluded.get(reason, 0) + 1
                continue
            t2_rows.append(payload[0])
            ap_rows.append(payload[1])
    except KeyboardInterrupt:
        partial = True
    if not t2_rows:
        raise EnsembleError(f"all {trials} spectrum trials excluded: {excluded}")
    t2 = np.mean(np.asarray(t2_rows), axis=0)
    ap = np.mean(np.asarray(ap_rows), axis=0)
    fit = fit_lorentzian(deltas, ap)
    return SpectrumResult(
        detunings=deltas, transmission=t2, extinction=1.0 - t2,
        atomic_power=ap, fit=fit, n_trials=len(t2_rows), excluded=excluded,
        partial=partial,
    )


@dataclass(frozen=True)
class SweepGrid:
    """Regular sweep over one or two axes with per-cell metric values."""

    axes: dict
    values: dict
    counts: np.ndarray
    excluded: np.ndarray
    meta: dict

    def to_csv(self, path) -> Path:
        names = list(self.axes)
        grids = np.meshgrid(*[self.axes[k] for k in names], indexing="ij")
        header = names + list(self.values) + ["count", "excluded"]
        cols = [g.ravel() for g in grids]
        cols += [np.asarray(self.values[k]).ravel() for k in self.values]
        cols += [self.counts.ravel(), self.excluded.ravel()]
        return reports.write_csv(path, header, cols)


def sweep_array_map(d_values, k_values, n_atoms: int = 20,
                    cavity: CavityParams | None = None,
                    z_height: float | None = None,
                    workers: int = 1) -> SweepGrid:
    """Timed-Dicke decay rates of a fully filled line array versus lattice
    spacing d (LAMBDA0 units) and waveguide propagation constant k (K0
    units). Deterministic: uniform coupling, no disorder.
    """
    cavity = cavity or CavityParams()
    d_values = np.asarray(d_values, dtype=float)
    k_values = np.asarray(k_values, dtype=float)
    tasks = []
    for d in d_values:
        params = ArrayParams(n_sites=n_atoms, spacing=float(d),
                             **({} if z_height is None else {"z_height": z_height}))
        tasks.extend((params, cavity, float(k)) for k in k_values)
    results = list(_map_ordered(_array_cell, tasks, workers))
    shape = (d_values.size, k_values.size)
    gamma_f = np.full(shape, np.nan)
    gamma_c = np.full(shape, np.nan)
    counts = np.zeros(shape, dtype=int)
    excl = np.zeros(shape, dtype=int)
    for idx, (metrics, reason) in enumerate(results):
        i, j = divmod(idx, k_values.size)
        if reason is None:
            gamma_f[i, j] = metrics["gamma_f"]
            gamma_c[i, j] = metrics["gamma_c"]
            counts[i, j] = 1
        else:
            excl[i, j] = 1
    return SweepGrid(
        axes={"d": d_values, "k": k_values},
        values={"gamma_f": gamma_f, "gamma_c": gamma_c},
        counts=counts, excluded=excl,
        meta={"n_atoms": n_atoms, "kind": "array_map"},
    )


def _array_cell(task):
    params, cavity, k = task
    try:
        config = build_array(params)
    except GenerationError:
        return None, "generation"
    return _config_metrics(config, cavity, "tds", True, k * K0, 0.01)


def _disorder_trial(task):
    seed, params, cavity, eps = task
    try:
        config = build_array(params, seed)
        gf = build_free_matrix(config)
    except NearCoincidenceError:
        return None, "near_coincidence"
    except GenerationError:
        return None, "generation"
    out = {}
    for label, uniform in (("zdep", False), ("uniform", True)):
        metrics, reason = _config_metrics_with_free(
            config, gf, cavity, "tds", uniform, None, eps)
        if reason is not None:
            return None, reason
        out[f"gamma_f_{label}"] = metrics["gamma_f"]
        out[f"gamma_c_{label}"] = metrics["gamma_c"]
    return out, None


def sweep_disorder(axis: str, values, n_target: int = 20, spacing: float = 0.3,
                   z_height: float | None = None,
                   cavity: CavityParams | None = None, trials: int = 500,
                   seed=0, workers: int = 1, eps: float = 0.01) -> SweepGrid:
    """Subradiance degradation under array imperfections.

    axis 'delta_z' sweeps Gaussian height disorder on a fully filled line;
    axis 'filling' sweeps the occupation probability of a line grown to
    n_target atoms. Each trial evaluates the same realization with the
    physical height-dependent coupling (zdep) and with coupling pinned
    uniform, so the two curves are a paired comparison.
    """
    if axis not in ("delta_z", "filling"):
        raise ValueError(f"axis must be 'delta_z' or 'filling', got {axis!r}")
    cavity = cavity or CavityParams()
    values = np.asarray(values, dtype=float)
    zh = {} if z_height is None else {"z_height": z_height}
    names = ["gamma_f_zdep", "gamma_f_uniform", "gamma_c_zdep", "gamma_c_uniform"]
    mean = {f"{n}_mean": np.full(values.size, np.nan) for n in names}
    sems = {f"{n}_sem": np.full(values.size, np.nan) for n in names}
    counts = np.zeros(values.size, dtype=int)
    excl = np.zeros(values.size, dtype=int)
    cell_seeds = np.random.SeedSequence(seed).spawn(values.size)
    partial = False
    for i, v in enumerate(values):
        if axis == "delta_z":
            params = ArrayParams(n_sites=n_target, spacing=spacing,
                                 delta_z=float(v), **zh)
        else:
            params = ArrayParams(n_sites=n_target, spacing=spacing,
                                 filling_fraction=float(v),
                                 target_atoms=n_target, **zh)
        stats = EnsembleStats(names)
        tasks = [(s, params, cavity, eps) for s in cell_seeds[i].spawn(trials)]
        try:
            for metrics, reason in _map_ordered(_disorder_trial, tasks, workers):
                if reason is None:
                    stats.add_trial(metrics)
                else:
                    stats.exclude_trial(reason)
        except KeyboardInterrupt:
            partial = True
        stats.validate()
        counts[i] = stats.accepted
        excl[i] = stats.excluded_total
        for n in names:
            mean[f"{n}_mean"][i] = stats.metrics[n].mean
            sems[f"{n}_sem"][i] = stats.metrics[n].sem
        if partial:
            break
    return SweepGrid(
        axes={axis: values},
        values={**mean, **sems},
        counts=counts, excluded=excl,
        meta={"n_target": n_target, "spacing": spacing, "kind": "disorder",
              "partial": partial},
    )


def compare_line_ring(n_values, spacing: float = 0.3,
                      cavity: CavityParams | None = None,
                      z_height: float | None = None,
                      workers: int = 1) -> SweepGrid:
    """Most subradiant timed-Dicke decay for line versus closed-ring arrays.

    Fully filled, uniform coupling, deterministic. The ring follows the
    resonator (closed guided path), the line runs along a straight bus.
    """
    cavity = cavity or CavityParams()
    n_values = np.asarray(n_values, dtype=int)
    zh = {} if z_height is None else {"z_height": z_height}
    tasks = []
    for n in n_values:
        for shape in ("line", "ring"):
            tasks.append((ArrayParams(n_sites=int(n), spacing=spacing,
                                      shape=shape, **zh), cavity, None))
    results = list(_map_ordered(_shape_cell, tasks, workers))
    gamma_line = np.full(n_values.size, np.nan)
    gamma_ring = np.full(n_values.size, np.nan)
    counts = np.zeros(n_values.size, dtype=int)
    excl = np.zeros(n_values.size, dtype=int)
    for idx, (metrics, reason) in enumerate(results):
        i, which = divmod(idx, 2)
        if reason is None:
            if which == 0:
                gamma_line[i] = metrics["gamma_f"]
            else:
                gamma_ring[i] = metrics["gamma_f"]
            counts[i] += 1
        else:
            excl[i] += 1
    return SweepGrid(
        axes={"n": n_values.astype(float)},
        values={"gamma_f_line": gamma_line, "gamma_f_ring": gamma_ring},
        counts=counts, excluded=excl,
        meta={"spacing": spacing, "kind": "line_vs_ring"},
    )


def _shape_cell(task):
    params, cavity, _ = task
    try:
        config = build_array(params)
    except GenerationError:
        return None, "generation"
    return _config_metrics(config, cavity, "tds", True, None, 0.01)


def _ratio_trial(task):
    seed, cloud, cavity, kinds, eps = task
    try:
        config = sample_cloud(cloud, seed)
        gf = build_free_matrix(config)
    except NearCoincidenceError:
        return None, "near_coincidence"
    except GenerationError:
        return None, "generation"
    out = {}
    for kind in kinds:
        metrics, reason = _config_metrics_with_free(
            config, gf, cavity, kind, True, None, eps)
        if reason is not None:
            return None, reason
        gamma_ratio = None
        if metrics["gamma_f"] > 1e-18:
            gamma_ratio = metrics["gamma_c"] / metrics["gamma_f"]
        big_ratio = None
        if (metrics["Gamma_f"] is not None and metrics["Gamma_c"] is not None
                and abs(metrics["Gamma_f"]) > 1e-18):
            big_ratio = metrics["Gamma_c"] / metrics["Gamma_f"]
        out[f"gamma_ratio_{kind}"] = gamma_ratio
        out[f"Gamma_ratio_{kind}"] = big_ratio
        out[f"theta_{kind}"] = metrics["theta"]
    return out, None


def decay_ratio_sweep(n_values, cloud: CloudParams | None = None,
                      cavity: CavityParams | None = None,
                      kinds=("tds", "ss"), trials: int = 1000, seed=0,
                      workers: int = 1, eps: float = 0.01) -> SweepGrid:
    """Channel decay-rate ratios versus atom number, uniform coupling.

    For each N, clouds are sampled with the template's shape and metrics
    averaged per excitation kind:  gamma_c/gamma_f per realization, the
    photon-rate ratio Gamma_c/Gamma_f, and theta.
    """
    cavity = cavity or CavityParams()
    template = cloud or CloudParams(n_atoms=1)
    n_values = np.asarray(n_values, dtype=int)
    names = []
    for kind in kinds:
        names += [f"gamma_ratio_{kind}", f"Gamma_ratio_{kind}", f"theta_{kind}"]
    mean = {f"{n}_mean": np.full(n_values.size, np.nan) for n in names}
    sems = {f"{n}_sem": np.full(n_values.size, np.nan) for n in names}
    counts = np.zeros(n_values.size, dtype=int)
    excl = np.zeros(n_values.size, dtype=int)
    cell_seeds = np.random.SeedSequence(seed).spawn(n_values.size)
    partial = False
    for i, n in enumerate(n_values):
        this = replace(template, n_atoms=int(n))
        stats = EnsembleStats(names)
        tasks = [(s, this, cavity, tuple(kinds), eps)
                 for s in cell_seeds[i].spawn(trials)]
        try:
            for metrics, reason in _map_ordered(_ratio_trial, tasks, workers):
                if reason is None:
                    stats.add_trial(metrics)
                else:
                    stats.exclude_trial(reason)
        except KeyboardInterrupt:
            partial = True
        stats.validate()
        counts[i] = stats.accepted
        excl[i] = stats.excluded_total
        for nm in names:
            mean[f"{nm}_mean"][i] = stats.metrics[nm].mean
            sems[f"{nm}_sem"][i] = stats.metrics[nm].sem
        if partial:
            break
    return SweepGrid(
        axes={"n": n_values.astype(float)},
        values={**mean, **sems},
        counts=counts, excluded=excl,
        meta={"kinds": list(kinds), "kind": "decay_ratio", "partial": partial},
    )

"""Command-line interface.

Subcommands map one-to-one onto the experiment drivers; every run writes
CSV data plus a JSON provenance sidecar (resolved configuration, master
seed, exclusion counts, SHA-256 of each data file) into the output
directory and prints a one-line summary.

Configuration comes from an optional TOML file (strict: unknown keys are
fatal) with command-line flags taking precedence. Exit codes: 0 success,
1 runtime failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import __version__, reports
from .cavity import CavityParams
from .errors import ConfigError, RingQEDError
from .experiments import (
    compare_line_ring,
    compute_spectrum,
    decay_ratio_sweep,
    run_cloud_ensemble,
    sweep_array_map,
    sweep_disorder,
)
from .geometry import (
    ARRAY_Z_HEIGHT,
    CLOUD_SIGMA,
    CLOUD_Z_MEAN,
    ArrayParams,
    CloudParams,
    sample_cloud,
)
from .master_equation import compare_models

EXPERIMENTS = (
    "cloud-decay",
    "spectrum",
    "array-map",
    "disorder",
    "ring-vs-line",
    "ratio-sweep",
    "oracle-check",
)

WORKERS_ENV = "RINGQED_WORKERS"


@dataclass
class RunConfig:
    """Fully resolved run configuration (defaults are the reference setup)."""

    experiment: str = ""
    seed: int = 1234
    trials: int = 1000
    workers: int = 0  # 0 = all available cores
    out: str = "results"
    gnuplot: bool = False
    # geometry
    kind: str = "cloud"  # cloud | line | ring
    n_atoms: int = 60
    sigma_x: float = CLOUD_SIGMA[0]
    sigma_y: float = CLOUD_SIGMA[1]
    sigma_z: float = CLOUD_SIGMA[2]
    z_mean: float = CLOUD_Z_MEAN
    poisson_n: bool = False
    n_sites: int = 0  # 0 = use n_atoms
    spacing: float = 0.3
    z_height: float = ARRAY_Z_HEIGHT
    filling: float = 1.0
    delta_z: float = 0.0
    target_atoms: int = 0  # 0 = unset
    # cavity
    kappa_i: float = 100.0
    kappa_e: float = 100.0
    delta_c: float = 0.0
    n_eff: float = 1.69
    c1: float = 0.05
    z_ref: float = ARRAY_Z_HEIGHT
    z_ev: float = 0.0  # 0 = derive from n_eff
    eta: float = 1.0
    # excitation
    excitation: str = "tds"
    eps: float = 0.01
    # toggles
    uniform_c: bool = False
    no_freespace: bool = False
    no_stochastic: bool = False
    # spectrum
    halfwidth: float = 0.0  # 0 = auto (5 collective linewidths)
    points: int = 201
    # sweeps
    k_scan: list = field(default_factory=list)
    d_values: list = field(default_factory=list)
    k_values: list = field(default_factory=list)
    axis: str = "delta_z"
    values: list = field(default_factory=list)
    n_values: list = field(default_factory=list)
    # oracle
    oracle_atoms: int = 2
    t_end: float = 3.0

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


# TOML layout: top-level scalars plus sections mapping onto RunConfig fields.
_TOP_LEVEL = {"experiment", "seed", "trials", "workers", "out", "gnuplot"}
_SECTIONS = {
    "geometry": {
        "kind", "n_atoms", "sigma_x", "sigma_y", "sigma_z", "z_mean",
        "poisson_n", "n_sites", "spacing", "z_height", "filling", "delta_z",
        "target_atoms",
    },
    "cavity": {
        "kappa_i", "kappa_e", "delta_c", "n_eff", "c1", "z_ref", "z_ev", "eta",
    },
    "excitation": {"excitation", "eps"},
    "options": {"uniform_c", "no_freespace", "no_stochastic"},
    "spectrum": {"halfwidth", "points"},
    "sweep": {
        "k_scan", "d_values", "k_values", "axis", "values", "n_values",
    },
    "oracle": {"oracle_atoms", "t_end"},
}


def _coerce(cfg: RunConfig, name: str, value, where: str):
    current = getattr(cfg, name)
    if isinstance(current, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{where}: expected a boolean, got {value!r}")
    elif isinstance(current, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
    elif isinstance(current, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{where}: expected a number, got {value!r}")
        value = float(value)
    elif isinstance(current, str):
        if not isinstance(value, str):
            raise ConfigError(f"{where}: expected a string, got {value!r}")
    elif isinstance(current, list):
        if not isinstance(value, list):
            raise ConfigError(f"{where}: expected a list, got {value!r}")
    setattr(cfg, name, value)


def parse_config(data: dict, cfg: RunConfig | None = None) -> RunConfig:
    """Apply a parsed TOML document onto a RunConfig, strictly.

    Unknown keys or sections raise ConfigError naming the offender;
    values are type-checked against the field they set.
    """
    cfg = cfg or RunConfig()
    for key, value in data.items():
        if key in _TOP_LEVEL:
            _coerce(cfg, key, value, key)
        elif key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"section [{key}] must be a table")
            allowed = _SECTIONS[key]
            for sub, sval in value.items():
                if sub not in allowed:
                    raise ConfigError(f"unknown key '{key}.{sub}'")
                _coerce(cfg, sub, sval, f"{key}.{sub}")
        else:
            raise ConfigError(f"unknown key '{key}'")
    return cfg


def load_config(path, cfg: RunConfig | None = None) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}")
    return parse_config(data, cfg)


def _validate(cfg: RunConfig):
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(
            f"field 'experiment' must be one of {', '.join(EXPERIMENTS)}; "
            f"got {cfg.experiment!r}"
        )
    checks = [
        ("trials", cfg.trials >= 1, "must be >= 1"),
        ("workers", cfg.workers >= 0, "must be >= 0"),
        ("n_atoms", cfg.n_atoms >= 1, "must be >= 1"),
        ("kind", cfg.kind in ("cloud", "line", "ring"),
         "must be cloud, line, or ring"),
        ("excitation", cfg.excitation in ("tds", "ss"), "must be tds or ss"),
        ("eps", 0.0 < cfg.eps <= 0.1, "must be in (0, 0.1]"),
        ("filling", 0.0 < cfg.filling <= 1.0, "must be in (0, 1]"),
        ("spacing", cfg.spacing > 0.0, "must be > 0"),
        ("delta_z", cfg.delta_z >= 0.0, "must be >= 0"),
        ("c1", cfg.c1 >= 0.0, "must be >= 0"),
        ("n_eff", cfg.n_eff >= 1.0, "must be >= 1"),
        ("points", cfg.points >= 8, "must be >= 8"),
        ("axis", cfg.axis in ("delta_z", "filling"),
         "must be delta_z or filling"),
        ("oracle_atoms", 1 <= cfg.oracle_atoms <= 6, "must be in 1..6"),
        ("t_end", cfg.t_end > 0.0, "must be > 0"),
    ]
    for name, ok, msg in checks:
        if not ok:
            raise ConfigError(f"field '{name}' {msg}; got {getattr(cfg, name)!r}")


def resolve_workers(cfg: RunConfig) -> int:
    w = cfg.workers
    if w == 0:
        env = os.environ.get(WORKERS_ENV, "")
        if env:
            try:
                w = int(env)
            except ValueError:
                raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}")
        else:
            w = os.cpu_count() or 1
    return max(1, w)


def _cloud_from(cfg: RunConfig) -> CloudParams:
    return CloudParams(
        n_atoms=cfg.n_atoms, sigma_x=cfg.sigma_x, sigma_y=cfg.sigma_y,
        sigma_z=cfg.sigma_z, z_mean=cfg.z_mean, poisson_n=cfg.poisson_n,
    )


def _array_from(cfg: RunConfig, shape: str) -> ArrayParams:
    return ArrayParams(
        n_sites=cfg.n_sites or cfg.n_atoms, spacing=cfg.spacing,
        z_height=cfg.z_height, filling_fraction=cfg.filling,
        delta_z=cfg.delta_z, shape=shape,
        target_atoms=cfg.target_atoms or None,
    )


def _cavity_from(cfg: RunConfig) -> CavityParams:
    return CavityParams(
        kappa_i=cfg.kappa_i, kappa_e=cfg.kappa_e, delta_c=cfg.delta_c,
        n_eff=cfg.n_eff, c_ref=cfg.c1, z_ref=cfg.z_ref,
        z_ev=cfg.z_ev or None, eta=cfg.eta,
    )


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _hist_csv(path, stats_obj, metric: str):
    st = stats_obj.metrics[metric]
    if st.bin_edges is None:
        return None
    return reports.write_csv(
        path, ["bin_lo", "bin_hi", "count"],
        [st.bin_edges[:-1], st.bin_edges[1:], st.bin_counts],
    )


def _run_cloud_decay(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    cloud = _cloud_from(cfg)
    cavity = _cavity_from(cfg)
    workers = resolve_workers(cfg)
    result = run_cloud_ensemble(
        cloud, cavity, excitation=cfg.excitation,
        k_scan=cfg.k_scan or None, trials=cfg.trials, seed=cfg.seed,
        uniform_c=cfg.uniform_c, workers=workers, eps=cfg.eps,
    )
    per_k = result if isinstance(result, dict) else {None: result}
    rows = []
    files = []
    partial = False
    for k, st in per_k.items():
        row = {"k": cfg.n_eff if k is None else k}
        for m, s in st.metrics.items():
            row[f"{m}_mean"] = s.mean
            row[f"{m}_sem"] = s.sem
            row[f"{m}_count"] = s.count
        row["accepted"] = st.accepted
        row["excluded"] = st.excluded_total
        rows.append(row)
        partial = partial or st.partial
        tag = "" if k is None else f"_k{k:g}"
        for m in ("gamma_f", "gamma_c"):
            f = _hist_csv(out / f"cloud_decay_hist_{m}{tag}.csv", st, m)
            if f:
                files.append(f)
    header = list(rows[0])
    csv = reports.write_csv(out / "cloud_decay.csv", header,
                            [np.array([r[h] for r in rows]) for h in header])
    files.insert(0, csv)
    reports.write_sidecar(
        out / "cloud_decay.json", config=cfg.to_dict(), seed=cfg.seed,
        data_files=files, partial=partial,
        ensembles={str(k): st.summary() for k, st in per_k.items()},
    )
    if cfg.gnuplot and len(rows) > 1:
        reports.write_gnuplot(out / "cloud_decay.gp", "cloud_decay.csv",
                              "cloud decay vs k", "k / k0", "rate / Gamma0",
                              [(1, 2, "gamma_f"), (1, 5, "gamma_c")])
    first = next(iter(per_k.values()))
    mark = " [partial]" if partial else ""
    return (
        f"gamma_f = {first.metrics['gamma_f'].mean:.4g} Gamma0, "
        f"gamma_c = {first.metrics['gamma_c'].mean:.4g} Gamma0 "
        f"(N={cfg.n_atoms}, trials={first.requested}, "
        f"excluded={first.excluded_total}){mark}"
    )


def _run_spectrum(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    cavity = _cavity_from(cfg)
    if cfg.kind == "cloud":
        geometry = _cloud_from(cfg)
    else:
        geometry = _array_from(cfg, cfg.kind)
    detunings = None
    if cfg.halfwidth > 0.0:
        detunings = np.linspace(-cfg.halfwidth, cfg.halfwidth, cfg.points)
    result = compute_spectrum(
        geometry, cavity, detunings=detunings, trials=cfg.trials,
        seed=cfg.seed, uniform_c=cfg.uniform_c,
        no_freespace=cfg.no_freespace, no_stochastic=cfg.no_stochastic,
        workers=resolve_workers(cfg), grid_points=cfg.points,
    )
    csv = result.to_csv(out / "spectrum.csv")
    reports.write_sidecar(
        out / "spectrum.json", config=cfg.to_dict(), seed=cfg.seed,
        data_files=[csv], partial=result.partial,
        n_trials=result.n_trials, excluded=result.excluded,
        fit={
            "center": result.fit.center, "fwhm": result.fit.fwhm,
            "amplitude": result.fit.amplitude, "offset": result.fit.offset,
            "residual": result.fit.residual, "converged": result.fit.converged,
        },
    )
    if cfg.gnuplot:
        reports.write_gnuplot(out / "spectrum.gp", "spectrum.csv",
                              "bus transmission", "delta / Gamma0", "power",
                              [(1, 2, "|t|^2"), (1, 4, "atomic power")])
    mark = " [partial]" if result.partial else ""
    return (
        f"FWHM = {result.fit.fwhm:.4g} Gamma0 at center "
        f"{result.fit.center:.4g} Gamma0 (trials={result.n_trials}, "
        f"converged={result.fit.converged}){mark}"
    )


def _run_array_map(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    d_values = cfg.d_values or list(np.round(np.arange(0.05, 2.0001, 0.05), 10))
    k_values = cfg.k_values or list(np.round(np.arange(0.0, 2.5001, 0.05), 10))
    grid = sweep_array_map(
        d_values, k_values, n_atoms=cfg.n_atoms, cavity=_cavity_from(cfg),
        z_height=cfg.z_height, workers=resolve_workers(cfg),
    )
    csv = grid.to_csv(out / "array_map.csv")
    reports.write_sidecar(out / "array_map.json", config=cfg.to_dict(),
                          seed=cfg.seed, data_files=[csv], meta=grid.meta)
    g = grid.values["gamma_f"]
    i, j = np.unravel_index(np.nanargmin(g), g.shape)
    return (
        f"min gamma_f = {g[i, j]:.4g} Gamma0 at d = {grid.axes['d'][i]:.3g}, "
        f"k = {grid.axes['k'][j]:.3g} k0 ({g.size} cells)"
    )


def _run_disorder(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    values = cfg.values
    if not values:
        values = ([0.0, 0.01, 0.02, 0.0587, 0.1] if cfg.axis == "delta_z"
                  else [1.0, 0.8, 0.6, 0.5, 0.3])
    grid = sweep_disorder(
        cfg.axis, values, n_target=cfg.target_atoms or cfg.n_atoms,
        spacing=cfg.spacing, z_height=cfg.z_height, cavity=_cavity_from(cfg),
        trials=cfg.trials, seed=cfg.seed, workers=resolve_workers(cfg),
        eps=cfg.eps,
    )
    csv = grid.to_csv(out / "disorder.csv")
    reports.write_sidecar(out / "disorder.json", config=cfg.to_dict(),
                          seed=cfg.seed, data_files=[csv], meta=grid.meta)
    if cfg.gnuplot:
        reports.write_gnuplot(out / "disorder.gp", "disorder.csv",
                              f"subradiance vs {cfg.axis}", cfg.axis,
                              "gamma_f / Gamma0",
                              [(1, 2, "z-dependent C"), (1, 3, "uniform C")])
    zdep = grid.values["gamma_f_zdep_mean"]
    mark = " [partial]" if grid.meta.get("partial") else ""
    return (
        f"gamma_f({cfg.axis}={values[0]:g}) = {zdep[0]:.4g} Gamma0 -> "
        f"gamma_f({cfg.axis}={values[-1]:g}) = {zdep[-1]:.4g} Gamma0 "
        f"(z-dependent C, {grid.counts.sum()} trials){mark}"
    )


def _run_ring_vs_line(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    n_values = cfg.n_values or [3, 5, 10, 20, 30, 40, 60, 80, 100]
    grid = compare_line_ring(
        n_values, spacing=cfg.spacing, cavity=_cavity_from(cfg),
        z_height=cfg.z_height, workers=resolve_workers(cfg),
    )
    csv = grid.to_csv(out / "ring_vs_line.csv")
    reports.write_sidecar(out / "ring_vs_line.json", config=cfg.to_dict(),
                          seed=cfg.seed, data_files=[csv], meta=grid.meta)
    if cfg.gnuplot:
        reports.write_gnuplot(out / "ring_vs_line.gp", "ring_vs_line.csv",
                              "line vs ring subradiance", "N",
                              "gamma_f / Gamma0",
                              [(1, 2, "line"), (1, 3, "ring")], logy=True)
    line = grid.values["gamma_f_line"][-1]
    ring = grid.values["gamma_f_ring"][-1]
    return (
        f"N={n_values[-1]}: gamma_f line = {line:.4g} Gamma0, "
        f"ring = {ring:.4g} Gamma0"
    )


def _run_ratio_sweep(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    n_values = cfg.n_values or [1, 5, 15, 30, 60]
    grid = decay_ratio_sweep(
        n_values, cloud=_cloud_from(cfg), cavity=_cavity_from(cfg),
        trials=cfg.trials, seed=cfg.seed, workers=resolve_workers(cfg),
        eps=cfg.eps,
    )
    csv = grid.to_csv(out / "ratio_sweep.csv")
    reports.write_sidecar(out / "ratio_sweep.json", config=cfg.to_dict(),
                          seed=cfg.seed, data_files=[csv], meta=grid.meta)
    r = grid.values["gamma_ratio_tds_mean"][-1]
    mark = " [partial]" if grid.meta.get("partial") else ""
    return (
        f"N={n_values[-1]}: mean gamma_c/gamma_f (TDS) = {r:.4g} "
        f"(N*C1 = {n_values[-1] * cfg.c1:.4g}){mark}"
    )


def _run_oracle_check(cfg: RunConfig) -> str:
    out = _out_dir(cfg)
    cloud = replace(_cloud_from(cfg), n_atoms=cfg.oracle_atoms, poisson_n=False)
    config = sample_cloud(cloud, cfg.seed)
    comparison = compare_models(config, _cavity_from(cfg), t_end=cfg.t_end)
    reports.write_sidecar(
        out / "oracle_check.json", config=cfg.to_dict(), seed=cfg.seed,
        data_files=[],
        eigen_vs_eliminated=comparison.eigen_vs_eliminated,
        eliminated_vs_full=comparison.eliminated_vs_full,
        t_min_full=comparison.t_min_full,
        tolerances={"eigen": comparison.tol_eigen, "full": comparison.tol_full},
        passed=comparison.passed,
    )
    verdict = "PASS" if comparison.passed else "FAIL"
    dev = comparison.max_eigen_deviation
    full_dev = comparison.max_full_deviation
    full_part = "" if full_dev is None else f", eliminated/full = {full_dev:.2g}"
    return (
        f"oracle-check, N={cfg.oracle_atoms} -> max deviation eigen/RK4 = "
        f"{dev:.2g}{full_part}: {verdict}"
    )


_RUNNERS = {
    "cloud-decay": _run_cloud_decay,
    "spectrum": _run_spectrum,
    "array-map": _run_array_map,
    "disorder": _run_disorder,
    "ring-vs-line": _run_ring_vs_line,
    "ratio-sweep": _run_ratio_sweep,
    "oracle-check": _run_oracle_check,
}

_TEMPLATE = """\
# ringqed run configuration ({experiment})
# Rates in units of Gamma0, lengths in units of lambda0.

experiment = "{experiment}"
seed = 1234          # master RNG seed
trials = 1000        # Monte Carlo realizations (stochastic experiments)
workers = 0          # 0 = all cores (or ${env})
out = "results"      # output directory
gnuplot = false      # also emit a gnuplot script

[geometry]
kind = "cloud"       # cloud | line | ring
n_atoms = 60
sigma_x = {sx:.6g}    # cloud r.m.s. widths
sigma_y = {sy:.6g}
sigma_z = {sz:.6g}
z_mean = {zm:.6g}     # cloud mean height
poisson_n = false    # Poisson-distributed atom number
n_sites = 0          # array sites (0 = n_atoms)
spacing = 0.3        # array lattice constant
z_height = {zh:.6g}   # array height
filling = 1.0        # site occupation probability
delta_z = 0.0        # array height disorder (r.m.s.)
target_atoms = 0     # grow array to this many atoms (0 = off)

[cavity]
kappa_i = 100.0      # intrinsic linewidth
kappa_e = 100.0      # bus coupling linewidth
delta_c = 0.0        # cavity detuning
n_eff = 1.69         # guided-mode effective index
c1 = 0.05            # reference single-atom cooperativity
z_ref = {zh:.6g}      # height where C = c1
z_ev = 0.0           # evanescent length (0 = derive from n_eff)
eta = 1.0            # bus drive amplitude

[excitation]
excitation = "tds"   # tds | ss
eps = 0.01           # timed-Dicke amplitude

[options]
uniform_c = false    # pin every atom's coupling to c1
no_freespace = false # drop collective dipole-dipole coupling (keep GAMMA0)
no_stochastic = false # spectrum: fixed N, uniform C, no height spread

[spectrum]
halfwidth = 0.0      # detuning half-range (0 = 5 collective linewidths)
points = 201

[sweep]
k_scan = []          # cloud-decay: waveguide k values (units of k0)
d_values = []        # array-map spacings (empty = default grid)
k_values = []        # array-map k values (empty = default grid)
axis = "delta_z"     # disorder axis: delta_z | filling
values = []          # disorder axis values (empty = defaults)
n_values = []        # ring-vs-line / ratio-sweep atom numbers

[oracle]
oracle_atoms = 2
t_end = 3.0
"""


def emit_config(experiment: str) -> str:
    return _TEMPLATE.format(
        experiment=experiment, env=WORKERS_ENV,
        sx=CLOUD_SIGMA[0], sy=CLOUD_SIGMA[1], sz=CLOUD_SIGMA[2],
        zm=CLOUD_Z_MEAN, zh=ARRAY_Z_HEIGHT,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringqed",
        description="Collective atom-photon emission near a microring resonator.",
        epilog="Exit codes: 0 success, 1 runtime failure, 2 usage/config error.",
    )
    parser.add_argument("--version", action="version",
                        version=f"ringqed {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ec = sub.add_parser("emit-config",
                        help="print a commented TOML configuration template")
    ec.add_argument("experiment", choices=EXPERIMENTS)
    ec.add_argument("--out", help="also write the template to this file")

    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="TOML configuration file")
        p.add_argument("--seed", type=int, help="master RNG seed")
        p.add_argument("--trials", type=int, help="Monte Carlo realizations")
        p.add_argument("--workers", type=int,
                       help=f"worker processes (0 = all cores; env {WORKERS_ENV})")
        p.add_argument("--out", help="output directory")
        p.add_argument("--n-atoms", type=int, dest="n_atoms")
        p.add_argument("--c1", type=float, help="reference cooperativity")
        p.add_argument("--n-eff", type=float, dest="n_eff",
                       help="guided-mode effective index")
        p.add_argument("--spacing", type=float, help="array lattice constant")
        p.add_argument("--delta-z", type=float, dest="delta_z",
                       help="array height disorder")
        p.add_argument("--filling", type=float, help="site occupation probability")
        p.add_argument("--excitation", choices=("tds", "ss"))
        p.add_argument("--no-freespace", action="store_true", default=None,
                       dest="no_freespace",
                       help="disable free-space dipole coupling")
        p.add_argument("--uniform-c", action="store_true", default=None,
                       dest="uniform_c", help="pin every atom's coupling to c1")
        p.add_argument("--poisson-n", action="store_true", default=None,
                       dest="poisson_n", help="Poisson-distributed atom number")
        p.add_argument("--gnuplot", action="store_true", default=None,
                       help="also emit a gnuplot script")
    return parser


_FLAG_FIELDS = (
    "seed", "trials", "workers", "out", "n_atoms", "c1", "n_eff", "spacing",
    "delta_z", "filling", "excitation", "no_freespace", "uniform_c",
    "poisson_n", "gnuplot",
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "emit-config":
        text = emit_config(args.experiment)
        sys.stdout.write(text)
        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            Path(args.out).write_text(text, encoding="utf-8")
        return 0
    try:
        cfg = RunConfig(experiment=args.command)
        if args.config:
            cfg = load_config(args.config, cfg)
            cfg.experiment = args.command
        for name in _FLAG_FIELDS:
            value = getattr(args, name, None)
            if value is not None:
                setattr(cfg, name, value)
        _validate(cfg)
    except ConfigError as exc:
        print(f"ringqed: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        summary = _RUNNERS[cfg.experiment](cfg)
    except RingQEDError as exc:
        print(f"ringqed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"ringqed: i/o error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Atom configurations: stochastic clouds and tweezer-style arrays.

Positions are in units of LAMBDA0 with the waveguide/bus axis along y and
the chip surface at z = 0; every atom must sit in the vacuum half-space
z > 0. Each configuration also carries a *phase coordinate* per atom: the
propagation length along the guided mode that sets the coupling phase
(y for clouds and line arrays, arc length for rings).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GenerationError
from .units import LAMBDA0

# Atoms below this height would overlap the dielectric; samplers re-draw.
Z_FLOOR = 0.05 * LAMBDA0

# Re-draw rounds for truncated sampling before giving up.
_MAX_REDRAWS = 10_000

# Site budget for filling-growth line arrays.
SITE_BUDGET = 1_000_000

# Experimental cloud shape: r.m.s. widths (100, 2000, 430) nm and mean
# height 400 nm above the resonator for an 852 nm transition.
CLOUD_SIGMA = (100.0 / 852.0, 2000.0 / 852.0, 430.0 / 852.0)
CLOUD_Z_MEAN = 400.0 / 852.0

# Tweezer array height 330 nm in the same units.
ARRAY_Z_HEIGHT = 330.0 / 852.0


@dataclass(frozen=True)
class CloudParams:
    """Gaussian cloud above the resonator.

    n_atoms is the mean atom number when poisson_n is set, otherwise exact.
    """

    n_atoms: int
    sigma_x: float = CLOUD_SIGMA[0]
    sigma_y: float = CLOUD_SIGMA[1]
    sigma_z: float = CLOUD_SIGMA[2]
    z_mean: float = CLOUD_Z_MEAN
    poisson_n: bool = False

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        for name in ("sigma_x", "sigma_y", "sigma_z"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not self.z_mean > 0.0:
            raise ValueError(f"z_mean must be > 0, got {self.z_mean}")


@dataclass(frozen=True)
class ArrayParams:
    """Regular array of trap sites along the bus (line) or around it (ring).

    filling_fraction < 1 occupies sites stochastically. With target_atoms
    set, sites are filled one by one (each kept with probability
    filling_fraction) until the configuration holds exactly target_atoms
    atoms. delta_z adds independent Gaussian height disorder per atom.
    """

    n_sites: int
    spacing: float = 0.3
    z_height: float = ARRAY_Z_HEIGHT
    filling_fraction: float = 1.0
    delta_z: float = 0.0
    shape: str = "line"
    target_atoms: int | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if not self.spacing > 0.0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")
        if not self.z_height > 0.0:
            raise ValueError(f"z_height must be > 0, got {self.z_height}")
        if not 0.0 < self.filling_fraction <= 1.0:
            raise ValueError(
                f"filling_fraction must be in (0, 1], got {self.filling_fraction}"
            )
        if self.delta_z < 0.0:
            raise ValueError(f"delta_z must be >= 0, got {self.delta_z}")
        if self.shape not in ("line", "ring"):
            raise ValueError(f"shape must be 'line' or 'ring', got {self.shape!r}")
        if self.target_atoms is not None and self.target_atoms < 1:
            raise ValueError(f"target_atoms must be >= 1, got {self.target_atoms}")


@dataclass(frozen=True)
class AtomConfig:
    """Immutable set of atom positions plus waveguide phase coordinates.

    closure_length is the circumference of a closed guided path (rings);
    None for open geometries.
    """

    positions: np.ndarray
    phase_coords: np.ndarray
    geometry_tag: str
    closure_length: float | None = None

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise ValueError(f"positions must have shape (n, 3), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        if np.any(pos[:, 2] <= 0.0):
            raise ValueError("all atoms must satisfy z > 0")
        phase = np.asarray(self.phase_coords, dtype=float).reshape(-1)
        if phase.shape[0] != pos.shape[0]:
            raise ValueError("phase_coords length must match number of atoms")
        pos.setflags(write=False)
        phase.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "phase_coords", phase)
        if self.closure_length is not None and not self.closure_length > 0.0:
            raise ValueError("closure_length must be positive when set")

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def to_json(self) -> str:
        payload = {
            "geometry_tag": self.geometry_tag,
            "positions": self.positions.tolist(),
            "phase_coords": self.phase_coords.tolist(),
            "closure_length": self.closure_length,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "AtomConfig":
        payload = json.loads(text)
        positions = np.asarray(payload["positions"], dtype=float)
        phase = payload.get("phase_coords")
        if phase is None:
            phase = positions[:, 1]
        return cls(
            positions=positions,
            phase_coords=np.asarray(phase, dtype=float),
            geometry_tag=payload["geometry_tag"],
            closure_length=payload.get("closure_length"),
        )


def _truncated_heights(rng, mean, sigma, n, floor=Z_FLOOR):
    """Draw n heights from N(mean, sigma) conditioned on z > floor."""
    if sigma == 0.0:
        if mean <= floor:
            raise GenerationError(
                f"deterministic height {mean} does not clear the floor {floor}"
            )
        return np.full(n, mean)
    z = rng.normal(mean, sigma, n)
    for _ in range(_MAX_REDRAWS):
        bad = z <= floor
        if not bad.any():
            return z
        z[bad] = rng.normal(mean, sigma, int(bad.sum()))
    raise GenerationError(
        f"could not draw {n} heights above z = {floor} "
        f"from N({mean}, {sigma}) in {_MAX_REDRAWS} rounds"
    )


def sample_cloud(params: CloudParams, seed) -> AtomConfig:
    """Draw one cloud realization. Deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    n = params.n_atoms
    if params.poisson_n:
        n = 0
        for _ in range(_MAX_REDRAWS):
            n = int(rng.poisson(params.n_atoms))
            if n >= 1:
                break
        else:
            raise GenerationError("Poisson atom number never reached 1")
    x = rng.normal(0.0, params.sigma_x, n) if params.sigma_x > 0 else np.zeros(n)
    y = rng.normal(0.0, params.sigma_y, n) if params.sigma_y > 0 else np.zeros(n)
    z = _truncated_heights(rng, params.z_mean, params.sigma_z, n)
    positions = np.column_stack([x, y, z])
    return AtomConfig(
        positions=positions,
        phase_coords=y.copy(),
        geometry_tag=f"cloud-n{n}",
    )


def _occupied_sites(params: ArrayParams, rng) -> np.ndarray:
    """Indices of occupied sites under the filling rules."""
    f = params.filling_fraction
    if params.target_atoms is None:
        if f >= 1.0:
            return np.arange(params.n_sites)
        for _ in range(_MAX_REDRAWS):
            occ = rng.random(params.n_sites) < f
            if occ.any():
                return np.nonzero(occ)[0]
        raise GenerationError(
            f"no occupied site in {_MAX_REDRAWS} draws at filling {f}"
        )
    target = params.target_atoms
    budget = params.n_sites if params.shape == "ring" else SITE_BUDGET
    if f >= 1.0:
        if target > budget:
            raise GenerationError(
                f"target_atoms = {target} exceeds available sites ({budget})"
            )
        return np.arange(target)
    # Grow site by site: site m is occupied with probability f; stop at the
    # site where the count reaches the target.
    idx: list[int] = []
    m = 0
    chunk = 4096
    while len(idx) < target:
        if m >= budget:
            raise GenerationError(
                f"site budget {budget} exhausted before reaching "
                f"{target} atoms at filling {f}"
            )
        take = min(chunk, budget - m)
        occ = rng.random(take) < f
        hits = np.nonzero(occ)[0]
        for h in hits:
            idx.append(m + int(h))
            if len(idx) == target:
                break
        m += take
    return np.asarray(idx, dtype=int)


def build_array(params: ArrayParams, seed=None) -> AtomConfig:
    """Build one array realization.

    Fully deterministic (seed irrelevant) when filling_fraction == 1,
    target_atoms is None or fills from site 0, and delta_z == 0.
    """
    rng = np.random.default_rng(seed)
    idx = _occupied_sites(params, rng)
    n = idx.size
    d = params.spacing
    if params.delta_z > 0.0:
        z = _truncated_heights(rng, params.z_height, params.delta_z, n)
    else:
        if params.z_height <= Z_FLOOR:
            raise GenerationError(
                f"z_height {params.z_height} does not clear the floor {Z_FLOOR}"
            )
        z = np.full(n, params.z_height)
    if params.shape == "line":
        y = idx * d
        positions = np.column_stack([np.zeros(n), y, z])
        return AtomConfig(
            positions=positions,
            phase_coords=y.copy(),
            geometry_tag=f"line-n{n}-d{d:g}",
        )
    # Ring: n_sites sites around a circle whose circumference is
    # n_sites * spacing, so neighboring chords match the line spacing
    # in the large-ring limit.
    circumference = params.n_sites * d
    radius = circumference / (2.0 * np.pi)
    theta = 2.0 * np.pi * idx / params.n_sites
    positions = np.column_stack([radius * np.cos(theta), radius * np.sin(theta), z])
    arc = idx * d
    return AtomConfig(
        positions=positions,
        phase_coords=arc.astype(float),
        geometry_tag=f"ring-n{n}-d{d:g}",
        closure_length=circumference,
    )


def spawn_seeds(master_seed, n: int) -> list[np.random.SeedSequence]:
    """Independent child seeds for n trials, reproducible from master_seed."""
    return np.random.SeedSequence(master_seed).spawn(n)

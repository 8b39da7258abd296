"""Streaming ensemble statistics.

Welford accumulation keeps means and variances exact in one pass, so batch
and streaming evaluation agree to rounding. Trials are always folded in a
fixed order (trial index), which makes results independent of how many
worker processes produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EnsembleError


class StreamingStats:
    """One metric's running mean/variance plus an optional histogram.

    None or non-finite samples count as undefined and are excluded from
    the moments and the histogram.
    """

    def __init__(self, bin_edges=None):
        self.count = 0
        self.undefined = 0
        self._mean = 0.0
        self._m2 = 0.0
        self.bin_edges = None if bin_edges is None else np.asarray(bin_edges, float)
        self.bin_counts = (
            None if bin_edges is None
            else np.zeros(self.bin_edges.shape[0] - 1, dtype=int)
        )
        # Samples outside the histogram range still enter the moments.
        self.out_of_range = 0

    def add(self, value):
        if value is None or not np.isfinite(value):
            self.undefined += 1
            return
        x = float(value)
        self.count += 1
        delta = x - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (x - self._mean)
        if self.bin_edges is not None:
            i = int(np.searchsorted(self.bin_edges, x, side="right")) - 1
            if 0 <= i < self.bin_counts.shape[0]:
                self.bin_counts[i] += 1
            elif x == self.bin_edges[-1]:
                self.bin_counts[-1] += 1
            else:
                self.out_of_range += 1

    @property
    def mean(self) -> float:
        return self._mean if self.count else float("nan")

    @property
    def variance(self) -> float:
        """Unbiased sample variance."""
        if self.count < 2:
            return float("nan")
        return self._m2 / (self.count - 1)

    @property
    def std(self) -> float:
        v = self.variance
        return float(np.sqrt(v)) if np.isfinite(v) else float("nan")

    @property
    def sem(self) -> float:
        if self.count < 2:
            return float("nan")
        return self.std / float(np.sqrt(self.count))

    @property
    def histogram_mass(self) -> int:
        if self.bin_counts is None:
            return 0
        return int(self.bin_counts.sum()) + self.out_of_range

    def summary(self) -> dict:
        return {
            "count": self.count,
            "undefined": self.undefined,
            "mean": self.mean,
            "std": self.std,
            "sem": self.sem,
        }


class EnsembleStats:
    """Trial-level accounting plus per-metric streaming statistics.

    accepted + excluded always equals the number of submitted trials; a
    metric's histogram mass equals that metric's defined-sample count.
    """

    def __init__(self, metric_names, bin_edges=None):
        bin_edges = bin_edges or {}
        self.metrics = {
            name: StreamingStats(bin_edges.get(name)) for name in metric_names
        }
        self.requested = 0
        self.accepted = 0
        self.excluded: dict[str, int] = {}
        # Set by drivers when an interrupted run flushed early.
        self.partial = False

    def add_trial(self, metric_values: dict):
        """Fold one accepted trial's metric dict (missing keys = undefined)."""
        self.requested += 1
        self.accepted += 1
        for name, st in self.metrics.items():
            st.add(metric_values.get(name))

    def exclude_trial(self, reason: str):
        self.requested += 1
        self.excluded[reason] = self.excluded.get(reason, 0) + 1

    @property
    def excluded_total(self) -> int:
        return sum(self.excluded.values())

    def validate(self):
        if self.accepted + self.excluded_total != self.requested:
            raise EnsembleError(
                f"trial accounting broken: {self.accepted} accepted + "
                f"{self.excluded_total} excluded != {self.requested} requested"
            )
        for name, st in self.metrics.items():
            if st.bin_counts is not None and st.histogram_mass != st.count:
                raise EnsembleError(
                    f"histogram mass {st.histogram_mass} != count {st.count} "
                    f"for metric {name}"
                )
        if self.requested and not self.accepted:
            raise EnsembleError(
                f"all {self.requested} trials excluded: {self.excluded}"
            )

    def summary(self) -> dict:
        return {
            "requested": self.requested,
            "accepted": self.accepted,
            "excluded": dict(self.excluded),
            "partial": self.partial,
            "metrics": {k: v.summary() for k, v in self.metrics.items()},
        }


def histogram_edges(upper: float, bins: int = 60, lower: float = 0.0) -> np.ndarray:
    if not upper > lower:
        raise ValueError(f"histogram upper edge {upper} must exceed {lower}")
    return np.linspace(lower, upper, bins + 1)

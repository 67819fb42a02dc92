"""Even-bin histograms over [0, 1] used as empirical density estimates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Histogram:
    """Counts over bin_count even bins of [0, 1].

    The normalized density (count * bin_count / total) integrates to exactly
    one by construction.
    """

    bin_count: int
    counts: tuple[int, ...]
    total: int

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.bin_count + 1)

    @property
    def densities(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) * self.bin_count / self.total

    @classmethod
    def from_samples(cls, samples: np.ndarray, bin_count: int) -> "Histogram":
        if bin_count < 1:
            raise ValueError("bin_count must be >= 1")
        counts, _ = np.histogram(samples, bins=bin_count, range=(0.0, 1.0))
        total = int(counts.sum())
        if total != len(samples):
            raise ValueError("samples outside [0, 1]")
        return cls(bin_count=bin_count, counts=tuple(int(c) for c in counts), total=total)

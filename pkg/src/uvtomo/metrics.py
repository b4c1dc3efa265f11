"""Earth mover's distance on a shared 1D axis, and success-rate aggregation."""

from __future__ import annotations

import numpy as np

from .geometry import DistanceDistribution


def emd_1d(p: DistanceDistribution, q: DistanceDistribution) -> float:
    """Wasserstein-1 distance between two distributions on the same bin axis.

    Equals the L1 distance between the cumulative sums scaled by the bin
    width; raises if the axes differ.
    """
    if p.bin_centers.shape != q.bin_centers.shape or not np.allclose(
        p.bin_centers, q.bin_centers, rtol=0.0, atol=1e-12
    ):
        raise ValueError("distributions must share an identical bin axis")
    diff = np.cumsum(p.mass - q.mass)
    return float(np.sum(np.abs(diff)) * p.bin_width)


def success_rate(emds, th: float) -> float:
    """Fraction of entries at or below the threshold."""
    emds = np.asarray(emds, dtype=float)
    if emds.size == 0:
        raise ValueError("need at least one trial")
    if not th > 0:
        raise ValueError("threshold must be positive")
    return float(np.count_nonzero(emds <= th) / emds.size)

"""Planar point-source models and discrete distance distributions.

A model is K weighted Dirac locations inside the unit square together with a
radius bound R that dominates every radial and pairwise distance.  Ground
truth distance distributions are plain normalized histograms on an equally
spaced axis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PointSourceModel:
    """K planar Dirac locations with positive weights and a radius bound."""

    points: np.ndarray  # (K, 2)
    weights: np.ndarray  # (K,)
    radius_bound: float

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
            raise ValueError("points must be a (K, 2) array with K >= 1")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (pts.shape[0],):
            raise ValueError("weights must have one entry per point")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(w)):
            raise ValueError("points and weights must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if not self.radius_bound > 0:
            raise ValueError("radius_bound must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "radius_bound", float(self.radius_bound))
        r = np.hypot(pts[:, 0], pts[:, 1])
        if np.any(r >= self.radius_bound):
            raise ValueError("all radial distances must be below radius_bound")
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        if np.any(d >= self.radius_bound):
            raise ValueError("all pairwise distances must be below radius_bound")
        pts.flags.writeable = False
        w.flags.writeable = False

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class DistanceDistribution:
    """Probability mass over equally spaced distance bins."""

    bin_centers: np.ndarray
    mass: np.ndarray
    bin_width: float

    def __post_init__(self):
        centers = np.asarray(self.bin_centers, dtype=float)
        mass = np.asarray(self.mass, dtype=float)
        object.__setattr__(self, "bin_centers", centers)
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "bin_width", float(self.bin_width))
        if centers.ndim != 1 or centers.shape != mass.shape or centers.size < 1:
            raise ValueError("bin_centers and mass must be 1-d arrays of equal length")
        if not self.bin_width > 0:
            raise ValueError("bin_width must be positive")
        gaps = np.diff(centers)
        if centers.size > 1 and (
            np.any(gaps <= 0) or np.max(np.abs(gaps - self.bin_width)) > 1e-9 * self.bin_width
        ):
            raise ValueError("bin_centers must increase with constant spacing bin_width")
        if np.any(mass < 0):
            raise ValueError("mass entries must be nonnegative")
        if abs(mass.sum() - 1.0) > 1e-12:
            raise ValueError("mass must sum to 1")
        centers.flags.writeable = False
        mass.flags.writeable = False


def distance_axis(n_bins: int, max_value: float) -> tuple[np.ndarray, float]:
    """Equally spaced bin centers tiling [0, max_value] with n_bins cells."""
    if n_bins < 1:
        raise ValueError("need at least one bin")
    if not max_value > 0:
        raise ValueError("max_value must be positive")
    width = max_value / n_bins
    centers = (np.arange(n_bins) + 0.5) * width
    return centers, width


def default_radius_bound(domain_half_width: float) -> float:
    # diameter of the sampling square, so every pairwise distance stays below it
    return 2.0 * np.sqrt(2.0) * domain_half_width


def generate_model(
    K: int,
    seed: int,
    domain_half_width: float = 1.0,
    recenter: bool = False,
    radius_bound: float | None = None,
) -> PointSourceModel:
    """Draw K points i.i.d. uniform on the square, unit weights.

    Deterministic for a fixed seed (Philox counter-based generator).  With
    ``recenter`` the centroid is subtracted afterwards; note this can move
    points slightly outside the sampling square.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if not domain_half_width > 0:
        raise ValueError("domain_half_width must be positive")
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    pts = rng.uniform(-domain_half_width, domain_half_width, size=(K, 2))
    if recenter:
        pts = pts - pts.mean(axis=0)
    if radius_bound is None:
        radius_bound = default_radius_bound(domain_half_width)
    return PointSourceModel(points=pts, weights=np.ones(K), radius_bound=radius_bound)


def radial_distances(model: PointSourceModel) -> np.ndarray:
    """Distance of each point from the origin, in point order."""
    return np.hypot(model.points[:, 0], model.points[:, 1])


def pairwise_distances(model: PointSourceModel) -> np.ndarray:
    """Symmetric K x K matrix of Euclidean distances, zero diagonal."""
    p = model.points
    return np.hypot(p[:, None, 0] - p[None, :, 0], p[:, None, 1] - p[None, :, 1])


def pairwise_distance_list(model: PointSourceModel) -> np.ndarray:
    """The K(K-1)/2 unordered pairwise distances as a flat array."""
    d = pairwise_distances(model)
    iu = np.triu_indices(model.size, k=1)
    return d[iu]


def true_distance_distribution(
    values, bin_centers, bin_width: float | None = None
) -> DistanceDistribution:
    """Histogram of values on an equally spaced axis, normalized to sum 1.

    Values are assigned to the nearest bin center; any value outside the axis
    range raises a ValueError naming it.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot build a distribution from no values")
    centers = np.asarray(bin_centers, dtype=float)
    if bin_width is None:
        if centers.size < 2:
            raise ValueError("bin_width required for a single-bin axis")
        bin_width = float(centers[1] - centers[0])
    idx = np.rint((values - centers[0]) / bin_width).astype(int)
    bad = (idx < 0) | (idx >= centers.size)
    if bad.any():
        raise ValueError(f"value {values[bad][0]!r} falls outside the bin axis")
    mass = np.bincount(idx, minlength=centers.size).astype(float)
    mass /= mass.sum()
    return DistanceDistribution(bin_centers=centers, mass=mass, bin_width=bin_width)


def model_to_json(model: PointSourceModel) -> str:
    """Serialize to JSON with exact decimal round-trip of every float."""
    payload = {
        "points": [[float(x), float(y)] for x, y in model.points],
        "weights": [float(w) for w in model.weights],
        "radius_bound": float(model.radius_bound),
    }
    return json.dumps(payload)


def model_from_json(text: str) -> PointSourceModel:
    payload = json.loads(text)
    return PointSourceModel(
        points=np.array(payload["points"], dtype=float),
        weights=np.array(payload["weights"], dtype=float),
        radius_bound=float(payload["radius_bound"]),
    )

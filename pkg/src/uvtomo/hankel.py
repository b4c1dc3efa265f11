"""Distance distributions via a truncated Hankel transform of the features.

Viewed as functions of omega = pi*nu/R the features are sums of J0(d*omega)
terms; integrating t*feature(t)*J0(u t) up to a cutoff concentrates mass
near the underlying distances (Bessel orthogonality).  Squaring and
normalizing the transform yields discrete probability distributions over a
distance axis for the radial and pairwise distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import estimate_features
from .geometry import DistanceDistribution, distance_axis
from .projector import ProjectionSet
from .specfun import QuadratureRule, bessel_j0, gauss_legendre


class DegenerateDistributionError(RuntimeError):
    """Raised when the transformed feature is identically zero."""


@dataclass(frozen=True)
class HankelConfig:
    """Transform configuration.

    ``cutoff`` is the frequency cap on the nu axis (defaults to min(M, 100)
    at call time); ``quad_points`` the Gauss-Legendre node count;
    ``axis_points`` the number of distance bins; ``axis_max`` the largest
    distance evaluated (defaults to the radius bound).
    """

    cutoff: float | None = None
    quad_points: int = 128
    axis_points: int = 256
    axis_max: float | None = None

    def __post_init__(self):
        if self.quad_points < 8:
            raise ValueError("quad_points must be at least 8")
        if self.axis_points < 16:
            raise ValueError("axis_points must be at least 16")
        if self.cutoff is not None and not self.cutoff > 0:
            raise ValueError("cutoff must be positive")

    def resolve(self, M: int, R: float) -> tuple[float, float]:
        cutoff = self.cutoff if self.cutoff is not None else float(min(M, 100))
        axis_max = self.axis_max if self.axis_max is not None else R
        if axis_max > R:
            raise ValueError("axis_max cannot exceed the radius bound")
        return cutoff, axis_max


def hankel_transform(feature_at_nodes, rule: QuadratureRule, axis) -> np.ndarray:
    """Discretized integral of t*feature(t)*J0(u t) for each axis point u.

    ``feature_at_nodes`` must hold the feature values at exactly the rule's
    nodes; complex values are allowed and produce a complex transform.
    """
    values = np.asarray(feature_at_nodes)
    axis = np.asarray(axis, dtype=float)
    if values.shape != rule.nodes.shape:
        raise ValueError("feature values must be given at the rule's nodes")
    kernel = bessel_j0(np.outer(axis, rule.nodes))
    return kernel @ (rule.weights * rule.nodes * values)


def _normalize_squared(transform: np.ndarray, centers, width) -> DistanceDistribution:
    power = np.abs(transform) ** 2
    total = power.sum()
    if total <= 0:
        raise DegenerateDistributionError("transformed feature is identically zero")
    return DistanceDistribution(bin_centers=centers, mass=power / total, bin_width=width)


def estimate_distributions(
    data: ProjectionSet,
    K: int,
    cfg: HankelConfig = HankelConfig(),
    sigma2: float | None = None,
) -> tuple[DistanceDistribution, DistanceDistribution]:
    """Radial and pairwise distance distributions from projection data.

    Evaluates the features at Gauss-Legendre nodes on the omega axis
    (omega = pi*nu/R, cutoff at pi*nu_cap/R), Hankel-transforms them onto a
    distance axis, then squares and normalizes.
    """
    R = data.radius_bound
    nu_cap, axis_max = cfg.resolve(data.bin_half_count, R)
    omega_cut = np.pi * nu_cap / R
    rule = gauss_legendre(cfg.quad_points, omega_cut)
    nu_nodes = rule.nodes * R / np.pi
    feats = estimate_features(data, K, nu_nodes, sigma2=sigma2)
    centers, width = distance_axis(cfg.axis_points, axis_max)
    f_mu = hankel_transform(feats.mu, rule, centers)
    f_c = hankel_transform(feats.c2, rule, centers)
    return (
        _normalize_squared(f_mu, centers, width),
        _normalize_squared(f_c, centers, width),
    )


def analytic_distributions(
    model,
    M: int,
    cfg: HankelConfig = HankelConfig(),
) -> tuple[DistanceDistribution, DistanceDistribution]:
    """Same transform applied to the exact Bessel-sum features of a model."""
    from .features import analytic_features

    R = model.radius_bound
    nu_cap, axis_max = cfg.resolve(M, R)
    omega_cut = np.pi * nu_cap / R
    rule = gauss_legendre(cfg.quad_points, omega_cut)
    feats = analytic_features(model, rule.nodes * R / np.pi)
    centers, width = distance_axis(cfg.axis_points, axis_max)
    f_mu = hankel_transform(feats.mu.real, rule, centers)
    f_c = hankel_transform(feats.c2, rule, centers)
    return (
        _normalize_squared(f_mu, centers, width),
        _normalize_squared(f_c, centers, width),
    )


def distributions_to_csv(
    path,
    p_mu: DistanceDistribution,
    p_c: DistanceDistribution,
    true_radial: DistanceDistribution | None = None,
    true_pairwise: DistanceDistribution | None = None,
) -> None:
    """CSV dump: axis point, p_mu, p_C and true distributions when known."""
    centers = p_mu.bin_centers
    if p_c.bin_centers.shape != centers.shape or not np.allclose(
        p_c.bin_centers, centers
    ):
        raise ValueError("p_mu and p_C must share one axis")
    with open(path, "w") as fh:
        fh.write("u,p_mu,p_C,true_radial,true_pairwise\n")
        for j, u in enumerate(centers):
            tr = repr(float(true_radial.mass[j])) if true_radial is not None else ""
            tp = repr(float(true_pairwise.mass[j])) if true_pairwise is not None else ""
            fh.write(
                f"{repr(float(u))},{repr(float(p_mu.mass[j]))},"
                f"{repr(float(p_c.mass[j]))},{tr},{tp}\n"
            )

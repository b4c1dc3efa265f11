"""Bessel functions J0/J1, their large-argument form, and Gauss-Legendre quadrature.

Everything here is dependency-free numerics: J0/J1 are evaluated piecewise
(Taylor series for |z| <= 12, Hankel-type asymptotic expansion beyond), the
quadrature nodes come from Newton iteration on Legendre polynomials, and the
truncated integral of t*J0(u t)*J0(v t) over [0, c] has a closed form used by
the distance-distribution estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# switch point between the Taylor series and the asymptotic expansion
_SERIES_CUTOFF = 12.0
_SERIES_TOL = 1e-18
_ASYM_TOL = 1e-19
_ASYM_MAX_TERMS = 30


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights integrating over [0, cutoff]."""

    nodes: np.ndarray
    weights: np.ndarray
    cutoff: float

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if not self.cutoff > 0:
            raise ValueError("cutoff must be positive")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if nodes[0] <= 0 or nodes[-1] >= self.cutoff:
            raise ValueError("nodes must lie inside (0, cutoff)")
        if abs(weights.sum() - self.cutoff) > 1e-10:
            raise ValueError("weights must sum to the cutoff")
        nodes.flags.writeable = False
        weights.flags.writeable = False


def _j0_series(z):
    # sum_k (-z^2/4)^k / (k!)^2, safe in float64 up to |z| ~ 12
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, 80):
        term = term * q / (k * k)
        total = total + term
        if np.max(np.abs(term)) < _SERIES_TOL:
            break
    return total


def _j1_series(z):
    # (z/2) * sum_k (-z^2/4)^k / (k! (k+1)!)
    q = -0.25 * z * z
    term = 0.5 * z
    total = np.array(term, copy=True)
    for k in range(1, 80):
        term = term * q / (k * (k + 1))
        total = total + term
        if np.max(np.abs(term)) < _SERIES_TOL:
            break
    return total


def _hankel_pq(z, mu):
    """Amplitude-phase series P, Q of the Stokes expansion for order mu = 4*nu^2.

    Terms are accumulated per element until they shrink below tolerance or
    start growing (the expansion is asymptotic); valid for z > ~12.
    """
    inv_z = 1.0 / z
    p = np.ones_like(z)
    q = np.zeros_like(z)
    c = np.ones_like(z)
    prev_mag = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _ASYM_MAX_TERMS + 1):
        c = c * ((mu - (2 * k - 1) ** 2) / (8.0 * k)) * inv_z
        mag = np.abs(c)
        # freeze elements whose terms started diverging before adding them
        active &= mag < prev_mag
        sign = -1.0 if (k // 2) % 2 else 1.0
        contrib = np.where(active, sign * c, 0.0)
        if k % 2:
            q = q + contrib
        else:
            p = p + contrib
        active &= mag >= _ASYM_TOL
        if not active.any():
            break
        prev_mag = mag
    return p, q


def _j0_asym(z):
    p, q = _hankel_pq(z, 0.0)
    chi = z - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * z)) * (p * np.cos(chi) - q * np.sin(chi))


def _j1_asym(z):
    p, q = _hankel_pq(z, 4.0)
    chi = z - 0.75 * np.pi
    return np.sqrt(2.0 / (np.pi * z)) * (p * np.cos(chi) - q * np.sin(chi))


def _check_finite(z):
    if not np.all(np.isfinite(z)):
        raise ValueError("Bessel argument must be finite")


def _piecewise_bessel(z, series_fn, asym_fn, odd):
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    _check_finite(z)
    az = np.abs(z)
    out = np.empty_like(az)
    small = az <= _SERIES_CUTOFF
    if small.any():
        out[small] = series_fn(az[small])
    big = ~small
    if big.any():
        out[big] = asym_fn(az[big])
    if odd:
        out = np.where(z < 0, -out, out)
    return float(out[0]) if scalar else out


def bessel_j0(z):
    """Bessel function of the first kind, order zero.

    Accepts a float or array; absolute accuracy ~1e-11 for |z| <= 1e4.
    """
    return _piecewise_bessel(z, _j0_series, _j0_asym, odd=False)


def bessel_j1(z):
    """Bessel function of the first kind, order one (odd in z)."""
    return _piecewise_bessel(z, _j1_series, _j1_asym, odd=True)


def bessel_j0_asymptotic(z):
    """Leading large-argument form sqrt(2/(pi z)) * cos(z - pi/4), z > 0."""
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    _check_finite(z)
    if np.any(z <= 0):
        raise ValueError("argument must be positive")
    out = np.sqrt(2.0 / (np.pi * z)) * np.cos(z - 0.25 * np.pi)
    return float(out[0]) if scalar else out


def gauss_legendre(n: int, c: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped from [-1, 1] to [0, c].

    Nodes are the roots of the Legendre polynomial P_n, found by Newton
    iteration from the Chebyshev initial guess; exact for polynomials of
    degree <= 2n - 1.
    """
    if n < 1:
        raise ValueError("need at least one quadrature node")
    if not c > 0:
        raise ValueError("cutoff must be positive")
    k = np.arange(1, n + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(100):
        p_prev = np.zeros_like(x)
        p = np.ones_like(x)
        for m in range(1, n + 1):
            p, p_prev = ((2 * m - 1) * x * p - (m - 1) * p_prev) / m, p
        dp = n * (x * p - p_prev) / (x * x - 1.0)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) < 1e-15:
            break
    # final derivative at the converged roots for the weight formula
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for m in range(1, n + 1):
        p, p_prev = ((2 * m - 1) * x * p - (m - 1) * p_prev) / m, p
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    return QuadratureRule(nodes=0.5 * c * (x + 1.0), weights=0.5 * c * w, cutoff=float(c))


def truncated_bessel_product_integral(u, v, c: float):
    """Integral of t*J0(u t)*J0(v t) over [0, c], in closed form.

    Evaluates c*(u*J1(uc)*J0(vc) - v*J0(uc)*J1(vc)) / (u^2 - v^2), switching
    to the analytic limit (c^2/2)*(J0(uc)^2 + J1(uc)^2) when u and v nearly
    coincide (the formula is 0/0 at u = v).
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    scalar = u.ndim == 0 and v.ndim == 0
    u, v = np.atleast_1d(u), np.atleast_1d(v)
    u, v = np.broadcast_arrays(u, v)
    if np.any(u < 0) or np.any(v < 0):
        raise ValueError("u and v must be nonnegative")
    if not c > 0:
        raise ValueError("cutoff must be positive")
    near = np.abs(u - v) < 1e-8 * np.maximum(1.0, u)
    w = np.where(near, 0.5 * (u + v), u)
    j0u, j1u = bessel_j0(u * c), bessel_j1(u * c)
    j0v, j1v = bessel_j0(v * c), bessel_j1(v * c)
    denom = np.where(near, 1.0, u * u - v * v)
    generic = c * (u * j1u * j0v - v * j0u * j1v) / denom
    j0w, j1w = bessel_j0(w * c), bessel_j1(w * c)
    limit = 0.5 * c * c * (j0w * j0w + j1w * j1w)
    out = np.where(near, limit, generic)
    return float(out[0]) if scalar else out

"""Rotation-invariant features of projection data.

The first-order feature mu[nu] is the average DFT of the projection lines;
the second-order feature C[nu] is the debiased average power.  Both depend
only on radial and pairwise distances: analytically mu is a sum of J0 terms
in the radial distances, C a sum over pairs.  Frequencies may be non-integer
(direct non-uniform evaluation of the transform).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import PointSourceModel, pairwise_distance_list, radial_distances
from .projector import ProjectionSet
from .specfun import bessel_j0

_CHUNK = 512


@dataclass(frozen=True)
class InvariantFeatures:
    """Estimated (or analytic) invariant features on a frequency axis."""

    freq_axis: np.ndarray
    mu: np.ndarray  # complex, one value per frequency
    c2: np.ndarray  # real, one value per frequency
    K_assumed: int
    noise_variance_used: float
    line_count: int

    def __post_init__(self):
        freq = np.asarray(self.freq_axis, dtype=float)
        mu = np.asarray(self.mu, dtype=complex)
        c2 = np.asarray(self.c2, dtype=float)
        if not (freq.shape == mu.shape == c2.shape) or freq.ndim != 1:
            raise ValueError("freq_axis, mu and c2 must be 1-d arrays of equal length")
        for name, arr in (("freq_axis", freq), ("mu", mu), ("c2", c2)):
            object.__setattr__(self, name, arr)
            arr.flags.writeable = False


def line_dft(line: np.ndarray, nu) -> complex | np.ndarray:
    """DFT of one projection line at (possibly non-integer) frequency nu.

    Sums line[u] * exp(+i 2 pi nu u / (2M+1)) over bins u in {-M, ..., M}.
    """
    line = np.asarray(line, dtype=float)
    if line.ndim != 1 or line.size % 2 == 0:
        raise ValueError("line must have odd length 2M+1")
    M = line.size // 2
    nu_arr = np.atleast_1d(np.asarray(nu, dtype=float))
    u = np.arange(-M, M + 1)
    phase = 2.0 * np.pi * np.outer(u, nu_arr) / (2 * M + 1)
    out = line @ np.exp(1j * phase)
    return complex(out[0]) if np.ndim(nu) == 0 else out


def estimate_features(
    data: ProjectionSet,
    K: int,
    freq_axis,
    sigma2: float | None = None,
) -> InvariantFeatures:
    """Empirical mu and debiased C over the given frequencies.

    mu[nu] averages the line DFTs; C[nu] averages |DFT|^2, then subtracts the
    noise power (2M+1)*sigma^2 and the K self terms and halves the result.
    The reduction over lines runs in a fixed chunked order so results are
    independent of threading.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    freq = np.asarray(freq_axis, dtype=float)
    M = data.bin_half_count
    if np.any(np.abs(freq) > M):
        warnings.warn("frequencies beyond M alias; results there are unreliable")
    if sigma2 is None:
        sigma2 = data.noise_variance

    n_bins = 2 * M + 1
    u = np.arange(-M, M + 1)
    phase = 2.0 * np.pi * np.outer(u, freq) / n_bins
    e_re = np.cos(phase)
    e_im = np.sin(phase)

    L = data.line_count
    sum_re = np.zeros(freq.size)
    sum_im = np.zeros(freq.size)
    sum_pow = np.zeros(freq.size)
    for start in range(0, L, _CHUNK):
        chunk = data.lines[start : start + _CHUNK]
        s_re = np.asarray(chunk @ e_re)
        s_im = np.asarray(chunk @ e_im)
        sum_re += s_re.sum(axis=0)
        sum_im += s_im.sum(axis=0)
        sum_pow += (s_re * s_re + s_im * s_im).sum(axis=0)

    mu = (sum_re + 1j * sum_im) / L
    c2 = (sum_pow / L - n_bins * sigma2 - K) / 2.0
    return InvariantFeatures(
        freq_axis=freq,
        mu=mu,
        c2=c2,
        K_assumed=K,
        noise_variance_used=float(sigma2),
        line_count=L,
    )


def analytic_features(model: PointSourceModel, freq_axis) -> InvariantFeatures:
    """Exact Bessel-sum features of a known model.

    mu[nu] = sum_k alpha_k J0(pi r_k nu / R) and
    C[nu] = sum_{m<n} alpha_m alpha_n J0(pi d_mn nu / R).
    """
    freq = np.asarray(freq_axis, dtype=float)
    R = model.radius_bound
    r = radial_distances(model)
    mu = model.weights @ bessel_j0(np.outer(r, freq) * (np.pi / R))
    d = pairwise_distance_list(model)
    if d.size:
        iu, ju = np.triu_indices(model.size, k=1)
        pair_w = model.weights[iu] * model.weights[ju]
        c2 = pair_w @ bessel_j0(np.outer(d, freq) * (np.pi / R))
    else:
        c2 = np.zeros(freq.size)
    return InvariantFeatures(
        freq_axis=freq,
        mu=mu.astype(complex),
        c2=c2,
        K_assumed=model.size,
        noise_variance_used=0.0,
        line_count=0,
    )


def features_to_csv(path, feats: InvariantFeatures, reference: InvariantFeatures | None = None) -> None:
    """CSV dump: nu, Re mu, Im mu, C, and reference columns when available."""
    if reference is not None and not np.array_equal(reference.freq_axis, feats.freq_axis):
        raise ValueError("reference features must share the frequency axis")
    with open(path, "w") as fh:
        fh.write("nu,mu_re,mu_im,c2,mu_ref,c2_ref\n")
        for j, nu in enumerate(feats.freq_axis):
            ref_mu = repr(float(reference.mu[j].real)) if reference is not None else ""
            ref_c2 = repr(float(reference.c2[j])) if reference is not None else ""
            fh.write(
                f"{repr(float(nu))},{repr(float(feats.mu[j].real))},"
                f"{repr(float(feats.mu[j].imag))},{repr(float(feats.c2[j]))},"
                f"{ref_mu},{ref_c2}\n"
            )

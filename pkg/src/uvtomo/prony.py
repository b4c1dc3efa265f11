"""Distance recovery by annihilating-filter spectral estimation.

For large frequencies the features behave like sums of cosines whose
frequencies encode the distances: sqrt(nu)*mu[nu] is approximately a sum of
K complex-exponential pairs exp(+-i a_k nu) with a_k = pi r_k / R.  A total
least squares annihilating filter recovers the a_k as root arguments, which
map back to distances via r = a R / pi.

The filter is deliberately overparameterized (twice the minimal pair count
where the window allows): the surplus roots absorb noise and discretization
error, and the genuine components are then selected by their least-squares
amplitudes on the cosine model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import InvariantFeatures

# accept roots this far from the unit circle as genuine exponential pairs
_ROOT_RADIUS_TOL = 0.2


@dataclass(frozen=True)
class PronyEstimate:
    """Distances recovered from one annihilation run."""

    distances: np.ndarray  # sorted ascending
    filter_roots: np.ndarray  # complex roots of the annihilating filter
    residual: float  # smallest singular value of the annihilation system
    nu_range: tuple[int, int] | None = None
    degenerate_count: int = 0  # near-real roots kept as zero/Nyquist frequencies
    missing_count: int = 0  # requested pairs that produced no usable root

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        roots = np.asarray(self.filter_roots, dtype=complex)
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "filter_roots", roots)
        d.flags.writeable = False
        roots.flags.writeable = False


def prony_frequencies(
    signal,
    order: int,
    scale: float = 1.0,
    nu_range: tuple[int, int] | None = None,
) -> PronyEstimate:
    """Annihilate a real signal of up to ``order`` cosine components.

    Builds the Toeplitz annihilation system for a filter of length
    2*order + 1, takes the smallest right singular vector (total least
    squares), roots the filter polynomial, and converts conjugate root pairs
    near the unit circle into frequencies a = |arg(root)|.  Distances are
    a * scale.  Near-real roots below pi/(4*nu_max) are discarded as DC
    leakage when ``nu_range`` is known.
    """
    signal = np.asarray(signal, dtype=float)
    if order < 1:
        raise ValueError("order must be at least 1")
    n = signal.size
    flen = 2 * order + 1
    if n < flen:
        raise ValueError(f"signal length {n} too short for order {order}")

    rows = n - flen + 1
    idx = np.arange(flen)[None, :] + np.arange(rows)[:, None]
    system = signal[idx[:, ::-1]]  # row i holds s[i+flen-1] ... s[i]
    _, svals, vt = np.linalg.svd(system, full_matrices=True)
    coeffs = vt[-1]
    residual = float(svals[-1]) if svals.size == flen else 0.0

    roots = np.roots(coeffs)
    on_circle = roots[np.abs(np.abs(roots) - 1.0) < _ROOT_RADIUS_TOL]
    dc_cut = np.pi / (4.0 * nu_range[1]) if nu_range is not None else 0.0

    # conjugate pairs share |arg|; real roots stand alone (DC or Nyquist)
    real_mask = np.abs(on_circle.imag) <= 1e-10 * np.abs(on_circle)
    candidates = []  # (frequency, distance from unit circle, is_degenerate)
    for root in on_circle[(~real_mask) & (on_circle.imag > 0)]:
        candidates.append((abs(np.angle(root)), abs(abs(root) - 1.0), False))
    for root in on_circle[real_mask]:
        candidates.append((0.0 if root.real > 0 else np.pi, abs(abs(root) - 1.0), True))
    candidates = [c for c in candidates if c[0] >= dc_cut]
    degenerate = sum(1 for c in candidates if c[2])
    if len(candidates) > order:
        # prefer genuine pairs on the unit circle over stray real roots
        candidates.sort(key=lambda c: (c[2], c[1]))
        candidates = candidates[:order]
    freqs = np.sort(np.array([c[0] for c in candidates]))
    missing = max(0, order - freqs.size)
    return PronyEstimate(
        distances=freqs * scale,
        filter_roots=roots,
        residual=residual,
        nu_range=nu_range,
        degenerate_count=degenerate,
        missing_count=missing,
    )


def _cosine_amplitudes(freqs: np.ndarray, nus: np.ndarray, signal: np.ndarray) -> np.ndarray:
    """Least-squares amplitude of each candidate cosine on the window."""
    basis = np.empty((nus.size, 2 * freqs.size))
    basis[:, 0::2] = np.cos(np.outer(nus, freqs))
    basis[:, 1::2] = np.sin(np.outer(nus, freqs))
    coef, *_ = np.linalg.lstsq(basis, signal, rcond=None)
    return np.hypot(coef[0::2], coef[1::2])


def _select_components(est: PronyEstimate, n_keep: int, nus, signal, scale) -> PronyEstimate:
    """Keep the n_keep candidate frequencies with the largest amplitudes."""
    freqs = est.distances / scale
    if freqs.size > n_keep:
        amp = _cosine_amplitudes(freqs, nus, signal)
        freqs = np.sort(freqs[np.argsort(-amp)[:n_keep]])
    return PronyEstimate(
        distances=freqs * scale,
        filter_roots=est.filter_roots,
        residual=est.residual,
        nu_range=est.nu_range,
        degenerate_count=est.degenerate_count,
        missing_count=max(0, n_keep - freqs.size),
    )


def _integer_window(features: InvariantFeatures, nu_min: int, nu_max: int | None):
    freq = features.freq_axis
    is_int = np.abs(freq - np.rint(freq)) < 1e-9
    ints = np.rint(freq[is_int]).astype(int)
    if nu_max is None:
        nu_max = int(ints.max()) if ints.size else 0
    wanted = np.arange(nu_min, nu_max + 1)
    lookup = {int(v): i for i, v in zip(np.where(is_int)[0], ints)}
    missing = [v for v in wanted if v not in lookup]
    if missing:
        raise ValueError(f"features lack integer frequencies {missing[:5]}")
    sel = np.array([lookup[int(v)] for v in wanted])
    return sel, wanted.astype(float)


def estimate_radial_distances(
    features: InvariantFeatures,
    K: int,
    R: float,
    nu_min: int = 10,
    nu_max: int | None = None,
) -> PronyEstimate:
    """Radial distances from sqrt(nu)-rescaled first-order features.

    Runs the annihilating filter at order 2K (filter length 4K+1) over the
    integer frequencies in [nu_min, nu_max] and collapses the surviving
    conjugate pairs to the K largest-amplitude components.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    sel, nus = _integer_window(features, nu_min, nu_max)
    if nus[-1] - nus[0] < 4 * K:
        raise ValueError("frequency window too short: need nu_max - nu_min >= 4K")
    signal = np.sqrt(nus) * features.mu[sel].real
    scale = R / np.pi
    raw = prony_frequencies(
        signal, order=2 * K, scale=scale, nu_range=(int(nus[0]), int(nus[-1]))
    )
    return _select_components(raw, K, nus, signal, scale)


def estimate_pairwise_distances(
    features: InvariantFeatures,
    K: int,
    R: float,
    nu_min: int = 10,
    nu_max: int | None = None,
) -> PronyEstimate:
    """Pairwise distances from the second-order features, K(K-1)/2 pairs.

    The filter order doubles the pair count when the window is long enough
    and falls back to the minimal order otherwise.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    n_pairs = K * (K - 1) // 2
    if n_pairs == 0:
        return PronyEstimate(
            distances=np.empty(0), filter_roots=np.empty(0, complex), residual=0.0
        )
    sel, nus = _integer_window(features, nu_min, nu_max)
    signal = np.sqrt(nus) * features.c2[sel]
    order = 2 * n_pairs if nus.size >= 4 * n_pairs + 1 else n_pairs
    if nus.size < 2 * order + 1:
        raise ValueError("frequency window too short for the pair count")
    scale = R / np.pi
    raw = prony_frequencies(
        signal, order=order, scale=scale, nu_range=(int(nus[0]), int(nus[-1]))
    )
    return _select_components(raw, n_pairs, nus, signal, scale)


def max_matched_error(estimated, truth) -> float:
    """Worst absolute error of an optimal assignment of estimates to truth.

    Every true distance must receive a distinct estimate; returns inf when
    there are fewer estimates than true values.
    """
    from scipy.optimize import linear_sum_assignment

    est = np.sort(np.asarray(estimated, dtype=float))
    tru = np.sort(np.asarray(truth, dtype=float))
    if tru.size == 0:
        return 0.0
    if est.size < tru.size:
        return float("inf")
    cost = np.abs(tru[:, None] - est[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def atom_emd(estimated, truth) -> float:
    """Earth mover's distance between two equal-size sets of point masses.

    In 1D the optimal transport matches the sorted sequences, so this is the
    mean absolute difference after sorting; inf when sizes differ.
    """
    est = np.sort(np.asarray(estimated, dtype=float))
    tru = np.sort(np.asarray(truth, dtype=float))
    if tru.size == 0:
        return 0.0
    if est.size != tru.size:
        return float("inf")
    return float(np.mean(np.abs(est - tru)))

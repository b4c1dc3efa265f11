"""Forward model: project point sources along random angles into noisy bins.

A projection line at angle theta places each point at coordinate
y*cos(theta) - x*sin(theta), binned into 2M+1 detector cells of width
Delta = 2R/(2M+1).  Noise is white Gaussian with variance set from the
dataset-average clean power divided by the requested SNR.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

_MAGIC = b"BTPJ1"

# defensive clamp events for points binning onto the detector edge; the model
# radius bound makes this unreachable, kept as a diagnostics counter only
_clamp_events = 0


def clamp_event_count() -> int:
    return _clamp_events


@dataclass(frozen=True)
class ProjectionSet:
    """L binned projection lines with their geometry and noise metadata.

    ``lines`` is (L, 2M+1); noiseless sets are stored as a CSR sparse matrix
    (integer counts), noisy ones as a dense float array.  Angles are kept for
    diagnostics only and are never read by the estimators.
    """

    lines: np.ndarray | sp.csr_matrix
    bin_half_count: int
    noise_variance: float
    radius_bound: float
    angles: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.bin_half_count < 1:
            raise ValueError("bin_half_count must be at least 1")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be nonnegative")
        if not self.radius_bound > 0:
            raise ValueError("radius_bound must be positive")
        if self.lines.ndim != 2 or self.lines.shape[1] != 2 * self.bin_half_count + 1:
            raise ValueError("lines must be (L, 2M+1)")
        if isinstance(self.lines, np.ndarray):
            self.lines.flags.writeable = False
        if self.angles is not None:
            ang = np.asarray(self.angles, dtype=float)
            if ang.shape != (self.lines.shape[0],):
                raise ValueError("angles must have one entry per line")
            object.__setattr__(self, "angles", ang)
            ang.flags.writeable = False

    @property
    def line_count(self) -> int:
        return self.lines.shape[0]

    @property
    def bin_width(self) -> float:
        return 2.0 * self.radius_bound / (2 * self.bin_half_count + 1)

    def dense_lines(self) -> np.ndarray:
        if isinstance(self.lines, np.ndarray):
            return self.lines
        return self.lines.toarray()


def _bin_indices(positions: np.ndarray, M: int, delta: float) -> np.ndarray:
    """Half-open binning [u-1/2, u+1/2), clamped to the outermost bins."""
    global _clamp_events
    u = np.floor(positions / delta + 0.5).astype(np.int64)
    over = (u > M) | (u < -M)
    if over.any():
        _clamp_events += int(np.count_nonzero(over))
        u = np.clip(u, -M, M)
    return u


def project_line(model, theta: float, M: int) -> np.ndarray:
    """Noiseless binned projection of the model at a single angle."""
    if M < 1:
        raise ValueError("M must be at least 1")
    delta = 2.0 * model.radius_bound / (2 * M + 1)
    pos = model.points[:, 1] * np.cos(theta) - model.points[:, 0] * np.sin(theta)
    u = _bin_indices(pos, M, delta)
    line = np.zeros(2 * M + 1)
    np.add.at(line, u + M, model.weights)
    return line


def _line_rng(seed: int, line: int) -> np.random.Generator:
    # independent counter-based substream per (seed, line)
    key = np.array([seed, line], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _SubstreamSampler:
    """One Philox generator re-keyed per line.

    Resetting key/counter/buffer reproduces a freshly constructed
    ``Philox(key=[seed, line])`` stream exactly while avoiding the
    per-construction overhead inside hot loops.
    """

    def __init__(self):
        self._bg = np.random.Philox(key=np.zeros(2, dtype=np.uint64))
        self.generator = np.random.Generator(self._bg)
        self._state = self._bg.state

    def reset(self, seed: int, line: int) -> np.random.Generator:
        st = self._state
        st["state"]["key"][0] = seed
        st["state"]["key"][1] = line
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bg.state = st
        return self.generator


def simulate(
    model,
    L: int,
    M: int,
    snr: float,
    seed: int,
    noise_seed: int | None = None,
) -> ProjectionSet:
    """Project the model at L uniform random angles and add noise at the SNR.

    Angles and noise for line l come from Philox substreams keyed by
    (seed, l) and (noise_seed, l); lines can therefore be generated in any
    order or in parallel with identical results.  ``noise_seed`` defaults to
    ``seed`` and exists so noise can be redrawn over fixed angles.
    """
    if L < 1:
        raise ValueError("L must be at least 1")
    if M < 1:
        raise ValueError("M must be at least 1")
    if not snr > 0:
        raise ValueError("snr must be positive (use inf for noiseless)")
    if noise_seed is None:
        noise_seed = seed

    sampler = _SubstreamSampler()
    angles = np.empty(L)
    for ell in range(L):
        angles[ell] = sampler.reset(seed, ell).uniform(0.0, 2.0 * np.pi)

    delta = 2.0 * model.radius_bound / (2 * M + 1)
    pos = np.outer(np.cos(angles), model.points[:, 1]) - np.outer(
        np.sin(angles), model.points[:, 0]
    )
    u = _bin_indices(pos.ravel(), M, delta) + M
    rows = np.repeat(np.arange(L), model.size)
    data = np.tile(model.weights, L)
    clean = sp.coo_matrix((data, (rows, u)), shape=(L, 2 * M + 1)).tocsr()

    if np.isinf(snr):
        return ProjectionSet(
            lines=clean,
            bin_half_count=M,
            noise_variance=0.0,
            radius_bound=model.radius_bound,
            angles=angles,
        )

    mean_power = float((clean.data**2).sum()) / (L * (2 * M + 1))
    sigma2 = mean_power / snr
    sigma = np.sqrt(sigma2)
    lines = clean.toarray()
    skip_angle = noise_seed == seed
    for ell in range(L):
        rng = sampler.reset(noise_seed, ell)
        if skip_angle:
            rng.uniform(0.0, 2.0 * np.pi)  # skip the angle draw of this stream
        lines[ell] += sigma * rng.standard_normal(2 * M + 1)
    return ProjectionSet(
        lines=lines,
        bin_half_count=M,
        noise_variance=sigma2,
        radius_bound=model.radius_bound,
        angles=angles,
    )


def save_projections(path, data: ProjectionSet) -> None:
    """Binary dump: magic, L, M, R, sigma^2 header then L rows of float64."""
    L = data.line_count
    M = data.bin_half_count
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<qqdd", L, M, data.radius_bound, data.noise_variance))
        dense = data.dense_lines()
        fh.write(np.ascontiguousarray(dense, dtype="<f8").tobytes())


def load_projections(path) -> ProjectionSet:
    with open(path, "rb") as fh:
        magic = fh.read(5)
        if magic != _MAGIC:
            raise ValueError(f"not a projection file (bad magic {magic!r})")
        L, M, R, sigma2 = struct.unpack("<qqdd", fh.read(32))
        lines = np.frombuffer(fh.read(L * (2 * M + 1) * 8), dtype="<f8").reshape(
            L, 2 * M + 1
        )
    return ProjectionSet(
        lines=lines.copy(),
        bin_half_count=M,
        noise_variance=sigma2,
        radius_bound=R,
    )


def projections_to_csv(path, data: ProjectionSet) -> None:
    """Debug CSV export, one projection line per row."""
    dense = data.dense_lines()
    with open(path, "w") as fh:
        for row in dense:
            fh.write(",".join(repr(float(x)) for x in row))
            fh.write("\n")

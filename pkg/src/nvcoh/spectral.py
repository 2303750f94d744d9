"""Blockwise periodograms and the per-frequency spectral dependence profile.

A recording is cut into non-overlapping blocks of fixed length; each block's
per-channel periodogram ordinates act as replicated observations of the
squared frequency content at every retained Fourier frequency.  Feeding the
per-frequency feature matrices of two channel groups into the vector
dependence statistic yields the nonlinear vector coherence (NVC) profile.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .rank_core import DegenerateRanksError, derive_seed
from .vector_measure import (
    DegenerateDenominatorError,
    FeatureMatrixPair,
    PermutationPlan,
    make_plan,
    t_n,
    t_n_bar,
    t_n_star,
)

__all__ = [
    "BlockTooLongError",
    "EmptyBandError",
    "FrequencyBand",
    "CANONICAL_BANDS",
    "TimeSeriesMatrix",
    "BlockPeriodogramTensor",
    "SpectralDependenceProfile",
    "retained_indices",
    "block_periodograms",
    "nvc_profile",
    "band_summary",
]

MEASURES = ("t", "tbar", "tstar")


class BlockTooLongError(ValueError):
    """Fewer than two complete blocks fit into the recording."""


class EmptyBandError(ValueError):
    """A frequency band contains no retained Fourier frequency."""


@dataclass(frozen=True)
class FrequencyBand:
    """Half-open band (lo_hz, hi_hz]; adjacent bands never double count."""

    name: str
    lo_hz: float
    hi_hz: float

    def __post_init__(self):
        if not (0 <= self.lo_hz < self.hi_hz):
            raise ValueError(f"invalid band {self.name}: ({self.lo_hz}, {self.hi_hz}]")

    def mask(self, freqs_hz: np.ndarray) -> np.ndarray:
        f = np.asarray(freqs_hz, dtype=np.float64)
        return (f > self.lo_hz) & (f <= self.hi_hz)


CANONICAL_BANDS: tuple[FrequencyBand, ...] = (
    FrequencyBand("delta", 0.5, 4.0),
    FrequencyBand("theta", 4.0, 8.0),
    FrequencyBand("alpha", 8.0, 12.0),
    FrequencyBand("beta", 12.0, 30.0),
    FrequencyBand("gamma", 30.0, 45.0),
)


@dataclass
class TimeSeriesMatrix:
    """A multichannel recording: samples x channels at a fixed rate."""

    data: np.ndarray
    fs: float
    labels: tuple[str, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError("data must be a (samples, channels) matrix")
        if not np.isfinite(data).all():
            raise ValueError("data contains NaN or infinite entries")
        if self.fs <= 0:
            raise ValueError("fs must be positive")
        labels = tuple(str(c) for c in self.labels)
        if len(labels) != data.shape[1]:
            raise ValueError("one label per channel required")
        if len(set(labels)) != len(labels):
            raise ValueError("channel labels must be unique")
        self.data = data
        self.labels = labels

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def n_channels(self) -> int:
        return self.data.shape[1]

    def select(self, labels) -> "TimeSeriesMatrix":
        """Sub-recording with the given channels, in the given order."""
        wanted = [str(c) for c in labels]
        missing = [c for c in wanted if c not in self.labels]
        if missing:
            raise KeyError(f"unknown channels: {missing}")
        idx = [self.labels.index(c) for c in wanted]
        return TimeSeriesMatrix(self.data[:, idx], self.fs, tuple(wanted))


@dataclass(frozen=True)
class BlockPeriodogramTensor:
    """Periodogram values indexed (block, channel, retained Fourier index)."""

    values: np.ndarray
    block_len: int
    freqs_hz: np.ndarray
    fs: float

    @property
    def n_blocks(self) -> int:
        return self.values.shape[0]

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]

    @property
    def n_freqs(self) -> int:
        return self.values.shape[2]


def retained_indices(block_len: int) -> np.ndarray:
    """Retained Fourier indices 1 .. ceil(B/2)-1: zero and Nyquist dropped."""
    return np.arange(1, (block_len + 1) // 2 if block_len % 2 else block_len // 2)


def block_periodograms(ts: TimeSeriesMatrix, block_len: int) -> BlockPeriodogramTensor:
    """Per-block, per-channel periodograms on the retained frequency grid.

    The transform is normalised by block_len**-0.5, so a block's periodogram
    summed over the full (pre-drop) grid equals block_len times its mean
    square.  A trailing partial block is discarded, keeping all blocks
    identically distributed.
    """
    if block_len < 4:
        raise ValueError("block_len must be at least 4")
    n = ts.n_samples // block_len
    if n < 2:
        raise BlockTooLongError(
            f"block_len {block_len} leaves {n} complete block(s); need >= 2")
    ks = retained_indices(block_len)
    blocks = ts.data[: n * block_len].reshape(n, block_len, ts.n_channels)
    spectrum = np.fft.rfft(blocks, axis=1)
    vals = (spectrum.real ** 2 + spectrum.imag ** 2) / block_len
    vals = vals[:, ks, :].transpose(0, 2, 1)
    freqs_hz = ks * ts.fs / block_len
    return BlockPeriodogramTensor(values=np.ascontiguousarray(vals),
                                  block_len=block_len, freqs_hz=freqs_hz, fs=ts.fs)


@dataclass
class SpectralDependenceProfile:
    """Per-frequency dependence estimates with optional test results."""

    freqs_hz: np.ndarray
    estimates: np.ndarray
    p_values: np.ndarray | None = None
    band_summary: dict | None = None
    meta: dict = field(default_factory=dict)


def _measure_value(measure: str, pair: FeatureMatrixPair, seed: int,
                   plan_x: PermutationPlan, plan_y: PermutationPlan,
                   eps: float) -> float:
    if measure == "t":
        return t_n(pair, seed=seed, eps=eps)
    if measure == "tbar":
        return t_n_bar(pair, plan=plan_y, seed=seed, eps=eps)
    if measure == "tstar":
        return t_n_star(pair, plan_x=plan_x, plan_y=plan_y, seed=seed, eps=eps)
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def nvc_profile(x: TimeSeriesMatrix, y: TimeSeriesMatrix, block_len: int,
                measure: str = "tbar", seed: int = 0,
                plan_x: PermutationPlan | None = None,
                plan_y: PermutationPlan | None = None,
                n_perms: int | None = None,
                eps: float = 1e-9) -> SpectralDependenceProfile:
    """NVC estimates between two channel groups at every retained frequency.

    Both recordings must share the sampling rate and length.  A per-frequency
    degeneracy (for example a constant channel whose periodogram ordinates are
    all tied) is recorded as NaN rather than failing the profile.
    """
    if x.fs != y.fs:
        raise ValueError("recordings must share the sampling rate")
    if x.n_samples != y.n_samples:
        raise ValueError("recordings must share the time base")
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")
    px = block_periodograms(x, block_len)
    py = block_periodograms(y, block_len)
    n = px.n_blocks
    if n < 10:
        warnings.warn(f"only {n} blocks available; estimates will be noisy",
                      stacklevel=2)
    if plan_y is None:
        plan_y = make_plan(y.n_channels, n_perms, seed=derive_seed(seed, "plan", "y"))
    if plan_x is None and measure == "tstar":
        plan_x = make_plan(x.n_channels, n_perms, seed=derive_seed(seed, "plan", "x"))

    ks = retained_indices(block_len)
    estimates = np.full(ks.size, np.nan)
    n_degenerate = 0
    for i, k in enumerate(ks):
        pair = FeatureMatrixPair(px.values[:, :, i], py.values[:, :, i])
        try:
            estimates[i] = _measure_value(measure, pair, derive_seed(seed, "freq", int(k)),
                                          plan_x, plan_y, eps)
        except (DegenerateRanksError, DegenerateDenominatorError):
            n_degenerate += 1
    meta = {
        "block_len": block_len,
        "n_blocks": n,
        "fs": x.fs,
        "p": x.n_channels,
        "q": y.n_channels,
        "measure": measure,
        "q_perms": plan_y.n_perms,
        "p_perms": plan_x.n_perms if plan_x is not None else None,
        "seed": seed,
        "n_degenerate": n_degenerate,
    }
    return SpectralDependenceProfile(freqs_hz=px.freqs_hz, estimates=estimates,
                                     meta=meta)


_BAND_AGGS = {
    "mean": np.nanmean,
    "median": np.nanmedian,
    "max": np.nanmax,
}


def band_summary(profile: SpectralDependenceProfile,
                 bands=CANONICAL_BANDS, agg: str = "mean") -> dict[str, float]:
    """Aggregate the per-frequency estimates inside each band.

    The contract default is the arithmetic mean over the band's retained
    frequencies; missing per-frequency values are excluded.  A band with no
    retained frequency at all raises ``EmptyBandError``.
    """
    if agg not in _BAND_AGGS:
        raise ValueError(f"unknown aggregation {agg!r}; expected one of {tuple(_BAND_AGGS)}")
    fn = _BAND_AGGS[agg]
    out: dict[str, float] = {}
    for band in bands:
        mask = band.mask(profile.freqs_hz)
        if not mask.any():
            raise EmptyBandError(f"band {band.name} contains no retained frequency")
        vals = profile.estimates[mask]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            out[band.name] = float(fn(vals))
    return out

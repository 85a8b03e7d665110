"""Monte-Carlo simulation of the relay link, independent of the closed forms.

Outdated CSI model: the selection gain ``h_sel`` (rank ``m`` in ascending order
of ``|h|^2`` among ``N`` i.i.d. CN(0, 1) gains) and the actual gain are related by

    h = sqrt(rho) * h_sel + sqrt(1 - rho) * w,    w ~ CN(0, 1)

so ``rho`` is the correlation between the outdated and actual channel powers.

Random numbers come from Philox substreams keyed by ``(seed, stream_id)``.
Samples are generated in fixed-size chunks, chunk ``i`` always using stream
``i``, and chunk statistics are combined in chunk order.  The result therefore
does not depend on how many workers process the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import FsoHopParams, RfHopParams
from .system import LinkConfig, sndr

__all__ = [
    "CHUNK_SIZE",
    "GENERATOR_VERSION",
    "MAX_RELAYS",
    "MIN_SAMPLES",
    "Estimate",
    "RngStream",
    "sample_selected_gamma1",
    "sample_gamma2",
    "sample_sndr",
    "estimate_outage",
    "estimate_capacity",
]

# Bump when the sampling algorithm changes, since golden outputs depend on it.
GENERATOR_VERSION = 1
CHUNK_SIZE = 1 << 16
MAX_RELAYS = 64
MIN_SAMPLES = 10_000
_LOW_COUNT = 30


@dataclass(frozen=True)
class Estimate:
    """Monte-Carlo estimate with its normal-approximation standard error.

    ``unreliable`` is set for outage estimates backed by fewer than 30
    outage events.
    """

    value: float
    std_error: float
    n_samples: int
    seed: int
    unreliable: bool = False


@dataclass(frozen=True)
class RngStream:
    """Reproducible, independent substream ``stream_id`` of ``seed``."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if int(v) != v or not 0 <= v < 2 ** 64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.Philox(seq))


def _as_generator(rng) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def _complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    z = gen.standard_normal(tuple(np.atleast_1d(shape)) + (2,)) * math.sqrt(0.5)
    return z[..., 0] + 1j * z[..., 1]


def sample_selected_gamma1(rng, p: RfHopParams, size: int | None = None):
    """Draw the actual SNR of the relay of rank ``p.rank``.

    ``rng`` is an :class:`RngStream` or a numpy ``Generator``.  Returns a
    float when ``size`` is None, otherwise an array of ``size`` draws.
    """
    if p.n_relays > MAX_RELAYS:
        raise ValueError(f"at most {MAX_RELAYS} relays are supported")
    gen = _as_generator(rng)
    count = 1 if size is None else int(size)
    gains = _complex_normal(gen, (count, p.n_relays))
    order = np.argsort(gains.real ** 2 + gains.imag ** 2, axis=1, kind="stable")
    chosen = gains[np.arange(count), order[:, p.rank - 1]]
    jitter = _complex_normal(gen, count)
    actual = math.sqrt(p.rho) * chosen + math.sqrt(1.0 - p.rho) * jitter
    out = (actual.real ** 2 + actual.imag ** 2) * p.mu1
    return float(out[0]) if size is None else out


def sample_gamma2(rng, p: FsoHopParams, size: int | None = None):
    """Draw the second-hop SNR ``mu2 * (X Y)**2`` with unit-mean Gamma X, Y."""
    gen = _as_generator(rng)
    count = 1 if size is None else int(size)
    x = gen.gamma(p.alpha, 1.0 / p.alpha, count)
    y = gen.gamma(p.beta, 1.0 / p.beta, count)
    out = p.mu2 * (x * y) ** 2
    return float(out[0]) if size is None else out


def _chunk_sndr(cfg: LinkConfig, seed: int, index: int, size: int) -> np.ndarray:
    gen = RngStream(seed, index).generator()
    g1 = sample_selected_gamma1(gen, cfg.rf, size)
    g2 = sample_gamma2(gen, cfg.fso, size)
    return sndr(g1, g2, cfg.imp, cfg.constant_c())


def _chunks(n: int) -> list[tuple[int, int]]:
    full, rest = divmod(n, CHUNK_SIZE)
    out = [(i, CHUNK_SIZE) for i in range(full)]
    if rest:
        out.append((full, rest))
    return out


def _map_chunks(func, n: int, jobs: int) -> list:
    chunks = _chunks(n)
    if jobs <= 1 or len(chunks) == 1:
        return [func(i, size) for i, size in chunks]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda c: func(*c), chunks))


def _check_run(n: int, seed: int) -> None:
    if int(n) != n or n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n!r}")
    RngStream(seed)


def sample_sndr(cfg: LinkConfig, n: int, seed: int, jobs: int = 1) -> np.ndarray:
    """All ``n`` simulated end-to-end SNDR samples, in stream order."""
    _check_run(n, seed)
    parts = _map_chunks(lambda i, size: _chunk_sndr(cfg, seed, i, size), n, jobs)
    return np.concatenate(parts)


def estimate_outage(cfg: LinkConfig, n: int, seed: int, jobs: int = 1) -> Estimate:
    """Fraction of simulated SNDR samples below ``cfg.gamma_th``."""
    _check_run(n, seed)
    if not cfg.below_ceiling:
        # the SNDR never reaches 1/delta, so every sample is in outage
        return Estimate(1.0, 0.0, n, seed)

    def count(i, size):
        return int(np.count_nonzero(_chunk_sndr(cfg, seed, i, size) < cfg.gamma_th))

    hits = sum(_map_chunks(count, n, jobs))
    p = hits / n
    return Estimate(p, math.sqrt(p * (1.0 - p) / n), n, seed, unreliable=hits < _LOW_COUNT)


def estimate_capacity(cfg: LinkConfig, n: int, seed: int, jobs: int = 1) -> Estimate:
    """Sample mean of ``0.5 log2(1 + SNDR)``: the exact ergodic capacity."""
    _check_run(n, seed)

    def moments(i, size):
        c = 0.5 * np.log2(1.0 + _chunk_sndr(cfg, seed, i, size))
        mean = math.fsum(c) / size
        return size, mean, math.fsum((c - mean) ** 2)

    # Chan et al. pairwise update, applied in chunk order
    count, mean, m2 = 0, 0.0, 0.0
    for size, cmean, cm2 in _map_chunks(moments, n, jobs):
        total = count + size
        diff = cmean - mean
        mean += diff * size / total
        m2 += cm2 + diff * diff * count * size / total
        count = total
    var = m2 / (count - 1)
    return Estimate(mean, math.sqrt(var / count), n, seed)

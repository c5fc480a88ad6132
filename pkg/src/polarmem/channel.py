"""BPSK/AWGN channel and Monte Carlo frame-error-rate estimation."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .decoder import ListDecoder
from .polar import PolarCodeConfig, encode_message

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """One output of the SplitMix64 generator seeded at ``x``."""
    z = (x + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def frame_seed(master_seed: int, frame_index: int) -> int:
    """Seed of frame ``frame_index``; independent of execution order."""
    return splitmix64((master_seed + frame_index * GOLDEN_GAMMA) & MASK64)


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def bpsk_awgn(codeword, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Map bit ``b`` to ``1 - 2b``, add noise, return LLRs ``2y / sigma**2``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = 1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)
    y = x + sigma * rng.standard_normal(x.shape)
    return 2.0 * y / sigma**2


def wilson_interval(errors: int, frames: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if frames <= 0:
        raise ValueError("frames must be positive")
    phat = errors / frames
    denom = 1.0 + z * z / frames
    centre = (phat + z * z / (2 * frames)) / denom
    half = z * math.sqrt(phat * (1 - phat) / frames + z * z / (4 * frames * frames)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == frames else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class ChannelConfig:
    ebn0_db: float
    rate: float
    rng_seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.ebn0_db):
            raise ValueError("Eb/N0 must be finite")
        if not 0 < self.rate < 1:
            raise ValueError(f"rate must lie in (0, 1), got {self.rate}")

    @property
    def sigma(self) -> float:
        return ebn0_to_sigma(self.ebn0_db, self.rate)

    @classmethod
    def for_code(cls, config: PolarCodeConfig, ebn0_db: float, rng_seed: int = 0) -> "ChannelConfig":
        """Rate counts message bits only, so the CRC overhead costs Eb/N0."""
        return cls(ebn0_db, config.message_len / config.N, rng_seed)


class FerResult(NamedTuple):
    ebn0_db: float
    frames: int
    errors: int
    fer: float
    ci_halfwidth: float

    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.frames)

    def csv_row(self) -> str:
        return f"{self.ebn0_db:g},{self.frames},{self.errors},{self.fer:.6g},{self.ci_halfwidth:.6g}"


CSV_HEADER = "ebn0_db,frames,errors,fer,ci_halfwidth"


def make_frame(config: PolarCodeConfig, channel: ChannelConfig, index: int):
    """Message and channel LLRs of frame ``index``."""
    rng = np.random.default_rng(frame_seed(channel.rng_seed, index))
    message = rng.integers(0, 2, config.message_len, dtype=np.uint8)
    _, codeword = encode_message(message, config)
    return message, bpsk_awgn(codeword, channel.sigma, rng)


def _count_errors(args) -> int:
    config, channel, start, stop, memory_kind = args
    decoder = ListDecoder(config, memory_kind, record=False)
    errors = 0
    for index in range(start, stop):
        message, llrs = make_frame(config, channel, index)
        errors += not np.array_equal(decoder.decode(llrs).info_bits, message)
    return errors


def default_workers() -> int:
    return max(1, int(os.environ.get("POLARMEM_THREADS", "1")))


def fer_montecarlo(
    config: PolarCodeConfig,
    channel: ChannelConfig,
    frames: int,
    memory_kind: str = "traditional",
    workers: int | None = None,
) -> FerResult:
    """Decode ``frames`` independent frames and count frame errors."""
    if frames < 1:
        raise ValueError("frames must be >= 1")
    workers = default_workers() if workers is None else max(1, workers)
    chunk = -(-frames // workers)
    jobs = [(config, channel, s, min(frames, s + chunk), memory_kind) for s in range(0, frames, chunk)]
    if workers == 1:
        errors = sum(map(_count_errors, jobs))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = sum(pool.map(_count_errors, jobs))
    lo, hi = wilson_interval(errors, frames)
    return FerResult(channel.ebn0_db, frames, errors, errors / frames, (hi - lo) / 2)

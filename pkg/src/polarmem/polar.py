"""Polar encoding over GF(2), partial-sums and code construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bits import as_bits, is_power_of_two, log2_exact
from .crc import CRC16_CCITT, CrcPolynomial, crc_attach


def polar_transform(bits: np.ndarray) -> np.ndarray:
    """Multiply the last axis by ``F^{(x)m}`` in place and return it.

    Works on any leading batch shape. Natural bit order: output bit ``i`` is
    the XOR of all input bits ``j`` whose binary index covers ``i``.
    """
    size = bits.shape[-1]
    lead = bits.shape[:-1]
    half = 1
    while half < size:
        view = bits.reshape(*lead, size // (2 * half), 2, half)
        view[..., 0, :] ^= view[..., 1, :]
        half *= 2
    return bits


def kronecker_encode(u) -> np.ndarray:
    """Return ``u . F^{(x)m}`` for a vector of length ``2**m``.

    Uses the butterfly signal-flow graph, ``m * 2**(m-1)`` XORs in total.
    The transform is an involution, so the same call also decodes.
    """
    arr = as_bits(u)
    if not is_power_of_two(arr.size):
        raise ValueError(f"length {arr.size} is not a power of two")
    return polar_transform(arr)


def partial_sums(u_slice, lam: int) -> np.ndarray:
    """Partial-sums of a stage-``lam`` node from its ``2**lam`` decoded bits.

    A 2-D input is treated as a batch with one bit vector per row.
    """
    if lam < 0:
        raise ValueError("stage index must be nonnegative")
    arr = np.asarray(u_slice)
    if arr.ndim == 2:
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("bit vector elements must be 0 or 1")
        arr = arr.astype(np.uint8, copy=True)
    else:
        arr = as_bits(arr)
    if arr.shape[-1] != 1 << lam:
        raise ValueError(f"stage {lam} needs {1 << lam} bits, got {arr.shape[-1]}")
    return polar_transform(arr)


def bhattacharyya_parameters(n: int, design_snr_db: float = 0.0) -> np.ndarray:
    """Bhattacharyya parameter of each synthesized channel, natural order.

    The top-level split of the scheduling tree combines the physical
    channels first, so the index MSB selects the first transform applied
    to the channel parameter (``2z - z**2`` if clear, ``z**2`` if set) and
    each later step refines the next lower bit.
    """
    z = np.array([math.exp(-(10.0 ** (design_snr_db / 10.0)))])
    for _ in range(n):
        z = np.stack([2.0 * z - z * z, z * z], axis=-1).reshape(-1)
    return z


def build_frozen_set(n: int, K: int, design_snr_db: float = 0.0) -> frozenset[int]:
    """Freeze the ``N - K`` least reliable indices (largest ``z``).

    Equal parameters are resolved by freezing the lower index first.
    """
    N = 1 << n
    if not 0 < K <= N:
        raise ValueError(f"K must lie in (0, {N}], got {K}")
    z = bhattacharyya_parameters(n, design_snr_db)
    order = sorted(range(N), key=lambda i: (-z[i], i))
    return frozenset(order[: N - K])


@dataclass(frozen=True)
class PolarCodeConfig:
    """Code, list and hardware-parallelism parameters of one decoder instance.

    ``K`` counts the CRC bits. ``p`` must be at least 1: the folded schedules
    need words of two or more bits.
    """

    n: int
    K: int
    p: int
    L: int
    frozen_set: frozenset = field(default=None)
    crc: CrcPolynomial | None = CRC16_CCITT
    design_snr_db: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("code length must be at least 4")
        if not 1 <= self.p <= self.n - 1:
            raise ValueError(f"parallelism exponent p must lie in [1, {self.n - 1}], got {self.p}")
        if not is_power_of_two(self.L):
            raise ValueError(f"list size must be a power of two, got {self.L}")
        if not 0 < self.K <= self.N:
            raise ValueError(f"K must lie in (0, {self.N}], got {self.K}")
        if self.crc_len >= self.K:
            raise ValueError("CRC must be shorter than K")
        if self.frozen_set is None:
            object.__setattr__(self, "frozen_set", build_frozen_set(self.n, self.K, self.design_snr_db))
        frozen = frozenset(int(i) for i in self.frozen_set)
        if len(frozen) != self.N - self.K or not all(0 <= i < self.N for i in frozen):
            raise ValueError("frozen set must hold N - K indices from [0, N)")
        object.__setattr__(self, "frozen_set", frozen)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def P(self) -> int:
        return 1 << self.p

    @property
    def crc_len(self) -> int:
        return 0 if self.crc is None else self.crc.width

    @property
    def message_len(self) -> int:
        return self.K - self.crc_len

    @property
    def info_positions(self) -> np.ndarray:
        return np.array(sorted(set(range(self.N)) - self.frozen_set), dtype=np.int64)

    @property
    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.frozen_set)] = True
        return mask

    @classmethod
    def from_sizes(cls, N: int, K: int, P: int, L: int, **kwargs) -> "PolarCodeConfig":
        return cls(log2_exact(N), K, log2_exact(P), L, **kwargs)


def encode_message(message, config: PolarCodeConfig) -> tuple[np.ndarray, np.ndarray]:
    """Attach the CRC, place the word on the information positions and encode.

    Returns ``(u, x)``: the full source word and the codeword.
    """
    msg = as_bits(message, config.message_len)
    word = msg if config.crc is None else crc_attach(msg, config.crc)
    u = np.zeros(config.N, dtype=np.uint8)
    u[config.info_positions] = word
    return u, polar_transform(u.copy())

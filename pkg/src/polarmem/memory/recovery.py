"""Recovery of decoded bits from stored partial-sums.

A stage-``lam`` group of partial-sums, split into ``W = 2**lam / P`` words,
satisfies ``s_word = sum over covering words of (u_word . F^{(x)p})``. Running
the word-level butterfly over the ``W`` words (the same graph as a W-bit
polar encoder, applied to all ``P`` lanes at once) yields every
``u_word . F^{(x)p}``; one more ``P``-bit encode per word returns ``u``.
"""

from __future__ import annotations

import numpy as np

from ..bits import as_bits, log2_exact
from ..polar import polar_transform
from .schedules import RecoveryCycle, recovery_schedule


def run_recovery(words: np.ndarray, schedule: list[RecoveryCycle], start: int = 0, stop: int | None = None) -> None:
    """Execute schedule cycles ``[start, stop)`` in place, one XOR word per cycle.

    ``words`` has shape ``(..., W, P)``.
    """
    for step in schedule[start:stop]:
        words[..., step.a, :] ^= words[..., step.b, :]


def finish_recovery(words: np.ndarray, done: int) -> np.ndarray:
    """Apply every butterfly after the first ``done`` cycles, in place.

    Same arithmetic as ``run_recovery`` from ``done`` to the end, but whole
    strides are applied as one array operation.
    """
    *lead, W, P = words.shape
    if W == 1:
        return words
    half = W // 2
    level, part = divmod(done, half)
    stride = W >> (level + 1)
    if part:
        a = np.array([x for x in range(W) if not x & stride][part:])
        words[..., a, :] ^= words[..., a + stride, :]
        stride //= 2
    while stride >= 1:
        view = words.reshape(*lead, W // (2 * stride), 2, stride, P)
        view[..., 0, :, :] ^= view[..., 1, :, :]
        stride //= 2
    return words


def encode_words(words: np.ndarray) -> np.ndarray:
    """The per-path ``P``-bit re-encoder applied to every word."""
    return polar_transform(words)


def recover_bits(s, P: int) -> np.ndarray:
    """Decoded bits of one group from its partial-sums, cycle by cycle.

    ``s`` may carry leading batch axes; the last axis is the group.
    """
    s = np.asarray(s, dtype=np.uint8)
    if s.ndim == 1:
        s = as_bits(s)
    size = s.shape[-1]
    lam, p = log2_exact(size), log2_exact(P)
    if lam < p:
        raise ValueError(f"group of {size} bits is shorter than a {P}-bit word")
    words = s.reshape(*s.shape[:-1], size // P, P).copy()
    run_recovery(words, recovery_schedule(lam, p))
    return encode_words(words).reshape(s.shape)

"""Helpers for binary vectors stored as ``uint8`` numpy arrays."""

from __future__ import annotations

import numpy as np


def is_power_of_two(value: int) -> bool:
    return value > 0 and (value & (value - 1)) == 0


def log2_exact(value: int) -> int:
    """Return ``m`` such that ``2**m == value``; raise ``ValueError`` otherwise."""
    if not is_power_of_two(int(value)):
        raise ValueError(f"{value} is not a power of two")
    return int(value).bit_length() - 1


def as_bits(values, length: int | None = None) -> np.ndarray:
    """Validate ``values`` as a one-dimensional binary vector.

    Returns a fresh ``uint8`` array. Raises ``ValueError`` if any element is
    outside {0, 1} or the length differs from ``length`` (when given).
    """
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ValueError("bit vector must be one-dimensional")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit vector elements must be 0 or 1")
    if length is not None and arr.size != length:
        raise ValueError(f"expected {length} bits, got {arr.size}")
    return arr.astype(np.uint8, copy=True)


def to_hex(bits) -> str:
    """Serialize bits MSB-first as ``"<length>:<hex>"``.

    The bit string is right-padded with zeros to a multiple of four before
    conversion, so ``from_hex(to_hex(b)) == b`` for every length.
    """
    arr = as_bits(bits)
    pad = (-arr.size) % 4
    padded = np.concatenate([arr, np.zeros(pad, dtype=np.uint8)])
    digits = "".join(
        format(int("".join(map(str, padded[k:k + 4])), 2), "x")
        for k in range(0, padded.size, 4)
    )
    return f"{arr.size}:{digits}"


def from_hex(text: str) -> np.ndarray:
    length_text, _, digits = text.partition(":")
    length = int(length_text)
    if len(digits) != (length + 3) // 4:
        raise ValueError(f"hex payload does not match length {length}")
    bits = [int(b) for d in digits for b in format(int(d, 16), "04b")]
    if any(bits[length:]):
        raise ValueError("nonzero padding bits")
    return np.array(bits[:length], dtype=np.uint8)


def ctz(value: int) -> int:
    """Count trailing zero bits of a positive integer."""
    return (value & -value).bit_length() - 1

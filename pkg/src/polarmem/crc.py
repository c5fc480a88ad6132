"""Bit-serial CRC over arbitrary-length bit vectors.

Convention: MSB-first, zero initial register, no reflection, no final XOR.
With the CCITT polynomial this is the catalogued CRC-16/XMODEM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import as_bits


@dataclass(frozen=True)
class CrcPolynomial:
    """Generator polynomial with the implicit leading ``x**width`` term dropped."""

    width: int
    poly: int
    name: str = ""

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("CRC polynomial must have degree >= 1")
        if not 0 <= self.poly < (1 << self.width):
            raise ValueError(f"poly 0x{self.poly:x} does not fit in {self.width} bits")


CRC16_CCITT = CrcPolynomial(16, 0x1021, "CRC-16/CCITT")


def crc_remainder(bits, crc: CrcPolynomial = CRC16_CCITT) -> np.ndarray:
    """Remainder of ``bits(x) * x**width`` divided by the generator."""
    data = as_bits(bits)
    top = 1 << (crc.width - 1)
    mask = (1 << crc.width) - 1
    reg = 0
    for b in data.tolist():
        feedback = ((reg & top) != 0) ^ b
        reg = (reg << 1) & mask
        if feedback:
            reg ^= crc.poly
    return np.array([(reg >> k) & 1 for k in range(crc.width - 1, -1, -1)], dtype=np.uint8)


def crc_attach(info, crc: CrcPolynomial = CRC16_CCITT) -> np.ndarray:
    data = as_bits(info)
    return np.concatenate([data, crc_remainder(data, crc)])


def crc_check(word, crc: CrcPolynomial = CRC16_CCITT) -> bool:
    data = as_bits(word)
    if data.size <= crc.width:
        raise ValueError(f"word of {data.size} bits is too short for a degree-{crc.width} CRC")
    payload, parity = data[:-crc.width], data[-crc.width:]
    return bool(np.array_equal(crc_remainder(payload, crc), parity))

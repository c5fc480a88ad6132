"""Independent reference implementations used only by the tests.

They are written from first principles (dense matrices, recursion, long
division) and share no code with the package.
"""

from __future__ import annotations

import numpy as np


def generator_matrix(n: int) -> np.ndarray:
    """Dense ``F^{(x)n}`` with ``F = [[1, 0], [1, 1]]``."""
    G = np.ones((1, 1), dtype=np.int64)
    F = np.array([[1, 0], [1, 1]], dtype=np.int64)
    for _ in range(n):
        G = np.kron(G, F)
    return G


def dense_encode(u) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    n = int(np.log2(len(u)))
    return (u @ generator_matrix(n)) % 2


def sc_decode(llrs, frozen) -> np.ndarray:
    """Textbook recursive successive-cancellation decoder (min-sum).

    Returns the estimate of the full source vector ``u``.
    """
    llrs = [float(v) for v in llrs]
    frozen = list(frozen)

    def rec(alpha, fz):
        if len(alpha) == 1:
            bit = 0 if fz[0] or alpha[0] >= 0 else 1
            return [bit], [bit]
        h = len(alpha) // 2
        a, b = alpha[:h], alpha[h:]
        left = [np.sign(x) * np.sign(y) * min(abs(x), abs(y)) for x, y in zip(a, b)]
        u1, x1 = rec(left, fz[:h])
        right = [y + (1 - 2 * s) * x for x, y, s in zip(a, b, x1)]
        u2, x2 = rec(right, fz[h:])
        return u1 + u2, [p ^ q for p, q in zip(x1, x2)] + x2

    return np.array(rec(llrs, frozen)[0], dtype=np.uint8)


def crc_long_division(bits, poly: int, width: int) -> list[int]:
    """Remainder of ``m(x) * x^width`` divided by ``x^width + poly(x)``."""
    divisor = (1 << width) | poly
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    value <<= width
    while value.bit_length() > width:
        value ^= divisor << (value.bit_length() - width - 1)
    return [(value >> (width - 1 - k)) & 1 for k in range(width)]


def bhattacharyya_bruteforce(n: int, z0: float) -> list[float]:
    """Per-index walk: bit ``b`` of ``i`` (MSB first) picks ``z^2`` if set else ``2z - z^2``."""
    out = []
    for i in range(1 << n):
        z = z0
        for k in range(n - 1, -1, -1):
            z = z * z if (i >> k) & 1 else 2 * z - z * z
        out.append(z)
    return out


def count_xor_nodes(m: int) -> int:
    """XOR nodes in the butterfly signal-flow graph of an ``m``-bit encoder, by construction."""
    count, h = 0, 1
    while h < m:
        for start in range(0, m, 2 * h):
            count += h
        h *= 2
    return count

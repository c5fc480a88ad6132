"""Register-based path memory with an N-bit crossbar."""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError
from ..trace import ScheduleTrace


class TraditionalPathMemory:
    """``L`` registers of ``N`` bits, permuted wholesale after list management."""

    kind = "traditional"

    def __init__(self, N: int, L: int, trace: ScheduleTrace | None = None):
        self.N, self.L = N, L
        self.trace = trace if trace is not None else ScheduleTrace(record=False)
        self.vectors = np.zeros((L, N), dtype=np.uint8)
        self.filled = 0

    def update(self, perm, new_bits) -> None:
        if self.filled >= self.N:
            raise CapacityError(f"path memory already holds {self.N} bits")
        self.trace.crossbar("tpm.xbar", "permute", self.N, limited=False)
        self.vectors = self.vectors[perm]
        self.vectors[:, self.filled] = new_bits
        self.filled += 1

    def start_gather(self, lam: int) -> None:
        pass

    def gather_cycle(self, c: int) -> None:
        pass

    def finish_gather(self) -> None:
        pass

    def read_all(self) -> np.ndarray:
        return self.vectors[:, : self.filled].copy()

    def read_path(self, l: int) -> np.ndarray:
        if not 0 <= l < self.L:
            raise IndexError(f"path {l} outside [0, {self.L})")
        return self.vectors[l, : self.filled].copy()

"""Folded partial-sum network with per-path SRAM and block pointers."""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError, ProtocolError
from ..trace import ScheduleTrace
from .schedules import component_stages, psn_schedule


class FoldedPsn:
    """Partial-sum storage for ``L`` paths of a semi-parallel list decoder.

    Stages up to ``p`` live in a ``P``-bit register bank per path, updated by
    a parallel network as each bit is decided. Words at stage ``p`` and above
    sit in a word-addressed SRAM per path. List management only permutes the
    register banks and a table of bank pointers (one per stage); SRAM
    contents are never copied between paths.

    In plain mode the SRAM holds ``N/2`` bits and is addressed modulo
    ``N/2``, so the second half of the code reuses the first half's space.
    In merged mode it holds ``N`` bits, which keeps every stage's final
    group alive for decoded-bit recovery.
    """

    def __init__(self, n: int, p: int, L: int, merged: bool = False, trace: ScheduleTrace | None = None):
        if not 1 <= p < n:
            raise ValueError(f"need 1 <= p < n, got p={p}, n={n}")
        self.n, self.p, self.L = n, p, L
        self.N, self.P = 1 << n, 1 << p
        self.merged = merged
        self.capacity = self.N if merged else self.N // 2
        self.trace = trace if trace is not None else ScheduleTrace(record=False)
        self.sram = np.zeros((L, self.capacity), dtype=np.uint8)
        self.reg = np.zeros((L, self.P), dtype=np.uint8)
        self.reg_len = 0
        self.ptr = np.full((L, n), -1, dtype=np.int64)
        self.filled = 0
        self.flushed = 0
        self._own = np.arange(L)
        self._gen = None

    def _addr(self, pos: int) -> int:
        return pos % self.capacity

    def permute(self, perm) -> None:
        self.trace.crossbar("psn.xbar", "permute", self.P)
        self.reg = self.reg[perm]
        self.ptr = self.ptr[perm]

    def push(self, bits) -> None:
        """Enter one decided bit per path into the parallel (register) network."""
        if self.filled >= self.N:
            raise CapacityError(f"all {self.N} bits already decoded")
        if self.reg_len == self.P:
            raise ProtocolError("register word is full; its stage-p node has not been generated")
        q = self.reg_len
        self.reg[:, q] = bits
        half = 1
        while q & half:
            lo = q + 1 - 2 * half
            self.reg[:, lo:lo + half] ^= self.reg[:, lo + half:lo + 2 * half]
            half *= 2
        self.reg_len += 1
        self.filled += 1

    def register_sums(self, lam: int) -> np.ndarray:
        """Partial-sums for a G-node below stage ``p``, read from the register bank."""
        size = 1 << lam
        if lam >= self.p or self.reg_len < size or self.reg_len % size:
            raise ProtocolError(f"register holds no complete stage-{lam} block")
        return self.reg[:, self.reg_len - size:self.reg_len].copy()

    def start_generation(self, lam: int) -> int:
        """Begin producing the stage-``lam`` node that ends at the current bit.

        Returns the number of cycles the generation takes.
        """
        size = 1 << lam
        base = self.filled - size
        if lam < self.p or lam >= self.n:
            raise ProtocolError(f"stage {lam} is not generated by the folded network")
        if self.reg_len != self.P or base < 0 or base % size or self.flushed != self.filled - self.P:
            raise ProtocolError(f"no complete stage-{lam} node ends at bit {self.filled}")
        needed = set(component_stages(lam, self.p)[:-1])
        missing = [mu for mu in needed if (self.ptr[:, mu] < 0).any()]
        if missing:
            raise ProtocolError(f"stage-{lam} generation lacks stored stages {sorted(missing)}")
        self._gen = (lam, base, psn_schedule(lam, self.p))
        return len(self._gen[2])

    def generation_cycle(self, c: int) -> None:
        lam, base, schedule = self._gen
        step = schedule[c]
        P = self.P
        if step.in0_from_register:
            word = self.reg.copy()
        else:
            src = self._addr(base + step.in0_word * P)
            self.trace.crossbar("psn.xbar", "gather", P)
            word = self.sram[self.ptr[:, step.in0_stage], src:src + P]
        if step.in1_word is not None:
            src = self._addr(base + step.in1_word * P)
            word ^= self.sram[:, src:src + P]
        dst = self._addr(base + step.out_word * P)
        self.sram[:, dst:dst + P] = word
        data = "/".join("".join(map(str, w)) for w in word) if self.trace.record_data else ""
        self.trace.log("psn.sram", "write", dst // P, data)

    def finish_generation(self) -> np.ndarray:
        lam, base, _ = self._gen
        lo = self._addr(base)
        sums = self.sram[:, lo:lo + (1 << lam)].copy()
        self.ptr[:, self.p:lam] = -1
        self.ptr[:, lam] = self._own
        self.reg[:] = 0
        self.reg_len = 0
        self.flushed = self.filled
        self._gen = None
        return sums

    def generate(self, lam: int) -> np.ndarray:
        """Run a whole generation, one trace cycle per word; returns ``(L, 2**lam)`` sums."""
        cycles = self.start_generation(lam)
        for c in range(cycles):
            self.trace.tick()
            self.generation_cycle(c)
        return self.finish_generation()

    def stored_blocks(self) -> list[tuple[int, int]]:
        """``(stage, start)`` of each SRAM block covering the flushed prefix."""
        blocks, start = [], 0
        for mu in range(self.n - 1, self.p - 1, -1):
            if self.flushed & (1 << mu):
                blocks.append((mu, start))
                start += 1 << mu
        return blocks

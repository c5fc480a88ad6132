"""Folded path memory: P-bit head banks, per-path SRAM and block pointers."""

from __future__ import annotations

import numpy as np

from ..errors import CapacityError, ProtocolError
from ..trace import ScheduleTrace
from .schedules import psn_schedule


class FoldedPathMemory:
    """Decoded bits kept in ``L`` SRAMs that list management never moves.

    Only the ``P``-bit head banks pass through the crossbar after list
    management. Full head words are flushed to the owning path's SRAM; each
    path then reaches its older words through a table of physical bank
    indices, one per group. While the partial-sum network generates a
    stage-``lam`` node, the decoded words at the same positions are gathered
    into the path's own SRAM so the group table collapses to one entry.
    """

    kind = "folded"

    def __init__(self, n: int, p: int, L: int, trace: ScheduleTrace | None = None):
        self.n, self.p, self.L = n, p, L
        self.N, self.P = 1 << n, 1 << p
        self.max_groups = n - p + 1
        self.trace = trace if trace is not None else ScheduleTrace(record=False)
        self.sram = np.zeros((L, self.N), dtype=np.uint8)
        self.head = np.zeros((L, self.P), dtype=np.uint8)
        self.head_len = 0
        self.groups: list[tuple[int, int]] = []
        self.ptr = np.zeros((L, self.max_groups), dtype=np.int64)
        self.filled = 0
        self.peak_groups = 0
        self._own = np.arange(L)
        self._gather = None

    @property
    def block_index_table(self) -> list[list[tuple[int, int, int]]]:
        """Per path: ``(start, length, bank)`` of every stored group."""
        return [
            [(s, ln, int(self.ptr[l, g])) for g, (s, ln) in enumerate(self.groups)]
            for l in range(self.L)
        ]

    def update(self, perm, new_bits) -> None:
        if self.filled >= self.N:
            raise CapacityError(f"path memory already holds {self.N} bits")
        self.trace.crossbar("fpm.xbar", "permute", self.P)
        self.head = self.head[perm]
        self.ptr = self.ptr[perm]
        self.head[:, self.head_len] = new_bits
        self.head_len += 1
        self.filled += 1
        if self.head_len == self.P:
            self._flush()

    def _flush(self) -> None:
        start = self.filled - self.P
        if len(self.groups) == self.max_groups:
            raise CapacityError(f"more than {self.max_groups} groups per path")
        self.sram[:, start:self.filled] = self.head
        self.groups.append((start, self.P))
        self.ptr[:, len(self.groups) - 1] = self._own
        self.peak_groups = max(self.peak_groups, len(self.groups))
        self.head[:] = 0
        self.head_len = 0
        self.trace.log("fpm.sram", "flush", start // self.P)

    def start_gather(self, lam: int) -> None:
        """Prepare to co-permute the words of the stage-``lam`` node just completed."""
        if lam <= self.p:
            self._gather = None
            return
        size = 1 << lam
        base = self.filled - size
        if self.head_len or base < 0 or base % size:
            raise ProtocolError(f"no complete stage-{lam} node ends at bit {self.filled}")
        first = next((g for g, (s, _) in enumerate(self.groups) if s >= base), None)
        if first is None or self.groups[first][0] != base:
            raise ProtocolError(f"groups do not tile the stage-{lam} node at bit {base}")
        column = np.empty(size // self.P, dtype=np.int64)
        for g in range(first, len(self.groups)):
            s, ln = self.groups[g]
            column[(s - base) // self.P:(s - base + ln) // self.P] = g
        self._gather = (lam, base, first, column, psn_schedule(lam, self.p))

    def gather_cycle(self, c: int) -> None:
        if self._gather is None:
            return
        lam, base, _, column, schedule = self._gather
        w = schedule[c].out_word
        lo = base + w * self.P
        banks = self.ptr[:, column[w]]
        self.trace.crossbar("fpm.xbar", "gather", self.P)
        self.sram[:, lo:lo + self.P] = self.sram[banks, lo:lo + self.P]
        self.trace.log("fpm.sram", "write", lo // self.P)

    def finish_gather(self) -> None:
        if self._gather is None:
            return
        lam, base, first, _, _ = self._gather
        self.groups[first:] = [(base, 1 << lam)]
        self.ptr[:, first] = self._own
        self._gather = None

    def copermute(self, lam: int) -> int:
        """Run a whole gather outside a decoder; returns the cycles spent."""
        self.start_gather(lam)
        if self._gather is None:
            return 0
        cycles = len(self._gather[4])
        for c in range(cycles):
            self.trace.tick()
            self.gather_cycle(c)
        self.finish_gather()
        return cycles

    def read_all(self) -> np.ndarray:
        parts = [self.sram[self.ptr[:, g], s:s + ln] for g, (s, ln) in enumerate(self.groups)]
        parts.append(self.head[:, : self.head_len])
        return np.concatenate(parts, axis=1)

    def read_path(self, l: int) -> np.ndarray:
        if not 0 <= l < self.L:
            raise IndexError(f"path {l} outside [0, {self.L})")
        return self.read_all()[l]

"""Merged memory: the folded partial-sum network doubling as path memory."""

from __future__ import annotations

from collections import deque
from typing import NamedTuple

import numpy as np

from ..bits import ctz
from ..errors import ProtocolError, UnsupportedModeError
from ..polar import polar_transform
from ..trace import ScheduleTrace
from .psn import FoldedPsn
from .recovery import encode_words, finish_recovery
from .schedules import recovery_schedule


class MergedMemory:
    """Decoded bits recovered in place from an ``N``-bit folded network.

    The stage-``lam`` group ``[N - 2**(lam+1), N - 2**lam)`` dies once the
    rightmost stage-``lam`` G-node has consumed it. ``mark_dead`` queues its
    recovery; ``recovery_cycle`` performs one word XOR per call in every
    bank. Recovered words hold ``u_word . F^{(x)p}`` and pass through the
    ``P``-bit encoder on read-out.
    """

    kind = "merged"

    def __init__(self, psn: FoldedPsn):
        if not psn.merged:
            raise UnsupportedModeError("decoded-bit recovery needs an N-bit (merged) network")
        self.psn = psn
        self.trace: ScheduleTrace = psn.trace
        self.queue: deque[int] = deque()
        self.progress: dict[int, int] = {}
        self.recovery_cycles = 0
        self._schedules = {lam: recovery_schedule(lam, psn.p) for lam in range(psn.p, psn.n)}
        self._memo: dict[tuple[int, int, int], np.ndarray] = {}

    @classmethod
    def build(cls, n: int, p: int, L: int, trace: ScheduleTrace | None = None) -> "MergedMemory":
        return cls(FoldedPsn(n, p, L, merged=True, trace=trace))

    @property
    def busy(self) -> bool:
        return bool(self.queue)

    def group_span(self, lam: int) -> tuple[int, int]:
        size = 1 << lam
        return self.psn.N - 2 * size, size

    def mark_dead(self, lam: int) -> None:
        """Queue recovery of the stage-``lam`` group after its last use."""
        psn = self.psn
        start, size = self.group_span(lam)
        if not psn.p <= lam < psn.n:
            raise ProtocolError(f"stage {lam} has no recoverable group")
        if lam in self.progress:
            raise ProtocolError(f"stage-{lam} group already released")
        if psn.flushed < start + size or psn._gen is not None:
            raise ProtocolError(f"stage-{lam} group is still in use")
        self.progress[lam] = 0
        if self._schedules[lam]:
            self.queue.append(lam)

    def recovery_cycle(self) -> bool:
        """Spend one idle SRAM cycle on the oldest pending group."""
        if not self.queue:
            return False
        lam = self.queue[0]
        schedule = self._schedules[lam]
        step = schedule[self.progress[lam]]
        start, size = self.group_span(lam)
        P = self.psn.P
        words = self.psn.sram[:, start:start + size].reshape(self.psn.L, size // P, P)
        words[:, step.a, :] ^= words[:, step.b, :]
        base = start // P
        self.trace.log("psn.sram", "recover", f"{base + step.a}|{base + step.b}", base + step.a)
        self.progress[lam] += 1
        self.recovery_cycles += 1
        if self.progress[lam] == len(schedule):
            self.queue.popleft()
        return True

    def recover_group(self, lam: int) -> tuple[np.ndarray, int, ScheduleTrace]:
        """Finish recovering the stage-``lam`` group, one trace cycle per XOR.

        Earlier queued groups are finished first. Returns the per-path bits,
        the group's total XOR-cycle count and the trace.
        """
        if lam not in self.progress:
            raise ProtocolError(f"stage-{lam} group is not dead yet")
        while self.progress[lam] < len(self._schedules[lam]):
            self.trace.tick()
            self.recovery_cycle()
        return self.group_bits(lam), len(self._schedules[lam]), self.trace

    def _decoded_block(self, mu: int, start: int) -> np.ndarray:
        done = self.progress.get(mu, 0) if start == self.group_span(mu)[0] else 0
        # the decoded value is invariant under recovery; re-derive it from the
        # SRAM before, one cycle into, and after the recovery
        total = len(self._schedules[mu])
        key = (mu, start, min(done, 1), done == total)
        if key not in self._memo:
            P, size = self.psn.P, 1 << mu
            words = self.psn.sram[:, start:start + size].reshape(self.psn.L, size // P, P).copy()
            self._memo[key] = encode_words(finish_recovery(words, done)).reshape(self.psn.L, size)
        return self._memo[key]

    def group_bits(self, lam: int) -> np.ndarray:
        start, _ = self.group_span(lam)
        return self._decoded_block(lam, start)[self.psn.ptr[:, lam]]

    def read_all(self) -> np.ndarray:
        """Decoded prefix of every path, without disturbing the hardware state."""
        psn = self.psn
        parts = [self._decoded_block(mu, start)[psn.ptr[:, mu]] for mu, start in psn.stored_blocks()]
        q, offset = psn.reg_len, 0
        for nu in range(psn.p, -1, -1):
            size = 1 << nu
            if q & size:
                parts.append(polar_transform(psn.reg[:, offset:offset + size].copy()))
                offset += size
        if not parts:
            return np.zeros((psn.L, 0), dtype=np.uint8)
        return np.concatenate(parts, axis=1)

    def read_path(self, l: int) -> np.ndarray:
        if not 0 <= l < self.psn.L:
            raise IndexError(f"path {l} outside [0, {self.psn.L})")
        return self.read_all()[l]

    def update(self, perm, new_bits) -> None:
        """No separate storage: the network's own update covers the merged memory."""

    def start_gather(self, lam: int) -> None:
        pass

    def gather_cycle(self, c: int) -> None:
        pass

    def finish_gather(self) -> None:
        pass


class GroupPlacement(NamedTuple):
    stage: int
    size: int
    latency: int
    budget: int
    hidden: int
    stall: int


class MergedSchedule(NamedTuple):
    groups: list[GroupPlacement]
    stall_cycles: int

    @property
    def recovery_cycles(self) -> int:
        return sum(g.latency for g in self.groups)


def merged_schedule(n: int, p: int) -> MergedSchedule:
    """Place every group's recovery into the idle SRAM cycles of the decode.

    Walks the node sequence of the second half of the scheduling tree
    (no group dies earlier). Nodes below stage ``p`` leave the SRAM idle and
    each such cycle advances the pending recovery. When the next group dies
    while a recovery is unfinished, the decoder stalls for the remainder.
    """
    N, P = 1 << n, 1 << p
    groups: list[GroupPlacement] = []
    pending = None  # [stage, latency, remaining, window_idle]

    def close(entry):
        lam, latency, remaining, idle = entry
        groups.append(GroupPlacement(lam, 1 << lam, latency, idle, latency - remaining, remaining))

    def idle(k):
        if pending is not None:
            pending[3] += k
            pending[2] -= min(k, pending[2])

    for i in range(N // 2, N):
        t = ctz(i)
        if t < p:
            idle(1)
        elif i == N - (1 << t):
            if pending is not None:
                close(pending)
            latency = len(recovery_schedule(t, p))
            pending = [t, latency, latency, 0]
        idle(min(t, p))
    if pending is not None:
        close(pending)
    return MergedSchedule(groups, sum(g.stall for g in groups))

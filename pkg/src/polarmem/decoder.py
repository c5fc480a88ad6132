"""CRC-aided list successive-cancellation decoding over pluggable path memories."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .bits import ctz
from .crc import crc_check
from .memory import FoldedPathMemory, FoldedPsn, MergedMemory, TraditionalPathMemory
from .polar import PolarCodeConfig
from .trace import ScheduleTrace

MEMORY_KINDS = ("traditional", "folded", "merged")


def f_function(a, b):
    """Min-sum check-node update."""
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_function(a, b, s):
    """Variable-node update given the partial-sum bit ``s``."""
    return b + (1 - 2 * np.asarray(s, dtype=np.float64)) * a


def path_metric_update(metric, llr, decision):
    """Add ``|llr|`` when the decision disagrees with the LLR sign (``llr >= 0`` means 0)."""
    hard = np.where(np.asarray(llr) >= 0, 0, 1)
    return np.where(hard == decision, metric, metric + np.abs(llr))


class ListOutcome(NamedTuple):
    """Result of one list-management step.

    ``perm[l]`` names the parent path copied into slot ``l``; ``bits[l]`` is
    the bit appended to it.
    """

    perm: np.ndarray
    bits: np.ndarray
    metrics: np.ndarray
    active: int


def expand_and_prune(metrics, active: int, leaf_llrs, is_frozen: bool) -> ListOutcome:
    """Expand the ``active`` paths by one bit and keep the best ``L``.

    Candidates are ordered by (metric, parent slot, decision); survivors are
    packed into slots ``0..k-1`` in that order. Slots beyond the survivors
    stay inactive and map to themselves.
    """
    metrics = np.asarray(metrics, dtype=np.float64)
    L = metrics.size
    perm = np.arange(L)
    bits = np.zeros(L, dtype=np.uint8)
    new = metrics.copy()
    pm = metrics[:active].tolist()
    llr = np.asarray(leaf_llrs, dtype=np.float64)[:active].tolist()
    # per path: metric after deciding 0 and after deciding 1
    m0 = [m if x >= 0 else m + abs(x) for m, x in zip(pm, llr)]
    m1 = [m + abs(x) if x >= 0 else m for m, x in zip(pm, llr)]
    if is_frozen:
        new[:active] = m0
        return ListOutcome(perm, bits, new, active)
    candidates = sorted([(m0[l], l, 0) for l in range(active)] + [(m1[l], l, 1) for l in range(active)])
    keep = min(L, 2 * active)
    for slot, (metric, parent, decision) in enumerate(candidates[:keep]):
        perm[slot] = parent
        bits[slot] = decision
        new[slot] = metric
    return ListOutcome(perm, bits, new, keep)


class DecodeResult(NamedTuple):
    info_bits: np.ndarray
    crc_pass: bool
    trace: ScheduleTrace


def build_memory(kind: str, config: PolarCodeConfig, trace: ScheduleTrace, psn: FoldedPsn | None = None):
    if kind == "traditional":
        return TraditionalPathMemory(config.N, config.L, trace)
    if kind == "folded":
        return FoldedPathMemory(config.n, config.p, config.L, trace)
    if kind == "merged":
        if psn is None or not psn.merged:
            raise ValueError("merged memory must share the decoder's merged network")
        return MergedMemory(psn)
    raise ValueError(f"unknown memory kind {kind!r}; choose from {MEMORY_KINDS}")


class ListDecoder:
    """One list decoder instance: LLR datapath, folded PSN and path memories.

    ``memory_kind`` selects the memory whose contents produce the output.
    ``shadow_kinds`` attaches further models that are driven in lockstep
    (for cross-checking); they never influence decoding.
    """

    def __init__(
        self,
        config: PolarCodeConfig,
        memory_kind: str = "traditional",
        shadow_kinds: tuple[str, ...] = (),
        record: bool = True,
        record_data: bool = False,
    ):
        if memory_kind not in MEMORY_KINDS:
            raise ValueError(f"unknown memory kind {memory_kind!r}; choose from {MEMORY_KINDS}")
        self.config = config
        self.memory_kind = memory_kind
        self.shadow_kinds = tuple(shadow_kinds)
        self.record = record
        self.record_data = record_data
        self._frozen = config.frozen_mask.tolist()
        self._info = config.info_positions

    def _reset(self):
        cfg = self.config
        self.trace = ScheduleTrace(crossbar_width=cfg.P, record=self.record, record_data=self.record_data)
        merged = self.memory_kind == "merged" or "merged" in self.shadow_kinds
        self.psn = FoldedPsn(cfg.n, cfg.p, cfg.L, merged=merged, trace=self.trace)
        self.memories = {}
        for kind in (self.memory_kind,) + self.shadow_kinds:
            self.memories[kind] = build_memory(kind, cfg, self.trace, self.psn)
        self.memory = self.memories[self.memory_kind]
        self.recovery = self.memories.get("merged")
        self.metrics = np.zeros(cfg.L)
        self.active = 1
        self.alpha = [np.zeros((cfg.L, 1 << lam)) for lam in range(cfg.n)]

    def _idle_cycle(self):
        if self.recovery is not None:
            self.recovery.recovery_cycle()

    def _f_node(self, lam: int):
        cfg = self.config
        cycles = 1 << max(0, lam - cfg.p)
        for _ in range(cycles):
            self.trace.tick()
            self.trace.log("pe", "F", lam)
            if lam < cfg.p:
                self._idle_cycle()
        parent = self.alpha[lam + 1] if lam + 1 < cfg.n else self.channel
        half = 1 << lam
        self.alpha[lam] = f_function(parent[:, :half], parent[:, half:])

    def _g_node(self, lam: int, i: int):
        cfg = self.config
        half = 1 << lam
        if lam < cfg.p:
            self.trace.tick()
            self.trace.log("pe", "G", lam)
            self._idle_cycle()
            sums = self.psn.register_sums(lam)
        else:
            cycles = self.psn.start_generation(lam)
            for mem in self.memories.values():
                mem.start_gather(lam)
            for c in range(cycles):
                self.trace.tick()
                self.trace.log("pe", "G", lam)
                self.psn.generation_cycle(c)
                for mem in self.memories.values():
                    mem.gather_cycle(c)
            sums = self.psn.finish_generation()
            for mem in self.memories.values():
                mem.finish_gather()
            if self.recovery is not None and i == cfg.N - half:
                while self.recovery.busy:
                    self.trace.tick()
                    self.trace.log("ctl", "stall", lam)
                    self.recovery.recovery_cycle()
                self.recovery.mark_dead(lam)
        parent = self.alpha[lam + 1] if lam + 1 < cfg.n else self.channel
        self.alpha[lam] = g_function(parent[:, :half], parent[:, half:], sums)

    def _leaf(self, i: int):
        outcome = expand_and_prune(self.metrics, self.active, self.alpha[0][:, 0], self._frozen[i])
        perm = outcome.perm
        if self.trace.record:
            self.trace.log("lm", "frozen" if self._frozen[i] else "prune", i, " ".join(map(str, perm)))
        if not self._frozen[i]:
            self.alpha = [a[perm] for a in self.alpha]
        self.metrics, self.active = outcome.metrics, outcome.active
        self.psn.permute(perm)
        self.psn.push(outcome.bits)
        for mem in self.memories.values():
            mem.update(perm, outcome.bits)
        return outcome

    def decode(self, channel_llrs, on_step: Callable | None = None) -> DecodeResult:
        """Decode one frame.

        ``on_step(decoder, i, outcome)`` runs after bit ``i`` is appended to
        every path.
        """
        cfg = self.config
        llrs = np.asarray(channel_llrs, dtype=np.float64)
        if llrs.shape != (cfg.N,):
            raise ValueError(f"expected {cfg.N} channel LLRs, got shape {llrs.shape}")
        self._reset()
        self.channel = np.broadcast_to(llrs, (cfg.L, cfg.N))
        for i in range(cfg.N):
            if i == 0:
                top = cfg.n - 1
            else:
                t = ctz(i)
                self._g_node(t, i)
                top = t - 1
            for lam in range(top, -1, -1):
                self._f_node(lam)
            outcome = self._leaf(i)
            if on_step is not None:
                on_step(self, i, outcome)
        if self.recovery is not None:
            while self.recovery.busy:
                self.trace.tick()
                self.trace.log("ctl", "stall", -1)
                self.recovery.recovery_cycle()
        bits, ok = self.select(self.memory.read_all())
        return DecodeResult(bits, ok, self.trace)

    def ranking(self) -> list[int]:
        """Active slots from best to worst metric (ties by slot)."""
        return sorted(range(self.active), key=lambda l: (self.metrics[l], l))

    def select(self, vectors: np.ndarray) -> tuple[np.ndarray, bool]:
        """Pick the best path passing the CRC; fall back to the best path."""
        cfg = self.config
        order = self.ranking()
        for l in order:
            word = vectors[l, self._info]
            if cfg.crc is None or crc_check(word, cfg.crc):
                return word[: cfg.message_len].copy(), True
        return vectors[order[0], self._info][: cfg.message_len].copy(), False


def decode_frame(channel_llrs, config: PolarCodeConfig, memory_kind: str = "traditional", record: bool = True) -> DecodeResult:
    return ListDecoder(config, memory_kind, record=record).decode(channel_llrs)

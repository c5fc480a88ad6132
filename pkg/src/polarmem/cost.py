"""Closed-form cycle counts, recovery bounds and memory-size accounting."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .bits import is_power_of_two, log2_exact
from .memory.merged import GroupPlacement, merged_schedule


def node_cycles(lam: int, p: int) -> int:
    """Cycles for one stage-``lam`` node when ``2**p`` functions run per cycle."""
    if lam < 0:
        raise ValueError("stage index must be nonnegative")
    return 1 << max(0, lam - p)


def _check_group(Lambda: int, P: int) -> None:
    if not (is_power_of_two(Lambda) and is_power_of_two(P)):
        raise ValueError(f"Lambda={Lambda} and P={P} must be powers of two")
    if Lambda < P:
        raise ValueError(f"Lambda={Lambda} is smaller than the word width P={P}")


def recovery_latency(Lambda: int, P: int) -> int:
    """XOR cycles to recover ``Lambda`` decoded bits: ``(Lambda/2P) * log2(Lambda/P)``."""
    _check_group(Lambda, P)
    words = Lambda // P
    return (words // 2) * log2_exact(words)


def idle_budget(Lambda: int, P: int) -> int:
    """Cycles spent below stage ``p`` before the next (half-size) group dies."""
    _check_group(Lambda, P)
    return Lambda - Lambda // P


class BoundCheck(NamedTuple):
    verdict: str  # "fits_strictly", "fits_exactly" or "stalls"
    stall_cycles: int
    latency: int
    budget: int
    strict_predicate: bool  # Lambda < P * 2**(2P - 2)

    def __str__(self) -> str:
        return f"stalls({self.stall_cycles})" if self.verdict == "stalls" else self.verdict


def bound_check(Lambda: int, P: int) -> BoundCheck:
    latency, budget = recovery_latency(Lambda, P), idle_budget(Lambda, P)
    strict = Lambda < P * 2 ** (2 * P - 2)
    if latency > budget:
        return BoundCheck("stalls", latency - budget, latency, budget, strict)
    verdict = "fits_exactly" if latency == budget else "fits_strictly"
    return BoundCheck(verdict, 0, latency, budget, strict)


@dataclass(frozen=True)
class ArchitectureCost:
    name: str
    sram_port_width: int
    sram_size: int
    register_bits: int
    crossbar_lane_width: int
    pointer_count: int

    def proxy_cost(self, L: int) -> int:
        """Area stand-in: crossbar lanes scale with ``L**2``, registers linearly."""
        return self.crossbar_lane_width * L * L + self.register_bits


@dataclass(frozen=True)
class MemoryCostReport:
    """Per-architecture storage for ``L`` paths.

    ``sram_size`` is per path (one SRAM per path); ``register_bits`` counts
    all paths; ``pointer_count`` is per path.
    """

    N: int
    P: int
    L: int
    rows: tuple[ArchitectureCost, ...]

    def __getitem__(self, name: str) -> ArchitectureCost:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "P": self.P,
            "L": self.L,
            "architectures": [dict(asdict(r), proxy_cost=r.proxy_cost(self.L)) for r in self.rows],
        }

    def to_text(self) -> str:
        head = ("architecture", "port", "sram", "registers", "xbar lane", "pointers", "proxy cost")
        body = [
            (r.name, r.sram_port_width, r.sram_size, r.register_bits, r.crossbar_lane_width, r.pointer_count, r.proxy_cost(self.L))
            for r in self.rows
        ]
        return _columns(head, body)


def memory_report(N: int, P: int, L: int) -> MemoryCostReport:
    n, p = log2_exact(N), log2_exact(P)
    log2_exact(L)
    if not 1 <= p < n:
        raise ValueError(f"need 2 <= P <= N/2, got N={N}, P={P}")
    rows = (
        ArchitectureCost("folded_psn", 2 * P, N // 2, L * P, P, n - p + 1),
        ArchitectureCost("traditional_path_memory", 0, 0, L * N, N, 0),
        ArchitectureCost("folded_path_memory", P, N, L * P, P, n - p + 1),
        ArchitectureCost("merged_memory", 2 * P, N, L * P, P, n - p + 1),
    )
    return MemoryCostReport(N, P, L, rows)


@dataclass(frozen=True)
class CycleReport:
    n: int
    p: int
    with_recovery: bool
    baseline_cycles: int
    total_decode_cycles: int
    recovery_cycles_hidden: int
    stall_cycles: int
    groups: tuple[GroupPlacement, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["groups"] = [g._asdict() for g in self.groups]
        return d

    def to_text(self) -> str:
        lines = [
            f"baseline cycles       {self.baseline_cycles}",
            f"total decode cycles   {self.total_decode_cycles}",
            f"recovery hidden       {self.recovery_cycles_hidden}",
            f"stall cycles          {self.stall_cycles}",
        ]
        if self.groups:
            head = ("group", "stage", "latency", "budget", "hidden", "stall")
            body = [(g.size, g.stage, g.latency, g.budget, g.hidden, g.stall) for g in self.groups]
            lines.append(_columns(head, body).rstrip("\n"))
        return "\n".join(lines) + "\n"


def baseline_cycles(n: int, p: int) -> int:
    """Node cycles of a full traversal: ``2**(n-lam)`` nodes at each stage ``lam``."""
    return sum((1 << (n - lam)) * node_cycles(lam, p) for lam in range(n))


class DecoderShape(NamedTuple):
    """Minimal stand-in for a code configuration: only ``n`` and ``p`` matter."""

    n: int
    p: int


def total_decode_cycles(config, with_recovery: bool = False) -> CycleReport:
    """Cycle total for a configuration (anything with ``n`` and ``p`` attributes)."""
    n, p = config.n, config.p
    base = baseline_cycles(n, p)
    if not with_recovery:
        return CycleReport(n, p, False, base, base, 0, 0)
    sched = merged_schedule(n, p)
    hidden = sum(g.hidden for g in sched.groups)
    return CycleReport(n, p, True, base, base + sched.stall_cycles, hidden, sched.stall_cycles, tuple(sched.groups))


def _columns(head, body) -> str:
    rows = [tuple(map(str, head))] + [tuple(map(str, r)) for r in body]
    widths = [max(len(r[k]) for r in rows) for k in range(len(head))]
    return "\n".join("  ".join(v.rjust(w) if k else v.ljust(w) for k, (v, w) in enumerate(zip(r, widths))) for r in rows) + "\n"

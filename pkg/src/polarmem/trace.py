"""Per-cycle event log shared by the decoder and the memory models."""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .errors import CrossbarViolation, ProtocolError


class TraceEvent(NamedTuple):
    cycle: int
    unit: str
    op: str
    addr: str
    data: str


@dataclass
class ScheduleTrace:
    """Cycle-indexed record of node computations, memory traffic and stalls.

    ``crossbar_width`` caps the bits a crossbar may move per path in one
    cycle; each crossbar may serve only one kind of use per cycle.
    ``record=False`` keeps the counters and checks but drops the event list;
    such a trace also accepts events before the first ``tick`` (models used
    outside a decoder).
    """

    crossbar_width: int | None = None
    record: bool = True
    record_data: bool = False
    cycle: int = -1
    events: list = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)
    _xbar: dict = field(default_factory=dict, repr=False)

    @property
    def total_cycles(self) -> int:
        return self.cycle + 1

    @property
    def stall_cycles(self) -> int:
        return self.counts[("ctl", "stall")]

    def tick(self) -> int:
        self.cycle += 1
        self._xbar.clear()
        return self.cycle

    def log(self, unit: str, op: str, addr="", data="") -> None:
        if self.cycle < 0 and self.record:
            raise ProtocolError("event logged before the first clock cycle")
        self.counts[(unit, op)] += 1
        if self.record:
            self.events.append(TraceEvent(self.cycle, unit, op, str(addr), str(data)))

    def crossbar(self, unit: str, use: str, bits_per_path: int, limited: bool = True) -> None:
        if limited and self.crossbar_width is not None and bits_per_path > self.crossbar_width:
            raise CrossbarViolation(
                f"cycle {self.cycle}: {unit} moves {bits_per_path} bits per path, "
                f"lane width is {self.crossbar_width}"
            )
        held = self._xbar.setdefault(unit, use)
        if held != use:
            raise CrossbarViolation(f"cycle {self.cycle}: {unit} requested for {held!r} and {use!r}")
        self.log(unit, use, "", bits_per_path)

    def select(self, unit: str | None = None, op: str | None = None) -> list[TraceEvent]:
        return [e for e in self.events if (unit is None or e.unit == unit) and (op is None or e.op == op)]

    def to_text(self) -> str:
        out = io.StringIO()
        out.write("cycle,unit,op,addr,data\n")
        for e in self.events:
            out.write(f"{e.cycle},{e.unit},{e.op},{e.addr},{e.data}\n")
        return out.getvalue()

    @staticmethod
    def parse(lines: Iterable[str]) -> list[TraceEvent]:
        events = []
        for k, line in enumerate(lines):
            line = line.rstrip("\n")
            if not line or (k == 0 and line.startswith("cycle,")):
                continue
            cycle, unit, op, addr, data = line.split(",", 4)
            events.append(TraceEvent(int(cycle), unit, op, addr, data))
        return events


def check_dead_group_safety(events: Iterable[TraceEvent]) -> None:
    """Fail if a word read by recovery is later rewritten by the partial-sum network."""
    recovered: dict[int, int] = {}
    for e in events:
        if e.unit == "psn.sram" and e.op == "recover":
            for word in (int(w) for w in e.addr.split("|")):
                recovered.setdefault(word, e.cycle)
        elif e.unit == "psn.sram" and e.op in ("write", "flush"):
            word = int(e.addr)
            if word in recovered and e.cycle >= recovered[word]:
                raise ProtocolError(
                    f"cycle {e.cycle}: word {word} rewritten after recovery read it at cycle {recovered[word]}"
                )

"""Word-level schedules of the folded partial-sum network.

Both schedules work on ``W = Lambda / P`` words of ``P`` bits, indexed
relative to the start of the node (or group) being processed.
"""

from __future__ import annotations

from typing import NamedTuple


class PsnCycle(NamedTuple):
    """One cycle of partial-sum generation: ``out = in0 ^ in1``."""

    cycle: int
    out_word: int
    in0_word: int
    in0_stage: int
    in0_from_register: bool
    in1_word: int | None


class RecoveryCycle(NamedTuple):
    """One butterfly: word ``a`` becomes ``a ^ b``; word ``b`` passes through."""

    cycle: int
    a: int
    b: int
    stage_in: int


def component_stages(lam: int, p: int) -> list[int]:
    """Stage of the stored component covering each word of a stage-``lam`` node."""
    words = 1 << (lam - p)
    stages = []
    for mu in range(lam - 1, p - 1, -1):
        stages.extend([mu] * (1 << (mu - p)))
    stages.append(p)
    assert len(stages) == words
    return stages


def psn_schedule(lam: int, p: int) -> list[PsnCycle]:
    """Generate stage-``lam`` partial-sums from stored lower-stage words.

    Words are produced from the highest index down. The top word comes
    straight from the register bank; every other word XORs its stored
    component with an output word already produced this pass.
    """
    if lam < p:
        raise ValueError(f"stage {lam} is below the word stage {p}")
    stages = component_stages(lam, p)
    words = len(stages)
    cycles = [PsnCycle(0, words - 1, words - 1, p, True, None)]
    for w in range(words - 2, -1, -1):
        mu = stages[w]
        cycles.append(PsnCycle(len(cycles), w, w, mu, False, w + (1 << (mu - p))))
    return cycles


def recovery_schedule(lam: int, p: int) -> list[RecoveryCycle]:
    """Inverse butterfly over the words of a stage-``lam`` group.

    Strides run from ``W/2`` down to 1 and words ascend within a stride, so
    the cycle count is ``(W/2) * log2(W)``.
    """
    if lam < p:
        raise ValueError(f"group of 2**{lam} bits is smaller than a {1 << p}-bit word")
    words = 1 << (lam - p)
    cycles = []
    stride, stage = words // 2, lam
    while stride >= 1:
        for a in range(words):
            if not a & stride:
                cycles.append(RecoveryCycle(len(cycles), a, a + stride, stage))
        stride //= 2
        stage -= 1
    return cycles


def _word_symbols(word: int | None, stage: int, P: int, descending: bool) -> tuple[str, ...]:
    if word is None:
        return ("-",) * P
    positions = range(word * P, (word + 1) * P)
    if descending:
        positions = reversed(positions)
    return tuple(f"s{k}^{stage}" for k in positions)


def psn_table(lam: int, p: int) -> dict[str, list[tuple[str, ...]]]:
    """Symbolic (Input 0, Input 1, Output) cells, higher bit index first."""
    P = 1 << p
    rows = {"Input 0": [], "Input 1": [], "Output": []}
    for c in psn_schedule(lam, p):
        rows["Input 0"].append(_word_symbols(c.in0_word, c.in0_stage, P, True))
        rows["Input 1"].append(_word_symbols(c.in1_word, lam, P, True))
        rows["Output"].append(_word_symbols(c.out_word, lam, P, True))
    return rows


def recovery_table(lam: int, p: int) -> dict[str, list[tuple[str, ...]]]:
    """Symbolic (Input 0, Input 1, XOR output, pass-through output) cells."""
    P = 1 << p
    rows = {"Input 0": [], "Input 1": [], "xor": [], "split": []}
    for c in recovery_schedule(lam, p):
        rows["Input 0"].append(_word_symbols(c.a, c.stage_in, P, False))
        rows["Input 1"].append(_word_symbols(c.b, c.stage_in, P, False))
        rows["xor"].append(_word_symbols(c.a, c.stage_in - 1, P, False))
        rows["split"].append(_word_symbols(c.b, c.stage_in - 1, P, False))
    return rows


def format_table(rows: dict[str, list[tuple[str, ...]]], csv: bool = False) -> str:
    """Render a schedule table with one column per bit, grouped by cycle."""
    ncycles = len(next(iter(rows.values())))
    if csv:
        lines = ["row," + ",".join(f"cycle{c}" for c in range(ncycles))]
        for name, cells in rows.items():
            lines.append(name + "," + ",".join(" ".join(cell) for cell in cells))
        return "\n".join(lines) + "\n"
    header = ["Cycle"] + [str(c) for c in range(ncycles)]
    body = [[name] + [" ".join(cell) for cell in cells] for name, cells in rows.items()]
    widths = [max(len(r[k]) for r in [header] + body) for k in range(len(header))]
    fmt = lambda r: " | ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip()
    return "\n".join([fmt(header), "-+-".join("-" * w for w in widths)] + [fmt(r) for r in body]) + "\n"

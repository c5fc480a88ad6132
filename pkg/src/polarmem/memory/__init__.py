"""Behavioral models of the path-memory architectures and the folded PSN."""

from __future__ import annotations

import numpy as np

from ..errors import UnsupportedModeError
from .folded import FoldedPathMemory
from .merged import GroupPlacement, MergedMemory, MergedSchedule, merged_schedule
from .psn import FoldedPsn
from .recovery import finish_recovery, recover_bits, run_recovery
from .schedules import psn_schedule, psn_table, recovery_schedule, recovery_table
from .traditional import TraditionalPathMemory


def traditional_update(mem: TraditionalPathMemory, perm, new_bits) -> TraditionalPathMemory:
    mem.update(perm, new_bits)
    return mem


def folded_update(mem: FoldedPathMemory, perm, new_bits) -> FoldedPathMemory:
    mem.update(perm, new_bits)
    return mem


def copermute_decoded_bits(mem: FoldedPathMemory, lam: int):
    """Gather the stage-``lam`` node's words into each path's own SRAM."""
    mem.copermute(lam)
    return mem.block_index_table


def read_path(mem, l: int) -> np.ndarray:
    return mem.read_path(l)


def psn_generate(psn: FoldedPsn, lam: int):
    """Generate the stage-``lam`` partial-sums ending at the current bit.

    Returns ``(words, trace)`` where ``words`` has shape ``(L, 2**lam / P, P)``.
    """
    sums = psn.generate(lam)
    return sums.reshape(psn.L, -1, psn.P), psn.trace


def recover_group(mem: MergedMemory, lam: int):
    if not isinstance(mem, MergedMemory):
        raise UnsupportedModeError("recovery exists only for the merged memory")
    return mem.recover_group(lam)


__all__ = [
    "FoldedPathMemory",
    "FoldedPsn",
    "GroupPlacement",
    "MergedMemory",
    "MergedSchedule",
    "TraditionalPathMemory",
    "copermute_decoded_bits",
    "finish_recovery",
    "folded_update",
    "merged_schedule",
    "psn_generate",
    "psn_schedule",
    "psn_table",
    "read_path",
    "recover_bits",
    "recover_group",
    "recovery_schedule",
    "recovery_table",
    "run_recovery",
    "traditional_update",
]

"""CRC-aided list SC decoding of polar codes with behavioral path-memory models."""

from .channel import ChannelConfig, bpsk_awgn, fer_montecarlo
from .cost import bound_check, memory_report, recovery_latency, total_decode_cycles
from .crc import CRC16_CCITT, CrcPolynomial, crc_attach, crc_check
from .decoder import (
    MEMORY_KINDS,
    DecodeResult,
    ListDecoder,
    decode_frame,
    expand_and_prune,
    f_function,
    g_function,
    path_metric_update,
)
from .polar import PolarCodeConfig, build_frozen_set, encode_message, kronecker_encode, partial_sums
from .trace import ScheduleTrace

__version__ = "0.1.0"

__all__ = [
    "CRC16_CCITT",
    "ChannelConfig",
    "bound_check",
    "bpsk_awgn",
    "fer_montecarlo",
    "memory_report",
    "recovery_latency",
    "total_decode_cycles",
    "CrcPolynomial",
    "DecodeResult",
    "ListDecoder",
    "MEMORY_KINDS",
    "PolarCodeConfig",
    "ScheduleTrace",
    "build_frozen_set",
    "crc_attach",
    "crc_check",
    "decode_frame",
    "encode_message",
    "expand_and_prune",
    "f_function",
    "g_function",
    "kronecker_encode",
    "partial_sums",
    "path_metric_update",
]

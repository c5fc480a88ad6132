import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from polarmem import (
    MEMORY_KINDS,
    ListDecoder,
    PolarCodeConfig,
    decode_frame,
    encode_message,
    expand_and_prune,
    f_function,
    g_function,
    path_metric_update,
)
from polarmem.channel import ChannelConfig, make_frame


# ---------------------------------------------------------------- node math

def test_f_examples():
    assert f_function(3.0, -2.0) == -2.0
    assert f_function(-1.5, -4.0) == 1.5
    assert f_function(0.0, 7.0) == 0.0


def test_g_examples():
    assert g_function(2.0, 1.0, 0) == 3.0
    assert g_function(2.0, 1.0, 1) == -1.0
    for x in (-3.0, 0.5):
        for s in (0, 1):
            assert g_function(0.0, x, s) == x


def test_path_metric_examples():
    assert path_metric_update(0.0, 3.0, 0) == 0.0
    assert path_metric_update(0.0, 3.0, 1) == 3.0
    assert path_metric_update(1.0, -2.5, 0) == 3.5
    # llr = 0 decides 0
    assert path_metric_update(2.0, 0.0, 0) == 2.0


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_f_magnitude_and_sign(a, b):
    out = f_function(a, b)
    assert abs(out) == min(abs(a), abs(b))
    if out != 0:
        assert np.sign(out) == np.sign(a) * np.sign(b)


# ----------------------------------------------------------- list management

def test_prune_single_path_follows_llr():
    out = expand_and_prune([0.0], 1, [2.0], False)
    assert out.perm.tolist() == [0] and out.bits.tolist() == [0] and out.metrics.tolist() == [0.0]


def test_prune_duplicates_best_parent():
    out = expand_and_prune([0.0, 5.0], 2, [1.0, 1.0], False)
    assert out.perm.tolist() == [0, 0]
    assert out.bits.tolist() == [0, 1]
    assert out.metrics.tolist() == [0.0, 1.0]


def test_prune_frozen_is_identity():
    out = expand_and_prune([0.0, 1.0, 2.0, 3.0], 4, [-1.0, 2.0, -0.5, 4.0], True)
    assert out.perm.tolist() == [0, 1, 2, 3]
    assert out.bits.tolist() == [0, 0, 0, 0]
    assert out.metrics.tolist() == [1.0, 1.0, 2.5, 3.0]


def test_prune_tie_break_order():
    # equal metrics everywhere: lower parent first, decision 0 before 1
    out = expand_and_prune([0.0, 0.0], 2, [0.0, 0.0], False)
    assert out.perm.tolist() == [0, 0] and out.bits.tolist() == [0, 1]


def test_prune_growth_phase_fills_slots():
    out = expand_and_prune([0.0] * 8, 1, [1.0] * 8, False)
    assert out.active == 2
    assert out.perm[:2].tolist() == [0, 0]
    out = expand_and_prune(out.metrics, 2, [1.0] * 8, False)
    assert out.active == 4


@settings(max_examples=200)
@given(
    st.integers(0, 3).map(lambda k: 1 << k),
    st.data(),
)
def test_prune_keeps_smallest_candidates(L, data):
    active = data.draw(st.integers(1, L))
    metrics = data.draw(st.lists(st.floats(0, 20), min_size=L, max_size=L))
    llrs = data.draw(st.lists(st.floats(-20, 20), min_size=L, max_size=L))
    out = expand_and_prune(metrics, active, llrs, False)
    cands = []
    for l in range(active):
        for d in (0, 1):
            cands.append((float(path_metric_update(metrics[l], llrs[l], d)), l, d))
    cands.sort()
    best = cands[: min(L, 2 * active)]
    assert out.active == len(best)
    assert sorted(out.metrics[: out.active].tolist()) == sorted(c[0] for c in best)
    assert [(out.metrics[s], out.perm[s], out.bits[s]) for s in range(out.active)] == best


# ------------------------------------------------------------------ decoding

def test_noiseless_decoding_all_kinds():
    cfg = PolarCodeConfig(7, 80, 2, 4)
    msg = np.random.default_rng(5).integers(0, 2, cfg.message_len, dtype=np.uint8)
    _, x = encode_message(msg, cfg)
    llrs = 100.0 * (1 - 2 * x.astype(float))
    for kind in MEMORY_KINDS:
        result = decode_frame(llrs, cfg, kind)
        assert result.crc_pass
        assert np.array_equal(result.info_bits, msg)


def test_llr_length_mismatch():
    cfg = PolarCodeConfig(4, 8, 1, 2, crc=None)
    with pytest.raises(ValueError):
        decode_frame(np.zeros(15), cfg)


def test_unknown_memory_kind():
    cfg = PolarCodeConfig(4, 8, 1, 2, crc=None)
    with pytest.raises(ValueError):
        ListDecoder(cfg, "registers")


@pytest.mark.parametrize("n,p", [(4, 1), (7, 2), (8, 3)])
def test_single_path_equals_sc_oracle(n, p):
    cfg = PolarCodeConfig(n, 1 << (n - 1), p, 1, crc=None)
    channel = ChannelConfig.for_code(cfg, 1.0, 11)
    decoder = ListDecoder(cfg, record=False)
    for index in range(60):
        _, llrs = make_frame(cfg, channel, index)
        u_hat = oracles.sc_decode(llrs, cfg.frozen_mask)
        assert np.array_equal(decoder.decode(llrs).info_bits, u_hat[cfg.info_positions])


def test_frozen_bits_decode_to_zero():
    cfg = PolarCodeConfig(6, 40, 2, 4)
    channel = ChannelConfig.for_code(cfg, 0.0, 3)
    decoder = ListDecoder(cfg, record=False)
    frozen = cfg.frozen_mask.astype(bool)
    for index in range(10):
        _, llrs = make_frame(cfg, channel, index)
        decoder.decode(llrs)
        assert not decoder.memory.read_all()[: decoder.active][:, frozen].any()


@pytest.mark.parametrize("n,p,L", [(5, 1, 2), (7, 2, 4), (8, 2, 8)])
def test_memory_kinds_give_identical_outputs(n, p, L):
    cfg = PolarCodeConfig(n, (1 << (n - 1)) + 8, p, L)
    channel = ChannelConfig.for_code(cfg, 1.0, 21)
    decoders = [ListDecoder(cfg, kind, record=False) for kind in MEMORY_KINDS]
    for index in range(20):
        _, llrs = make_frame(cfg, channel, index)
        outs = [d.decode(llrs) for d in decoders]
        for o in outs[1:]:
            assert np.array_equal(o.info_bits, outs[0].info_bits) and o.crc_pass == outs[0].crc_pass


def test_crc_selects_passing_path():
    # a list decoder with CRC must never report a failing word when a passing one survives
    cfg = PolarCodeConfig(7, 80, 2, 8)
    channel = ChannelConfig.for_code(cfg, 1.5, 2)
    decoder = ListDecoder(cfg, record=False)
    from polarmem.crc import crc_check

    for index in range(30):
        _, llrs = make_frame(cfg, channel, index)
        res = decoder.decode(llrs)
        vectors = decoder.memory.read_all()
        any_pass = any(crc_check(vectors[l, cfg.info_positions]) for l in range(decoder.active))
        assert res.crc_pass == any_pass


def test_trace_counts_node_cycles():
    cfg = PolarCodeConfig(5, 16, 1, 2, crc=None)
    res = decode_frame(np.ones(32), cfg, "folded")
    trace = res.trace
    pe = trace.select("pe")
    assert len(pe) == trace.total_cycles
    # every cycle runs exactly one node computation when nothing stalls
    assert sorted({e.cycle for e in pe}) == list(range(trace.total_cycles))

import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from polar_rm.codec import LLR_INF, encode, zero_llr_propagate
from polar_rm.domination import Posequence, iter_posequences, random_posequence
from polar_rm.exceptions import CapacityError
from polar_rm.ratematch import (
    PRESETS,
    RmConfig,
    allocate_channels,
    bhattacharyya,
    buffer_positions,
    default_posequence,
    deinterleave,
    dematch,
    interleave,
    rate_match,
    reliability_sequence,
    select_mode,
    select_mother_code,
    untransmitted,
    zero_capacity_set,
)

from oracles import below

UNIFIED16 = PRESETS["unified16"]


def test_select_mother_code_examples():
    assert select_mother_code(9, 4) == 8
    assert select_mother_code(9, 6) == 16
    assert select_mother_code(12, 3) == 16
    assert select_mother_code(16, 8) == 16
    with pytest.raises(ValueError):
        select_mother_code(4, 5)


def test_select_mode_examples():
    assert select_mode(20, 16, 4) == "repeat"
    assert select_mode(12, 16, 4) == "puncture"
    assert select_mode(12, 16, 8) == "shorten"
    assert select_mode(12, 16, 8, Fraction(3, 4)) == "puncture"


def test_interleave_examples():
    x = np.arange(16)
    assert np.array_equal(interleave(x, Posequence(4, tuple(range(16)))), x)
    assert interleave(x, UNIFIED16)[4] == 8
    y = np.random.default_rng(0).integers(0, 2, (3, 16))
    assert np.array_equal(deinterleave(interleave(y, UNIFIED16), UNIFIED16), y)


def test_rate_match_examples():
    x = np.arange(16)
    full = RmConfig.build(16, 8, posequence=UNIFIED16)
    assert np.array_equal(rate_match(x, full), interleave(x, UNIFIED16))
    punct = RmConfig.build(12, 4, "puncture", posequence=UNIFIED16)
    sent = rate_match(x, punct)
    assert set(range(16)) - set(sent.tolist()) == {11, 13, 14, 15}
    rep = RmConfig.build(20, 8, posequence=UNIFIED16)
    assert rep.mode == "repeat"
    c = rate_match(x, rep)
    assert np.array_equal(c, np.concatenate([interleave(x, UNIFIED16), interleave(x, UNIFIED16)[:4]]))


def test_zero_capacity_examples():
    assert zero_capacity_set(RmConfig.build(12, 4, "puncture", posequence=UNIFIED16)) == {0, 1, 2, 4}
    assert zero_capacity_set(RmConfig.build(9, 2, "shorten", posequence=UNIFIED16)) == {7, 10, 11, 12, 13, 14, 15}
    assert zero_capacity_set(RmConfig.build(20, 8, posequence=UNIFIED16)) == frozenset()


def test_buffer_is_mode_agnostic():
    for M in (5, 9, 12, 16):
        a = RmConfig.build(M, 2, "puncture", posequence=UNIFIED16)
        b = RmConfig.build(M, 2, "shorten", posequence=UNIFIED16)
        assert np.array_equal(buffer_positions(a), buffer_positions(b))
        assert untransmitted(a) == untransmitted(b)


def test_allocation_examples():
    cfg = RmConfig.build(16, 16, posequence=UNIFIED16)
    alloc = allocate_channels(cfg)
    assert alloc.info == frozenset(range(16)) and alloc.frozen == frozenset()
    cfg = RmConfig.build(12, 4, "puncture", posequence=UNIFIED16)
    alloc = allocate_channels(cfg)
    assert not alloc.info & {0, 1, 2, 4}
    assert alloc.info | alloc.frozen | alloc.zero_cap == frozenset(range(16))
    assert len(alloc.info) + len(alloc.frozen) + len(alloc.zero_cap) == 16
    assert allocate_channels(RmConfig.build(8, 1, N=8)).info == {7}


def test_allocation_keeps_reliability_order():
    rel = reliability_sequence(4)
    cfg = RmConfig.build(12, 5, "puncture", posequence=UNIFIED16)
    alloc = allocate_channels(cfg)
    remaining = [i for i in rel if i not in alloc.zero_cap]
    assert alloc.info == frozenset(remaining[-5:])


def test_capacity_errors_and_tight_flag():
    with pytest.raises(CapacityError):
        RmConfig.build(20, 17, N=16)
    with pytest.raises(ValueError):
        RmConfig.build(12, 13, "puncture", N=16)
    with pytest.raises(ValueError):
        RmConfig.build(12, 4, "repeat", N=16)
    cfg = RmConfig.build(12, 12, "puncture", N=16)
    assert allocate_channels(cfg).tight


def test_bhattacharyya_examples():
    assert bhattacharyya(1).tolist() == [0.75, 0.25]
    assert reliability_sequence(1) == (0, 1)
    # MSB first: z(1) = (2*.5-.25)**2, z(2) = 2*.25 - .25**2
    assert bhattacharyya(2).tolist() == [0.9375, 0.5625, 0.4375, 0.0625]
    assert reliability_sequence(2) == (0, 1, 2, 3)
    for n in range(1, 8):
        r = reliability_sequence(n)
        assert r[0] == 0 and r[-1] == (1 << n) - 1


@pytest.mark.parametrize("n", [2, 3])
def test_bhattacharyya_equals_exact_erasure_probability(n):
    # on a BEC the genie-aided SC erasure event is the structural zero event
    N = 1 << n
    eps = 0.3
    prob = np.zeros(N)
    for bits in itertools.product((0, 1), repeat=N):
        erased = {i for i in range(N) if bits[i]}
        w = eps ** len(erased) * (1 - eps) ** (N - len(erased))
        for i in zero_llr_propagate(erased, n).incapable:
            prob[i] += w
    assert np.allclose(bhattacharyya(n, eps), prob, atol=1e-12)


@pytest.mark.parametrize("n", range(1, 7))
def test_reliability_consistent_with_domination(n):
    pos = {v: k for k, v in enumerate(reliability_sequence(n))}
    N = 1 << n
    for i in range(N):
        for j in range(N):
            if i != j and below(i, j, n):
                assert pos[i] < pos[j]


def test_default_posequences():
    assert default_posequence(4) == UNIFIED16
    for n in range(1, 11):
        assert default_posequence(n).N == 1 << n


def test_dematch_examples():
    cfg = RmConfig.build(16, 8, posequence=UNIFIED16)
    r = np.arange(16, dtype=float) + 1
    assert np.array_equal(dematch(r, cfg), deinterleave(r, UNIFIED16))
    cfg = RmConfig.build(12, 4, "puncture", posequence=UNIFIED16)
    out = dematch(np.ones(12), cfg)
    assert set(np.flatnonzero(out == 0).tolist()) == {11, 13, 14, 15}
    cfg = RmConfig.build(18, 8, posequence=UNIFIED16)
    out = dematch(np.ones(18), cfg)
    assert out[0] == 2 and out[1] == 2 and out[2] == 1


def test_dematch_identity_channel_roundtrip():
    rng = np.random.default_rng(5)
    x = rng.integers(0, 2, 16)
    sym = 1.0 - 2.0 * x
    for M, mode in ((12, "puncture"), (12, "shorten"), (24, "repeat"), (16, "shorten")):
        cfg = RmConfig.build(M, 2, mode, posequence=UNIFIED16)
        out = dematch(rate_match(sym, cfg), cfg)
        tail = untransmitted(cfg)
        counts = np.bincount(buffer_positions(cfg), minlength=16)
        for j in range(16):
            if j in tail:
                assert out[j] == (LLR_INF if mode == "shorten" else 0.0)
            else:
                assert out[j] == counts[j] * sym[j]


def _puncture_incapable_through_buffer(p, n):
    N = 1 << n
    for M in range(1, N):
        cfg = RmConfig.build(M, 0, "puncture", posequence=p)
        dropped = set(range(N)) - set(buffer_positions(cfg).tolist())
        assert zero_llr_propagate(dropped, n).incapable == zero_capacity_set(cfg)


def test_end_to_end_zero_capacity_puncture():
    for n in (1, 2, 3):
        for order in iter_posequences(n):
            _puncture_incapable_through_buffer(Posequence(n, order), n)
    rng = np.random.default_rng(3)
    for _ in range(200):
        _puncture_incapable_through_buffer(random_posequence(4, rng), 4)


@pytest.mark.parametrize("n", [2, 3])
def test_shorten_mode_dropped_outputs_always_zero(n):
    N = 1 << n
    for order in iter_posequences(n):
        p = Posequence(n, order)
        for M in range(1, N):
            K = M // 2
            cfg = RmConfig.build(M, K, "shorten", posequence=p)
            alloc = allocate_channels(cfg)
            info = sorted(alloc.info)
            dropped = sorted(untransmitted(cfg))
            for bits in itertools.product((0, 1), repeat=K):
                u = np.zeros(N, dtype=np.uint8)
                u[info] = bits
                assert not encode(u)[dropped].any()


def test_config_json_roundtrip(tmp_path):
    cfg = RmConfig.build(12, 4, "auto", posequence=UNIFIED16, rate_threshold="1/2")
    again = RmConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg
    UNIFIED16.dump(tmp_path / "p.json")
    (tmp_path / "r.json").write_text(json.dumps({"n": 4, "order": list(reliability_sequence(4))}))
    obj = {"M": 12, "K": 4, "mode": "auto", "posequence": "p.json", "reliability": "r.json",
           "rate_threshold": "7/16", "design_erasure": 0.5}
    from_files = RmConfig.from_json(obj, tmp_path)
    assert from_files.posequence == UNIFIED16 and from_files.mode == "puncture"
    assert RmConfig.from_json({"M": 12, "K": 4, "posequence": "unified16"}).posequence == UNIFIED16

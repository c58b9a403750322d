"""Streaming fingerprints: hand-worked Horner folds, the direct
polynomial oracle, agreement counting, resource accounting, and the
self-delimiting tuple coding."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from streamfp.field import make_field
from streamfp.stream import (
    SPACE_CONSTANT,
    Fingerprint,
    begin,
    bits_from_bytes,
    coefficients,
    count_agreements,
    decode_fingerprint,
    decode_tuple,
    direct_eval,
    encode_fingerprint,
    encode_tuple,
    fingerprint,
    split_segments,
)

from conftest import FixedRng

GF4 = make_field(2)


def run_stream(x: str, ctx, a: int, chunks=None):
    state = begin(len(x), ctx, FixedRng(a))
    if chunks is None:
        state.feed(x)
    else:
        pos = 0
        for c in chunks:
            state.feed(x[pos:pos + c])
            pos += c
    return state.finish()


# ---------------------------------------------------------- frozen examples

def test_fold_1011_at_u():
    fp = run_stream("1011", GF4, 2)
    assert fp.v == 2  # d_x(u) = u
    assert fp.a == 2
    assert fp.n == 4


def test_fold_1011_at_zero():
    # d_x(0) is the constant coefficient w("11") = 1+u.
    assert run_stream("1011", GF4, 0).v == 3


def test_fold_all_zero_input_gives_a():
    for a in range(4):
        assert run_stream("00", GF4, a).v == a


def test_segment_counts():
    assert len(split_segments("1011", 2)) == 2
    assert split_segments("10110", 2) == ["10", "11", "0"]
    assert split_segments("1", 2) == ["1"]
    assert split_segments("1011011", 3) == ["101", "101", "1"]


def test_coefficients_orientation():
    # x="1011", k=2: prefix segment first, w("10")=1 then w("11")=3.
    assert coefficients(GF4, "1011") == [1, 3]


def test_direct_eval_frozen():
    assert direct_eval(GF4, "1011", 2) == 2
    for a in range(4):
        assert direct_eval(GF4, "00", a) == a


# ------------------------------------------------------------ feed/finish

def test_chunking_invariance():
    ctx = make_field(3)
    x = "110100101100110"
    whole = run_stream(x, ctx, 5)
    per_char = run_stream(x, ctx, 5, chunks=[1] * len(x))
    ragged = run_stream(x, ctx, 5, chunks=[4, 1, 7, 3])
    assert whole.v == per_char.v == ragged.v


def test_chunking_invariant_profile_counts():
    ctx = make_field(3)
    x = "110100101100110"  # n=15, r=5
    for chunks in (None, [1] * 15, [2, 5, 8]):
        state = begin(len(x), ctx, FixedRng(4))
        if chunks is None:
            state.feed(x)
        else:
            pos = 0
            for c in chunks:
                state.feed(x[pos:pos + c])
                pos += c
        fp = state.finish()
        assert state.profile.conversions == 5
        assert state.profile.field_ops <= 10
        assert state.profile.bits_read == 15
        assert fp.v == run_stream(x, ctx, 4).v


def test_overfeed_rejected():
    state = begin(4, GF4, FixedRng(1))
    state.feed("101")
    with pytest.raises(ValueError):
        state.feed("11")


def test_premature_finish_rejected():
    state = begin(4, GF4, FixedRng(1))
    state.feed("101")
    with pytest.raises(ValueError):
        state.finish()


def test_feed_after_finish_rejected():
    state = begin(2, GF4, FixedRng(1))
    state.feed("10")
    state.finish()
    with pytest.raises(ValueError):
        state.feed("1")
    with pytest.raises(ValueError):
        state.finish()


def test_feed_rejects_non_bits():
    state = begin(4, GF4, FixedRng(1))
    with pytest.raises(ValueError):
        state.feed("102")


def test_begin_rejects_zero_length():
    with pytest.raises(ValueError):
        begin(0, GF4, FixedRng(1))


def test_short_single_segment():
    # n < k is legal: r=1, d_x(z) = z + w(x).
    ctx = make_field(4)
    fp = run_stream("101", ctx, 9)
    assert fp.v == ctx.add(9, ctx.from_segment("101"))


# -------------------------------------------------- streaming == direct

def test_streaming_matches_direct_eval_random():
    rng = random.Random(1818)
    for _ in range(400):
        k = rng.choice((2, 3, 8))
        ctx = make_field(k)
        n = rng.randrange(1, 40)
        x = "".join(rng.choice("01") for _ in range(n))
        a = rng.getrandbits(k)
        assert run_stream(x, ctx, a).v == direct_eval(ctx, x, a)


def test_fingerprint_seed_reproducibility():
    fp1 = fingerprint(4, "1011", seed=909, f_of_n=4)
    fp2 = fingerprint(4, "1011", seed=909, f_of_n=4)
    assert fp1 == fp2
    assert fp1.k == 8  # sizing rule: (8*4*4).bit_length()


def test_fingerprint_length_mismatch():
    with pytest.raises(ValueError):
        fingerprint(4, "101", seed=1, f_of_n=4)


# ----------------------------------------------------------- injectivity

def test_coefficient_vectors_injective_exhaustive():
    for k in (2, 3):
        ctx = make_field(k)
        for n in range(1, 11):
            seen = {}
            for bits in range(1 << n):
                x = format(bits, f"0{n}b")
                key = tuple(coefficients(ctx, x))
                assert key not in seen, (k, n, x, seen[key])
                seen[key] = x


def test_agreement_bound_exhaustive_small():
    for k in (2, 3):
        ctx = make_field(k)
        for n in range(1, 7):
            r = -(-n // k)
            strings = [format(b, f"0{n}b") for b in range(1 << n)]
            for i, x in enumerate(strings):
                for y in strings[i + 1:]:
                    assert count_agreements(ctx, x, y) <= r - 1, (k, x, y)


def test_count_agreements_frozen():
    assert count_agreements(GF4, "0000", "1111") == 1
    assert count_agreements(GF4, "0110", "0110") == 4  # x = y agrees everywhere
    assert count_agreements(GF4, "00", "01") == 0


def test_count_agreements_validates():
    with pytest.raises(ValueError):
        count_agreements(GF4, "00", "000")


# -------------------------------------------------------------- profile

def test_profile_frozen_small_run():
    state = begin(4, GF4, FixedRng(2))
    state.feed("1011")
    state.finish()
    assert state.profile.conversions == 2
    assert state.profile.field_ops <= 4
    assert state.profile.bits_read == 4
    assert state.profile.random_bits == 2


def test_profile_space_bound_sweep():
    rng = random.Random(606)
    for _ in range(60):
        k = rng.randrange(1, 25)
        n = rng.randrange(1, 3000)
        ctx = make_field(k)
        x = "".join(rng.choice("01") for _ in range(n))
        state = begin(n, ctx, FixedRng(0))
        pos = 0
        while pos < n:
            step = min(n - pos, rng.randrange(1, 2 * k + 2))
            state.feed(x[pos:pos + step])
            pos += step
        state.finish()
        bound = SPACE_CONSTANT * (k + n.bit_length())
        assert state.profile.peak_state_bits <= bound, (n, k)


def test_one_pass_exact_read_count():
    ctx = make_field(3)
    x = "101100101"
    state = begin(9, ctx, FixedRng(1))
    for ch in x:
        state.feed(ch)
    state.finish()
    assert state.profile.bits_read == 9


# ------------------------------------------------------------ fingerprints

def test_fingerprint_json_round_trip():
    fp = fingerprint(6, "101101", seed=44, f_of_n=6)
    d = fp.to_json_dict()
    assert d["n"] == 6 and d["seed"] == 44
    back = Fingerprint.from_json_dict(d)
    assert back == fp


# ------------------------------------------------------------ tuple coding

def test_encode_tuple_frozen():
    assert encode_tuple(("1", "0", "1")) == "1100100011"
    assert encode_tuple(("10", "11")) == "1110001111"


def test_decode_tuple_frozen():
    assert decode_tuple("1100100011") == ["1", "0", "1"]
    assert decode_tuple("1110001111") == ["10", "11"]


def test_tuple_parts_validation():
    with pytest.raises(ValueError):
        encode_tuple(("1",))
    with pytest.raises(ValueError):
        encode_tuple(("1", "0", "1", "1"))
    with pytest.raises(ValueError):
        encode_tuple(("1", "", "1"))


def test_decode_tuple_malformed():
    for bad in ("1", "110", "0011", "11000011" + "0", "01"):
        with pytest.raises(ValueError):
            decode_tuple(bad)


@given(
    st.lists(st.text(alphabet="01", min_size=1, max_size=12), min_size=2, max_size=3)
)
@settings(max_examples=300, deadline=None)
def test_tuple_round_trip(parts):
    coded = encode_tuple(parts)
    assert decode_tuple(coded) == list(parts)
    total = sum(len(p) for p in parts)
    assert len(coded) == 2 * total + 2 * (len(parts) - 1)


def test_encode_fingerprint_frozen():
    fp = Fingerprint(n=4, a=2, v=2, ctx=GF4)
    coded = encode_fingerprint(fp)
    assert coded == encode_tuple(("100", "10", "10"))
    assert len(coded) == 2 * (3 + 2 * 2) + 4


def test_decode_fingerprint_round_trip():
    fp = Fingerprint(n=4, a=2, v=2, ctx=GF4)
    back = decode_fingerprint(encode_fingerprint(fp), GF4)
    assert (back.n, back.a, back.v) == (4, 2, 2)


def test_decode_fingerprint_rejects_badly_formed():
    with pytest.raises(ValueError):
        decode_fingerprint(encode_tuple(("100", "10")), GF4)  # two parts
    with pytest.raises(ValueError):
        decode_fingerprint(encode_tuple(("0100", "10", "10")), GF4)  # leading zero n
    with pytest.raises(ValueError):
        decode_fingerprint(encode_tuple(("100", "1", "10")), GF4)  # a not k bits


# --------------------------------------------------------------- raw bytes

def test_bits_from_bytes_msb_first():
    assert bits_from_bytes(b"\xb0") == "10110000"
    assert bits_from_bytes(b"\x01\x80") == "0000000110000000"
    assert bits_from_bytes(b"") == ""

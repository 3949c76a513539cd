import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lucastego.baselines import (
    BaselineOptions,
    _lsbmr_pair,
    lsb_embed,
    lsb_extract,
    lsbm_embed,
    lsbm_extract,
    lsbmr_capacity,
    lsbmr_embed,
    lsbmr_extract,
    pair_bit,
)
from lucastego.engine import HEADER_BITS, frame_payload
from lucastego.errors import CapacityError
from lucastego.image_io import ImageBuffer

from conftest import random_image

SEQ = BaselineOptions(traversal="sequential")


def _cover_with_first(values, total=64):
    samples = list(values) + [128] * (total - len(values))
    return ImageBuffer.from_samples(samples, 1, total)


def test_lsb_sets_bit_on_26():
    # the first header bit is 0 for any short message; put 26 where bit 33 (the first message bit) lands
    msg = b"\x80"
    cover = _cover_with_first([0] * HEADER_BITS + [26])
    stego, _ = lsb_embed(cover, msg, SEQ)
    assert stego.samples[HEADER_BITS] == 27
    assert lsb_extract(stego, SEQ) == msg


def test_lsb_matching_bit_leaves_sample():
    bits = frame_payload(b"\x00")
    cover = _cover_with_first(bits.tolist(), total=64)
    stego, log = lsb_embed(cover, b"\x00", SEQ)
    assert len(log) == 0


def test_lsb_touches_only_lowest_plane(rng):
    cover = random_image(rng, 32, 32)
    stego, _ = lsb_embed(cover, rng.bytes(100))
    assert np.all((cover.samples ^ stego.samples) <= 1)


def test_lsbm_zero_forced_up():
    bits = frame_payload(b"\xff")
    values = [int(b) for b in bits[:HEADER_BITS]] + [0]
    cover = _cover_with_first(values)
    stego, _ = lsbm_embed(cover, b"\xff", SEQ)
    assert stego.samples[HEADER_BITS] == 1


def test_lsbm_255_forced_down():
    bits = frame_payload(b"\x00")
    values = [int(b) for b in bits[:HEADER_BITS]] + [255]
    stego, _ = lsbm_embed(_cover_with_first(values), b"\x00", SEQ)
    assert stego.samples[HEADER_BITS] == 254


def test_lsbm_changes_by_one(rng):
    cover = random_image(rng, 32, 32)
    stego, log = lsbm_embed(cover, rng.bytes(120), BaselineOptions(seed=5))
    diff = np.abs(stego.samples.astype(int) - cover.samples.astype(int))
    assert set(np.unique(diff).tolist()) <= {0, 1}
    assert len(log) == int(np.count_nonzero(diff))


def test_lsbm_full_rate_changes_half():
    rng = np.random.default_rng(3)
    cover = random_image(rng, 64, 64)
    message = rng.bytes((cover.num_samples - HEADER_BITS) // 8)
    _, log = lsbm_embed(cover, message, BaselineOptions(seed=11))
    assert abs(len(log) / cover.num_samples - 0.5) <= 0.02


def test_pair_bit():
    assert pair_bit(2, 3) == 0
    assert pair_bit(5, 0) == 0
    assert pair_bit(5, 1) == 1


def test_lsbmr_pair_2_3_unchanged():
    assert _lsbmr_pair(2, 3, 0, 0) == (2, 3)


def test_lsbmr_pair_cases_exhaustive():
    for x1 in range(256):
        for x2 in range(256):
            for m1 in (0, 1):
                for m2 in (0, 1):
                    y1, y2 = _lsbmr_pair(x1, x2, m1, m2)
                    assert 0 <= y1 <= 255 and 0 <= y2 <= 255
                    assert (y1 & 1, pair_bit(y1, y2)) == (m1, m2)
                    d1, d2 = abs(y1 - x1), abs(y2 - x2)
                    assert d1 <= 1 and d2 <= 1
                    if x1 not in (0, 255):
                        assert d1 + d2 <= 1


def test_lsbmr_boundary_x1_zero_needs_second_adjustment():
    # x1 = 0, m1 = 1: x1 becomes 1; pair_bit(1, 4) = 0 so m2 = 1 forces x2 += 1
    assert _lsbmr_pair(0, 4, 1, 1) == (1, 5)
    assert _lsbmr_pair(0, 4, 1, 0) == (1, 4)
    assert _lsbmr_pair(255, 255, 0, 1) == (254, 254)


def test_lsbmr_full_rate_changes_three_eighths():
    rng = np.random.default_rng(4)
    cover = random_image(rng, 64, 64)
    message = rng.bytes((lsbmr_capacity(cover) - HEADER_BITS) // 8)
    _, log = lsbmr_embed(cover, message, BaselineOptions(seed=2))
    assert abs(len(log) / cover.num_samples - 0.375) <= 0.02


@settings(max_examples=40, deadline=None)
@given(rows=st.integers(6, 20), cols=st.integers(6, 20), channels=st.sampled_from([1, 3]),
       seed=st.integers(0, 2**64 - 1), traversal=st.sampled_from(["sequential", "permuted"]),
       data=st.data())
def test_baseline_round_trips(rows, cols, channels, seed, traversal, data):
    cover = random_image(np.random.default_rng(seed % 997), rows, cols, channels)
    opts = BaselineOptions(seed=seed, traversal=traversal)
    n = cover.num_samples
    msg = data.draw(st.binary(max_size=(n - HEADER_BITS) // 8))
    assert lsb_extract(lsb_embed(cover, msg, opts)[0], opts) == msg
    assert lsbm_extract(lsbm_embed(cover, msg, opts)[0], opts) == msg
    if 8 * len(msg) + HEADER_BITS <= lsbmr_capacity(cover):
        assert lsbmr_extract(lsbmr_embed(cover, msg, opts)[0], opts) == msg


def test_odd_sample_count_leaves_last_sample(rng):
    cover = random_image(rng, 1, 41)
    msg = b""
    stego, _ = lsbmr_embed(cover, msg, SEQ)
    assert stego.samples[-1] == cover.samples[-1]
    assert lsbmr_extract(stego, SEQ) == msg


@pytest.mark.parametrize("embed_fn", [lsb_embed, lsbm_embed, lsbmr_embed])
def test_capacity_error(embed_fn, rng):
    with pytest.raises(CapacityError):
        embed_fn(random_image(rng, 6, 6), b"toolong")

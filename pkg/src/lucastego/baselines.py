"""LSB replacement, LSB matching and LSB matching revisited.

All three use the same 33-bit header framing and traversal as the Lucas
embedder, at one payload bit per sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import (
    HEADER_BITS,
    TRAVERSALS,
    ChangeLog,
    bits_to_bytes,
    frame_payload,
    parse_header,
    traversal_order,
)
from .errors import CapacityError, CorruptStegoError
from .image_io import ImageBuffer


@dataclass(frozen=True)
class BaselineOptions:
    seed: int = 0
    traversal: str = "permuted"

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.traversal not in TRAVERSALS:
            raise ValueError(f"traversal must be one of {TRAVERSALS}")


def lsb_capacity(image: ImageBuffer) -> int:
    return image.num_samples


def lsbmr_capacity(image: ImageBuffer) -> int:
    return 2 * (image.num_samples // 2)


def _prepare(cover: ImageBuffer, message: bytes, opts: BaselineOptions, cap: int):
    bits = frame_payload(message)
    if len(bits) > cap:
        raise CapacityError(len(bits), cap)
    order = traversal_order(opts.seed, cover.num_samples, opts.traversal)
    return bits, order


def _read_lsb_payload(values_in_order: np.ndarray, cap: int) -> bytes:
    lsbs = values_in_order & 1
    if cap < HEADER_BITS:
        raise CorruptStegoError("image is too small to hold a header")
    length = parse_header(lsbs[:HEADER_BITS], cap - HEADER_BITS)
    return bits_to_bytes(lsbs[HEADER_BITS:HEADER_BITS + length])


def lsb_embed(cover: ImageBuffer, message: bytes,
              opts: BaselineOptions = BaselineOptions()) -> tuple[ImageBuffer, ChangeLog]:
    """Overwrite the binary LSB of each traversed sample with a payload bit."""
    bits, order = _prepare(cover, message, opts, lsb_capacity(cover))
    samples = cover.samples
    out = samples.copy()
    pos = order[: len(bits)]
    out[pos] = (samples[pos] & 0xFE) | bits
    return cover.with_samples(out), ChangeLog.between(samples, out)


def lsb_extract(stego: ImageBuffer, opts: BaselineOptions = BaselineOptions()) -> bytes:
    order = traversal_order(opts.seed, stego.num_samples, opts.traversal)
    return _read_lsb_payload(stego.samples[order], lsb_capacity(stego))


def lsbm_embed(cover: ImageBuffer, message: bytes,
               opts: BaselineOptions = BaselineOptions()) -> tuple[ImageBuffer, ChangeLog]:
    """LSB matching: on mismatch add +1 or -1 by a seeded coin (forced at 0 and 255)."""
    bits, order = _prepare(cover, message, opts, lsb_capacity(cover))
    samples = cover.samples
    pos = order[: len(bits)]
    vals = samples[pos].astype(np.int16)
    coin = np.random.default_rng(opts.seed).integers(0, 2, size=len(bits))
    step = np.where(coin == 1, 1, -1)
    step[vals == 0] = 1
    step[vals == 255] = -1
    mismatch = (vals & 1) != bits
    vals[mismatch] += step[mismatch]
    out = samples.copy()
    out[pos] = vals.astype(np.uint8)
    return cover.with_samples(out), ChangeLog.between(samples, out)


lsbm_extract = lsb_extract


def pair_bit(a, b):
    """Second LSBMR bit carried by a pair: LSB(floor(a/2) + b)."""
    return ((a >> 1) + b) & 1


def _lsbmr_pair(x1: int, x2: int, m1: int, m2: int) -> tuple[int, int]:
    if (x1 & 1) == m1:
        if pair_bit(x1, x2) != m2:
            x2 = x2 + 1 if x2 < 255 else x2 - 1
        return x1, x2
    if x1 == 0 or x1 == 255:
        # only one neighbour exists; fix the second bit on x2 if needed
        x1 = 1 if x1 == 0 else 254
        if pair_bit(x1, x2) != m2:
            x2 = x2 + 1 if x2 < 255 else x2 - 1
        return x1, x2
    if pair_bit(x1 - 1, x2) == m2:
        return x1 - 1, x2
    return x1 + 1, x2


def lsbmr_embed(cover: ImageBuffer, message: bytes,
                opts: BaselineOptions = BaselineOptions()) -> tuple[ImageBuffer, ChangeLog]:
    """LSB matching revisited over consecutive pairs of the traversal order.

    Of each pair (x1, x2), LSB(x1) carries the first bit and
    ``pair_bit(x1, x2)`` the second. At most one sample changes, by 1,
    except when x1 sits at 0 or 255 and must move inward.
    """
    bits, order = _prepare(cover, message, opts, lsbmr_capacity(cover))
    if len(bits) % 2:
        bits = np.concatenate([bits, np.zeros(1, np.uint8)])
    samples = cover.samples
    out = samples.copy()
    npairs = len(bits) // 2
    first = order[0: 2 * npairs: 2]
    second = order[1: 2 * npairs: 2]
    x1s = samples[first].tolist()
    x2s = samples[second].tolist()
    m = bits.reshape(-1, 2).tolist()
    new1, new2 = [], []
    for x1, x2, (m1, m2) in zip(x1s, x2s, m):
        a, b = _lsbmr_pair(x1, x2, m1, m2)
        new1.append(a)
        new2.append(b)
    out[first] = new1
    out[second] = new2
    return cover.with_samples(out), ChangeLog.between(samples, out)


def lsbmr_extract(stego: ImageBuffer, opts: BaselineOptions = BaselineOptions()) -> bytes:
    order = traversal_order(opts.seed, stego.num_samples, opts.traversal)
    cap = lsbmr_capacity(stego)
    if cap < HEADER_BITS:
        raise CorruptStegoError("image is too small to hold a header")
    vals = stego.samples[order[:cap]].astype(np.int16)
    x1, x2 = vals[0::2], vals[1::2]
    bits = np.stack([x1 & 1, pair_bit(x1, x2)], axis=1).reshape(-1).astype(np.uint8)
    length = parse_header(bits[:HEADER_BITS], cap - HEADER_BITS)
    return bits_to_bytes(bits[HEADER_BITS:HEADER_BITS + length])

"""Embedding and extraction with the Lucas syndrome scheme.

Every sample carries one 3-bit group. The payload is a 33-bit header
(32-bit big-endian message length in bits plus one zero pad bit) followed
by the message bits, MSB first, cut into (f3, f2, f1) groups. The k-th group
goes into the sample at ``traversal_order[k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, CorruptStegoError, FormatError
from .image_io import ImageBuffer
from .syndrome import build_solve_table, syndrome_table

HEADER_BITS = 33
BITS_PER_SAMPLE = 3
TRAVERSALS = ("sequential", "permuted")
CHANNEL_MODES = ("all", "gray-only")

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` outputs of the splitmix64 generator seeded with ``seed``."""
    state = np.uint64(seed & _MASK64)
    steps = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = state + steps * np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def traversal_order(seed: int, n: int, mode: str = "permuted") -> np.ndarray:
    """Sample visiting order: identity, or a splitmix64-driven Fisher-Yates shuffle.

    The shuffle walks i from n-1 down to 1 and swaps i with
    ``j = next_u64 % (i + 1)``.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if mode not in TRAVERSALS:
        raise ValueError(f"traversal must be one of {TRAVERSALS}, got {mode!r}")
    if mode == "sequential" or n == 1:
        return np.arange(n, dtype=np.int64)
    bounds = np.arange(n, 1, -1, dtype=np.uint64)  # i + 1 for i = n-1 .. 1
    js = (splitmix64(seed, n - 1) % bounds).tolist()
    perm = list(range(n))
    for i, j in zip(range(n - 1, 0, -1), js):
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.int64)


# -- payload framing (shared with the baselines) ----------------------------

def frame_payload(message: bytes) -> np.ndarray:
    """Header + message as a 0/1 uint8 array of length 33 + 8*len(message)."""
    nbits = 8 * len(message)
    if nbits >= 1 << 32:
        raise CapacityError(nbits + HEADER_BITS, (1 << 32) - 1)
    header = np.unpackbits(np.frombuffer(nbits.to_bytes(4, "big"), dtype=np.uint8))
    body = np.unpackbits(np.frombuffer(bytes(message), dtype=np.uint8))
    return np.concatenate([header, np.zeros(1, np.uint8), body])


def parse_header(bits: np.ndarray, available: int) -> int:
    """Message length in bits from the first 33 payload bits.

    ``available`` is the number of payload bits the carrier holds after the
    header. Raises CorruptStegoError for an impossible length or a nonzero pad.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    length = int.from_bytes(np.packbits(bits[:32]).tobytes(), "big")
    if bits[32]:
        raise CorruptStegoError("header pad bit is set")
    if length > available:
        raise CorruptStegoError(
            f"header claims {length} message bits but only {available} fit in the carrier"
        )
    if length % 8:
        raise CorruptStegoError(f"header length {length} is not a whole number of bytes")
    return length


def bits_to_bytes(bits: np.ndarray) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


# -- options and change log -------------------------------------------------

@dataclass(frozen=True)
class EmbedOptions:
    seed: int = 0
    traversal: str = "permuted"
    channels: str = "all"

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.traversal not in TRAVERSALS:
            raise ValueError(f"traversal must be one of {TRAVERSALS}")
        if self.channels not in CHANNEL_MODES:
            raise ValueError(f"channels must be one of {CHANNEL_MODES}")


@dataclass(frozen=True)
class ChangeLog:
    """Samples altered by an embedding: flat index, old value, new value."""

    indices: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int64))
    old: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint8))
    new: np.ndarray = field(default_factory=lambda: np.zeros(0, np.uint8))

    @classmethod
    def between(cls, cover: np.ndarray, stego: np.ndarray) -> "ChangeLog":
        idx = np.flatnonzero(cover != stego)
        return cls(idx.astype(np.int64), cover[idx].copy(), stego[idx].copy())

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        for i, a, b in zip(self.indices.tolist(), self.old.tolist(), self.new.tolist()):
            yield i, a, b

    def max_change(self) -> int:
        if not len(self):
            return 0
        return int(np.abs(self.new.astype(np.int16) - self.old.astype(np.int16)).max())


# -- the Lucas embedder -----------------------------------------------------

def capacity(image: ImageBuffer) -> int:
    """Total bits the image can carry (3 per sample), header included."""
    return BITS_PER_SAMPLE * image.num_samples


def usable_capacity(image: ImageBuffer) -> int:
    """Message bits that fit after the 33-bit header (may be negative)."""
    return capacity(image) - HEADER_BITS


def _check_channels(image: ImageBuffer, opts: EmbedOptions) -> None:
    if opts.channels == "gray-only" and image.channels != 1:
        raise FormatError("channels=gray-only requires a single-channel image")


def _groups(bits: np.ndarray) -> np.ndarray:
    pad = (-len(bits)) % BITS_PER_SAMPLE
    bits = np.concatenate([bits, np.zeros(pad, np.uint8)]).reshape(-1, 3)
    return (bits[:, 0] << 2 | bits[:, 1] << 1 | bits[:, 2]).astype(np.uint8)


def _ungroup(groups: np.ndarray) -> np.ndarray:
    g = np.asarray(groups, dtype=np.uint8)
    return np.stack([g >> 2 & 1, g >> 1 & 1, g & 1], axis=1).reshape(-1)


def embed(cover: ImageBuffer, message: bytes,
          opts: EmbedOptions = EmbedOptions()) -> tuple[ImageBuffer, ChangeLog]:
    """Hide ``message`` in ``cover``; returns the stego image and its change log."""
    _check_channels(cover, opts)
    need = HEADER_BITS + 8 * len(message)
    if need > capacity(cover):
        raise CapacityError(need, capacity(cover))
    groups = _groups(frame_payload(message))
    samples = cover.samples
    positions = traversal_order(opts.seed, samples.size, opts.traversal)[: len(groups)]
    out = samples.copy()
    out[positions] = build_solve_table()[samples[positions], groups]
    return cover.with_samples(out), ChangeLog.between(samples, out)


def extract(stego: ImageBuffer, opts: EmbedOptions = EmbedOptions()) -> bytes:
    """Recover the message embedded with the same options."""
    _check_channels(stego, opts)
    samples = stego.samples
    if capacity(stego) < HEADER_BITS:
        raise CorruptStegoError("image is too small to hold a header")
    order = traversal_order(opts.seed, samples.size, opts.traversal)
    header_groups = -(-HEADER_BITS // BITS_PER_SAMPLE)
    syn = syndrome_table()
    header = _ungroup(syn[samples[order[:header_groups]]])
    length = parse_header(header, usable_capacity(stego))
    total_groups = -(-(HEADER_BITS + length) // BITS_PER_SAMPLE)
    bits = _ungroup(syn[samples[order[:total_groups]]])
    return bits_to_bytes(bits[HEADER_BITS: HEADER_BITS + length])

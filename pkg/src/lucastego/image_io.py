"""In-memory pixel model and binary PGM/PPM (P5/P6, maxval 255) I/O."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError

_WHITESPACE = b" \t\n\r\v\f"


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """R x C x L grid of 8-bit samples, L in {1, 3}.

    ``pixels`` has shape (rows, cols, channels); ``samples`` is the flat
    row-major, channel-interleaved view used by the embedders.
    """

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim == 2:
            px = px[:, :, None]
        if px.ndim != 3 or px.shape[2] not in (1, 3):
            raise FormatError(f"expected (rows, cols, 1|3) pixels, got shape {px.shape}")
        if px.shape[0] == 0 or px.shape[1] == 0:
            raise FormatError("image has a zero dimension")
        if px.dtype != np.uint8:
            if px.size and (px.min() < 0 or px.max() > 255):
                raise FormatError("sample values must be in 0..255")
            px = px.astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_samples(cls, samples, rows: int, cols: int, channels: int = 1) -> "ImageBuffer":
        arr = np.asarray(samples, dtype=np.uint8)
        if arr.size != rows * cols * channels:
            raise FormatError(f"expected {rows * cols * channels} samples, got {arr.size}")
        return cls(arr.reshape(rows, cols, channels))

    @property
    def rows(self) -> int:
        return self.pixels.shape[0]

    @property
    def cols(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def num_samples(self) -> int:
        return self.pixels.size

    @property
    def samples(self) -> np.ndarray:
        return self.pixels.reshape(-1)

    def with_samples(self, samples: np.ndarray) -> "ImageBuffer":
        return ImageBuffer.from_samples(samples, self.rows, self.cols, self.channels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and bool(
            np.array_equal(self.pixels, other.pixels)
        )

    def __repr__(self) -> str:
        return f"ImageBuffer(rows={self.rows}, cols={self.cols}, channels={self.channels})"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping # comments.

    Returns the tokens and the offset just past the last token.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        if pos >= n:
            break
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos


def read_pnm(data: bytes) -> ImageBuffer:
    """Parse a binary PGM (P5) or PPM (P6) with maxval 255."""
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FormatError(f"magic: expected P5 or P6, got {magic!r}")

    tokens, pos = _header_tokens(data[2:], 3)
    pos += 2
    names = ("width", "height", "maxval")
    if len(tokens) < 3:
        raise FormatError(f"{names[len(tokens)]}: header truncated")
    values = []
    for name, tok in zip(names, tokens):
        if not tok.isdigit():
            raise FormatError(f"{name}: not a decimal integer: {tok!r}")
        values.append(int(tok))
    width, height, maxval = values
    if width == 0:
        raise FormatError("width: zero dimension")
    if height == 0:
        raise FormatError("height: zero dimension")
    if maxval != 255:
        raise FormatError(f"maxval: only 255 is supported, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError("raster: missing whitespace after maxval")
    pos += 1

    expected = width * height * channels
    raster = data[pos : pos + expected]
    if len(raster) < expected:
        raise FormatError(f"raster: truncated, expected {expected} bytes, got {len(raster)}")
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels)
    return ImageBuffer(arr.copy())


def write_pnm(image: ImageBuffer) -> bytes:
    magic = "P5" if image.channels == 1 else "P6"
    header = f"{magic}\n{image.cols} {image.rows}\n255\n".encode("ascii")
    return header + image.pixels.tobytes()


def load(path) -> ImageBuffer:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    return read_pnm(data)


def save(image: ImageBuffer, path) -> None:
    Path(path).write_bytes(write_pnm(image))


def histogram(image: ImageBuffer, channel: int = 0) -> np.ndarray:
    """Counts of each value 0..255 in one channel."""
    if not 0 <= channel < image.channels:
        raise IndexError(f"channel {channel} out of range for {image.channels}-channel image")
    return np.bincount(image.pixels[:, :, channel].ravel(), minlength=256).astype(np.int64)

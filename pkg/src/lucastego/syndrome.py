"""Seven-bit XOR encoder/decoder and the solvers built on it.

A seven-bit state is an int with b_i at bit position i-1; a syndrome is an
int 0..7 holding (f3, f2, f1) from high to low bit, where

    f3 = b1 ^ b5 ^ b6 ^ b7
    f2 = b1 ^ b3 ^ b4 ^ b7
    f1 = b1 ^ b2 ^ b4 ^ b6

Each b_i toggles a distinct nonzero syndrome pattern, so any target is
reachable from any state with at most one flip.
"""

from __future__ import annotations

import functools

import numpy as np

from .lucas import MAX_VALUE, decompose, low7

# syndrome pattern toggled by b1..b7
COLUMNS: tuple[int, ...] = (0b111, 0b001, 0b010, 0b011, 0b100, 0b101, 0b110)


def syndrome(bits: int) -> int:
    """(f3, f2, f1) of a seven-bit state, packed as an int."""
    if not 0 <= bits < 128:
        raise ValueError(f"seven-bit state out of range: {bits}")
    out = 0
    for i, col in enumerate(COLUMNS):
        if bits >> i & 1:
            out ^= col
    return out


def flip_for(current: int, target: int) -> int | None:
    """Bit index (1..7) whose flip moves ``current`` syndrome to ``target``.

    Returns None when nothing needs to change.
    """
    delta = (current ^ target) & 0b111
    if delta == 0:
        return None
    return COLUMNS.index(delta) + 1


def apply_flip(bits: int, index: int | None) -> int:
    return bits if index is None else bits ^ (1 << (index - 1))


def value_syndrome(v: int) -> int:
    """Syndrome carried by pixel value ``v`` under its canonical Lucas form."""
    return syndrome(low7(decompose(v)))


def solve_stego_value(v: int, target: int) -> int:
    """Closest value to ``v`` whose canonical syndrome equals ``target``.

    Ties go to the larger value. ``v`` itself is returned when it already
    carries the target.
    """
    if not 0 <= v <= MAX_VALUE:
        raise ValueError(f"pixel value must be in 0..{MAX_VALUE}, got {v}")
    if not 0 <= target < 8:
        raise ValueError(f"syndrome must be in 0..7, got {target}")
    for dist in range(MAX_VALUE + 1):
        for cand in (v + dist, v - dist):
            if 0 <= cand <= MAX_VALUE and value_syndrome(cand) == target:
                return cand
    raise AssertionError(f"no value carries syndrome {target:03b}")  # pragma: no cover


@functools.cache
def syndrome_table() -> np.ndarray:
    """Canonical syndrome of every value 0..255 (read-only uint8 array)."""
    table = np.array([value_syndrome(v) for v in range(MAX_VALUE + 1)], dtype=np.uint8)
    table.flags.writeable = False
    return table


@functools.cache
def build_solve_table() -> np.ndarray:
    """256x8 table with ``table[v, t] == solve_stego_value(v, t)``."""
    table = np.array(
        [[solve_stego_value(v, t) for t in range(8)] for v in range(MAX_VALUE + 1)],
        dtype=np.uint8,
    )
    table.flags.writeable = False
    return table


def max_distortion() -> int:
    """Worst-case |v' - v| over all values and targets."""
    table = build_solve_table().astype(np.int16)
    return int(np.abs(table - np.arange(MAX_VALUE + 1)[:, None]).max())


def solve_table_csv() -> str:
    """The solve table as CSV (``v,t000,...,t111``) for auditing."""
    table = build_solve_table()
    lines = ["v," + ",".join(f"t{t:03b}" for t in range(8))]
    for v in range(MAX_VALUE + 1):
        lines.append(f"{v}," + ",".join(str(int(x)) for x in table[v]))
    return "\n".join(lines) + "\n"

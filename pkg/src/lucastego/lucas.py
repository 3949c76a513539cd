"""Lucas-number representation of 8-bit pixel values.

The sequence is seeded with L1 = 2, L2 = 1, so the twelve terms needed to
cover [0, 255] are ``2 1 3 4 7 11 18 29 47 76 123 199`` (index order).
A value is written as a sum of terms with no two adjacent indices; the
canonical choice is the greedy largest-value-first decomposition.

Bit strings are always printed d12 .. d1 (most significant flag first).
"""

from __future__ import annotations

from dataclasses import dataclass

NUM_TERMS = 12
MAX_VALUE = 255


def lucas_sequence(n: int = NUM_TERMS) -> list[int]:
    """Return the first ``n`` Lucas terms L1..Ln (1 <= n <= 12)."""
    if not 1 <= n <= NUM_TERMS:
        raise ValueError(f"n must be in 1..{NUM_TERMS}, got {n}")
    terms = [2, 1]
    while len(terms) < n:
        terms.append(terms[-1] + terms[-2])
    return terms[:n]


TERMS: tuple[int, ...] = tuple(lucas_sequence())
# indices into TERMS sorted by term value, largest first (L1=2 outranks L2=1)
_GREEDY_ORDER = sorted(range(NUM_TERMS), key=lambda i: TERMS[i], reverse=True)


@dataclass(frozen=True)
class LucasBits:
    """Twelve Lucas flags; ``flags[i]`` multiplies L(i+1)."""

    flags: tuple[int, ...]

    def __post_init__(self):
        if len(self.flags) != NUM_TERMS or any(f not in (0, 1) for f in self.flags):
            raise ValueError("LucasBits needs exactly 12 flags of 0/1")

    @classmethod
    def from_string(cls, s: str) -> "LucasBits":
        """Parse a d12..d1 string such as ``"000001010010"``."""
        if len(s) != NUM_TERMS or set(s) - {"0", "1"}:
            raise ValueError(f"expected 12 binary digits, got {s!r}")
        return cls(tuple(int(c) for c in reversed(s)))

    def __str__(self) -> str:
        return "".join(str(f) for f in reversed(self.flags))

    def is_canonical(self) -> bool:
        return not any(self.flags[i] and self.flags[i + 1] for i in range(NUM_TERMS - 1))

    def with_flag(self, index: int, value: int) -> "LucasBits":
        """Copy with flag d<index> (1-based) set to ``value``."""
        flags = list(self.flags)
        flags[index - 1] = value
        return LucasBits(tuple(flags))


def decompose(v: int) -> LucasBits:
    """Canonical (greedy) Lucas flags of a pixel value."""
    if not 0 <= v <= MAX_VALUE:
        raise ValueError(f"pixel value must be in 0..{MAX_VALUE}, got {v}")
    flags = [0] * NUM_TERMS
    rest = v
    for i in _GREEDY_ORDER:
        if TERMS[i] <= rest:
            flags[i] = 1
            rest -= TERMS[i]
    return LucasBits(tuple(flags))


def recompose(bits: LucasBits, *, check_range: bool = True) -> int:
    """Sum of the selected terms.

    Non-canonical flag sets are accepted. A sum above 255 raises
    ``OverflowError`` unless ``check_range`` is false.
    """
    total = sum(t for t, f in zip(TERMS, bits.flags) if f)
    if check_range and total > MAX_VALUE:
        raise OverflowError(f"Lucas sum {total} exceeds {MAX_VALUE}")
    return total


def low7(bits: LucasBits) -> int:
    """The seven lowest flags packed as an int, b_i at bit position i-1.

    ``format(low7(bits), "07b")`` prints b7..b1.
    """
    return sum(f << i for i, f in enumerate(bits.flags[:7]))

"""Pairs-of-values chi-square attack (Westfeld & Pfitzmann).

LSB replacement pushes the counts of 2k and 2k+1 towards their mean. The
index reported here is the chi-square tail probability of the observed
even-value counts against that mean: near 1 means equalised pairs, which is
the signature of LSB replacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError
from .image_io import ImageBuffer

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 10_000


def _gamma_p_series(a: float, x: float) -> float:
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_fraction(a: float, x: float) -> float:
    # modified Lentz evaluation of the continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if not (math.isfinite(a) and math.isfinite(x)):
        raise ValueError(f"Q(a, x) needs finite inputs, got a={a}, x={x}")
    if a <= 0 or x < 0:
        raise ValueError(f"Q(a, x) needs a > 0 and x >= 0, got a={a}, x={x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, x)))
    return min(1.0, max(0.0, _gamma_q_fraction(a, x)))


@dataclass(frozen=True)
class ChiSquarePoint:
    fraction: float
    chi2: float
    dof: int
    index: float


def chi_square_from_histogram(hist: np.ndarray) -> tuple[float, int, float]:
    """(chi2, dof, index) for a 256-bin histogram."""
    hist = np.asarray(hist, dtype=np.float64)
    even, odd = hist[0::2], hist[1::2]
    expected = (even + odd) / 2.0
    keep = expected > 0
    kept = int(keep.sum())
    if kept < 2:
        raise InsufficientDataError(f"only {kept} non-empty value pairs; need at least 2")
    chi2 = float(np.sum((even[keep] - expected[keep]) ** 2 / expected[keep]))
    dof = kept - 1
    return chi2, dof, regularized_gamma_q(dof / 2.0, chi2 / 2.0)


def chi_square_index(image: ImageBuffer, prefix_fraction: float = 1.0) -> tuple[float, int, float]:
    """Chi-square statistic, degrees of freedom and index over a row-major prefix.

    The prefix covers the first ``floor(fraction * R * C)`` pixels. Colour
    images are tested per channel and the channel with the largest index
    is reported.
    """
    if not 0 < prefix_fraction <= 1:
        raise ValueError(f"prefix fraction must be in (0, 1], got {prefix_fraction}")
    npix = image.rows * image.cols
    count = int(math.floor(prefix_fraction * npix + 1e-9))
    flat = image.pixels.reshape(npix, image.channels)[:count]
    best = None
    for ch in range(image.channels):
        hist = np.bincount(flat[:, ch], minlength=256)
        result = chi_square_from_histogram(hist)
        if best is None or result[2] > best[2]:
            best = result
    return best


def chi_square_curve(image: ImageBuffer, steps: int = 10) -> list[ChiSquarePoint]:
    """Index at prefix fractions k/steps for k = 1..steps."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    points = []
    for k in range(1, steps + 1):
        frac = k / steps
        chi2, dof, idx = chi_square_index(image, frac)
        points.append(ChiSquarePoint(frac, chi2, dof, idx))
    return points


def curve_csv(points: list[ChiSquarePoint]) -> str:
    lines = ["fraction,chi2,dof,index"]
    lines += [f"{p.fraction:.6g},{p.chi2:.10g},{p.dof},{p.index:.10g}" for p in points]
    return "\n".join(lines) + "\n"

"""MSE, PSNR and modification-rate statistics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .image_io import ImageBuffer

I_MAX = 255.0


def mse(a: ImageBuffer, b: ImageBuffer) -> float:
    """Mean squared error over all R*C*L samples."""
    if a.pixels.shape != b.pixels.shape:
        raise ValueError(f"shape mismatch: {a.pixels.shape} vs {b.pixels.shape}")
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return float(np.sum(diff * diff)) / diff.size


def psnr(mse_value: float) -> float:
    """PSNR in dB for 8-bit samples; ``math.inf`` when the MSE is zero."""
    if not mse_value >= 0:
        raise ValueError(f"MSE must be non-negative, got {mse_value}")
    if mse_value == 0:
        return math.inf
    return 10.0 * math.log10(I_MAX * I_MAX / mse_value)


def modification_stats(log, total_samples: int, embedded_bits: int) -> tuple[float, float]:
    """(changed / total_samples, changed / embedded_bits).

    ``log`` is a ChangeLog (or any sized collection of changes) or a plain count.
    """
    if total_samples <= 0 or embedded_bits <= 0:
        raise ValueError("total_samples and embedded_bits must be positive")
    changed = log if isinstance(log, (int, np.integer)) else len(log)
    return changed / total_samples, changed / embedded_bits


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float
    changed_samples: int
    total_samples: int
    rate_per_sample: float
    rate_per_bit: float

    def as_dict(self) -> dict:
        return asdict(self)


def quality_report(cover: ImageBuffer, stego: ImageBuffer, embedded_bits: int | None = None,
                   changed: int | None = None) -> QualityReport:
    """Compare cover and stego; ``changed`` defaults to a sample-wise recount.

    Without ``embedded_bits`` the per-bit rate is NaN.
    """
    m = mse(cover, stego)
    if changed is None:
        changed = int(np.count_nonzero(cover.pixels != stego.pixels))
    if embedded_bits:
        per_sample, per_bit = modification_stats(changed, cover.num_samples, embedded_bits)
    else:
        per_sample, per_bit = changed / cover.num_samples, math.nan
    return QualityReport(m, psnr(m), changed, cover.num_samples, per_sample, per_bit)


def format_report(report: QualityReport) -> str:
    rows = [
        ("MSE", f"{report.mse:.6f}"),
        ("PSNR (dB)", "inf" if math.isinf(report.psnr_db) else f"{report.psnr_db:.4f}"),
        ("changed samples", str(report.changed_samples)),
        ("total samples", str(report.total_samples)),
        ("changed / sample", f"{report.rate_per_sample:.6f}"),
        ("changed / bit", "n/a" if math.isnan(report.rate_per_bit) else f"{report.rate_per_bit:.6f}"),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)

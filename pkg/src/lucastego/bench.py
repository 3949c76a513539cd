"""Benchmark harness: algorithm x rate x image matrices.

Writes into the output directory:

    bench.csv            one row per (image, algorithm, rate) cell
    summary.csv          per-(rate, algorithm) averages over the corpus
    timings.csv          wall time per cell (the only non-deterministic file)
    curves/<image>.csv   chi-square prefix curves of the cover and every stego
    hist/<image>_<ch>.csv  cover vs stego histograms for one chosen cell
    report.json          PSNR monotonicity flags and histogram deviations
    config.json          echo of the configuration
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
import zlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import algorithms, chisquare, metrics
from .errors import StegoError
from .image_io import ImageBuffer, histogram, load

RATE_MODES = ("per-capacity", "absolute-bits")
DEFAULT_RATES = (0.1, 0.3, 0.5, 0.8, 1.0)

ROW_FIELDS = ("image", "algorithm", "rate", "payload_bits", "psnr_db", "mse",
              "rate_per_sample", "rate_per_bit", "chi2_index_full", "status")
SUMMARY_FIELDS = ("rate", "algorithm", "psnr_db", "rate_per_sample", "mse",
                  "rate_per_bit", "chi2_index_full", "n_images", "images")


@dataclass
class BenchConfig:
    corpus: list[str]
    algorithms: list[str] = field(default_factory=lambda: list(algorithms.ALGORITHMS))
    rates: list[float] = field(default_factory=lambda: list(DEFAULT_RATES))
    rate_mode: str = "per-capacity"
    seed: int = 0
    output_dir: str = "bench_out"
    traversal: str = "permuted"
    curve_steps: int = 10
    hist_algorithm: str = "lucas"
    hist_rate: float = 0.3

    def __post_init__(self):
        if not self.corpus:
            raise ValueError("corpus is empty")
        if not self.algorithms:
            raise ValueError("no algorithms selected")
        for name in self.algorithms:
            algorithms.get(name)
        if not self.rates:
            raise ValueError("rates list is empty")
        if any(not 0 < r <= 1 for r in self.rates):
            raise ValueError("rates must lie in (0, 1]")
        if list(self.rates) != sorted(self.rates):
            raise ValueError("rates must be sorted ascending")
        if self.rate_mode not in RATE_MODES:
            raise ValueError(f"rate_mode must be one of {RATE_MODES}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.curve_steps < 1:
            raise ValueError("curve_steps must be at least 1")

    @classmethod
    def from_json(cls, path) -> "BenchConfig":
        """Load a config file; relative corpus paths resolve against its directory."""
        path = Path(path)
        raw = json.loads(path.read_text())
        base = path.parent
        raw["corpus"] = [str(p if Path(p).is_absolute() else base / p) for p in raw.get("corpus", [])]
        return cls(**raw)


@dataclass
class BenchRow:
    image: str
    algorithm: str
    rate: float
    payload_bits: int = 0
    psnr_db: float = math.nan
    mse: float = math.nan
    rate_per_sample: float = math.nan
    rate_per_bit: float = math.nan
    chi2_index_full: float = math.nan
    wall_time_ms: float = 0.0
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class BenchResult:
    rows: list[BenchRow]
    summary: list[dict]
    psnr_monotone: dict[str, bool]
    histogram_deviation: dict[str, float]


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return ""
        if math.isinf(x):
            return "inf"
        return repr(x)
    return str(x)


def _image_ids(paths: list[str]) -> list[str]:
    stems = [Path(p).stem for p in paths]
    if len(set(stems)) == len(stems):
        return stems
    return [f"{i:03d}_{s}" for i, s in enumerate(stems)]


def _payload(seed: int, image_id: str, nbytes: int) -> bytes:
    # one stream per image so every algorithm and rate embeds a prefix of the same message
    rng = np.random.default_rng([seed, zlib.crc32(image_id.encode())])
    return rng.bytes(nbytes)


def payload_bits(config: BenchConfig, algo: algorithms.Algorithm, image: ImageBuffer,
                 rate: float) -> int:
    """Message bits (whole bytes) for one cell."""
    if config.rate_mode == "per-capacity":
        reference = algo.usable_bits(image)
    else:
        reference = min(algorithms.get(a).usable_bits(image) for a in config.algorithms)
    return 8 * (max(0, int(rate * reference)) // 8)


def export_histograms(cover: ImageBuffer, stego: ImageBuffer, outdir, image_id: str) -> float:
    """Write ``<image_id>_<ch>.csv`` (value, cover_count, stego_count) per channel.

    Returns the largest per-bin relative deviation |stego - cover| / cover
    over bins the cover populates.
    """
    if cover.pixels.shape != stego.pixels.shape:
        raise ValueError("cover and stego dimensions differ")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    worst = 0.0
    for ch in range(cover.channels):
        hc, hs = histogram(cover, ch), histogram(stego, ch)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "cover_count", "stego_count"])
        for v in range(256):
            w.writerow([v, int(hc[v]), int(hs[v])])
        (outdir / f"{image_id}_{ch}.csv").write_text(buf.getvalue())
        used = hc > 0
        if used.any():
            worst = max(worst, float(np.max(np.abs(hs[used] - hc[used]) / hc[used])))
    return worst


def _run_cell(config, algo, image_id, cover, rate, message):
    row = BenchRow(image_id, algo.name, rate)
    nbits = payload_bits(config, algo, cover, rate)
    row.payload_bits = nbits
    start = time.perf_counter()
    try:
        stego, log = algo.run_embed(cover, message[: nbits // 8], config.seed, config.traversal)
    except StegoError as exc:
        row.status = f"failed: {exc}"
        return row, None
    report = metrics.quality_report(cover, stego, max(nbits, 1), changed=len(log))
    row.psnr_db = report.psnr_db
    row.mse = report.mse
    row.rate_per_sample = report.rate_per_sample
    row.rate_per_bit = report.rate_per_bit if nbits else math.nan
    try:
        row.chi2_index_full = chisquare.chi_square_index(stego)[2]
    except StegoError:
        pass
    row.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return row, stego


def _summarise(config: BenchConfig, rows: list[BenchRow]) -> list[dict]:
    summary = []
    for rate in config.rates:
        for name in config.algorithms:
            cell = [r for r in rows if r.ok and r.algorithm == name and r.rate == rate]
            if not cell:
                continue

            def mean(attr):
                vals = [getattr(r, attr) for r in cell if not math.isnan(getattr(r, attr))]
                return float(np.mean(vals)) if vals else math.nan

            summary.append({
                "rate": rate,
                "algorithm": name,
                "psnr_db": mean("psnr_db"),
                "rate_per_sample": mean("rate_per_sample"),
                "mse": mean("mse"),
                "rate_per_bit": mean("rate_per_bit"),
                "chi2_index_full": mean("chi2_index_full"),
                "n_images": len(cell),
                "images": ";".join(r.image for r in cell),
            })
    return summary


def _monotone(config: BenchConfig, summary: list[dict]) -> dict[str, bool]:
    flags = {}
    for name in config.algorithms:
        seq = [s["psnr_db"] for s in summary if s["algorithm"] == name]
        flags[name] = all(b <= a for a, b in zip(seq, seq[1:]))
    return flags


def _write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    path.write_text(buf.getvalue())


def run_bench(config: BenchConfig, write: bool = True) -> BenchResult:
    """Evaluate every (image, algorithm, rate) cell and write the artifacts."""
    out = Path(config.output_dir)
    if write:
        (out / "curves").mkdir(parents=True, exist_ok=True)
        (out / "hist").mkdir(parents=True, exist_ok=True)
    rows: list[BenchRow] = []
    deviations: dict[str, float] = {}

    for image_id, path in zip(_image_ids(config.corpus), config.corpus):
        try:
            cover = load(path)
        except StegoError as exc:
            for name in config.algorithms:
                for rate in config.rates:
                    rows.append(BenchRow(image_id, name, rate, status=f"failed: {exc}"))
            continue

        message = _payload(config.seed, image_id, (3 * cover.num_samples) // 8 + 1)
        curve_rows = []
        try:
            for p in chisquare.chi_square_curve(cover, config.curve_steps):
                curve_rows.append(["cover", 0.0, p.fraction, p.chi2, p.dof, p.index])
        except StegoError:
            pass
        for name in config.algorithms:
            algo = algorithms.get(name)
            for rate in config.rates:
                row, stego = _run_cell(config, algo, image_id, cover, rate, message)
                rows.append(row)
                if stego is None:
                    continue
                try:
                    for p in chisquare.chi_square_curve(stego, config.curve_steps):
                        curve_rows.append([name, rate, p.fraction, p.chi2, p.dof, p.index])
                except StegoError:
                    pass

        if write:
            _write_csv(out / "curves" / f"{image_id}.csv",
                       ["algorithm", "rate", "fraction", "chi2", "dof", "index"], curve_rows)
            hist_algo = algorithms.get(config.hist_algorithm)
            nbits = payload_bits(config, hist_algo, cover, config.hist_rate)
            try:
                stego, _ = hist_algo.run_embed(cover, message[: nbits // 8], config.seed,
                                               config.traversal)
                deviations[image_id] = export_histograms(cover, stego, out / "hist", image_id)
            except StegoError:
                pass

    summary = _summarise(config, rows)
    result = BenchResult(rows, summary, _monotone(config, summary), deviations)
    if write:
        _write_outputs(config, result, out)
    return result


def _write_outputs(config: BenchConfig, result: BenchResult, out: Path) -> None:
    _write_csv(out / "bench.csv", ROW_FIELDS,
               [[getattr(r, f) for f in ROW_FIELDS] for r in result.rows])
    _write_csv(out / "summary.csv", SUMMARY_FIELDS,
               [[s[f] for f in SUMMARY_FIELDS] for s in result.summary])
    _write_csv(out / "timings.csv", ["image", "algorithm", "rate", "wall_time_ms"],
               [[r.image, r.algorithm, r.rate, r.wall_time_ms] for r in result.rows])
    report = {
        "psnr_monotone": result.psnr_monotone,
        "histogram_deviation": {
            "algorithm": config.hist_algorithm,
            "rate": config.hist_rate,
            "max_relative_bin_deviation": result.histogram_deviation,
        },
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out / "config.json").write_text(json.dumps(asdict(config), indent=2, sort_keys=True) + "\n")

"""Name -> embedder registry used by the CLI and the benchmark harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import baselines, engine
from .image_io import ImageBuffer


@dataclass(frozen=True)
class Algorithm:
    name: str
    embed: Callable
    extract: Callable
    capacity: Callable[[ImageBuffer], int]  # payload bits, header included
    make_options: Callable

    def usable_bits(self, image: ImageBuffer) -> int:
        return self.capacity(image) - engine.HEADER_BITS

    def run_embed(self, cover: ImageBuffer, message: bytes, seed: int = 0,
                  traversal: str = "permuted"):
        return self.embed(cover, message, self.make_options(seed=seed, traversal=traversal))

    def run_extract(self, stego: ImageBuffer, seed: int = 0, traversal: str = "permuted") -> bytes:
        return self.extract(stego, self.make_options(seed=seed, traversal=traversal))


ALGORITHMS: dict[str, Algorithm] = {
    "lucas": Algorithm("lucas", engine.embed, engine.extract, engine.capacity,
                       engine.EmbedOptions),
    "lsb": Algorithm("lsb", baselines.lsb_embed, baselines.lsb_extract,
                     baselines.lsb_capacity, baselines.BaselineOptions),
    "lsbm": Algorithm("lsbm", baselines.lsbm_embed, baselines.lsbm_extract,
                      baselines.lsb_capacity, baselines.BaselineOptions),
    "lsbmr": Algorithm("lsbmr", baselines.lsbmr_embed, baselines.lsbmr_extract,
                       baselines.lsbmr_capacity, baselines.BaselineOptions),
}


def get(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None

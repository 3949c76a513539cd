"""Lucas-number syndrome steganography with LSB baselines, metrics and steganalysis."""

from .engine import ChangeLog, EmbedOptions, capacity, embed, extract, traversal_order
from .errors import CapacityError, CorruptStegoError, FormatError, StegoError
from .image_io import ImageBuffer, read_pnm, write_pnm
from .lucas import LucasBits, decompose, lucas_sequence, recompose

__all__ = [
    "CapacityError", "ChangeLog", "CorruptStegoError", "EmbedOptions", "FormatError",
    "ImageBuffer", "LucasBits", "StegoError", "capacity", "decompose", "embed", "extract",
    "lucas_sequence", "read_pnm", "recompose", "traversal_order", "write_pnm",
]

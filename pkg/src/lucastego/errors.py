"""Exception hierarchy shared by the embedders, parsers and the CLI."""


class StegoError(Exception):
    """Base class for all lucastego errors."""

    exit_code = 1


class FormatError(StegoError):
    """Malformed or unsupported image data."""

    exit_code = 2


class CapacityError(StegoError):
    """The payload does not fit into the cover."""

    exit_code = 3

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"message needs {required} bits but the cover holds only {available} bits"
        )


class CorruptStegoError(StegoError):
    """The embedded header is inconsistent with the carrier."""

    exit_code = 4


class InsufficientDataError(StegoError, ValueError):
    """Too few histogram categories for a chi-square test."""

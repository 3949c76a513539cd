import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lucastego.image_io import ImageBuffer

NATURAL = ("camera", "moon", "brick")


@pytest.fixture(scope="session")
def natural_images():
    """512x512 grayscale photographs bundled with scikit-image."""
    import skimage.data

    return {name: ImageBuffer(getattr(skimage.data, name)()) for name in NATURAL}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_image(rng, rows, cols, channels=1):
    return ImageBuffer(rng.integers(0, 256, size=(rows, cols, channels), dtype=np.uint8))


_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


import pytest as _pytest


@_pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        _ACCEPTANCE.append((marker.args[0], report.passed))
    elif marker and report.when == "setup" and not report.passed:
        _ACCEPTANCE.append((marker.args[0], False))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}")

import numpy as np
import pytest

from cineparse.histogram import Histogram
from cineparse.model import make_document


def color(i: int, b: int = 4, pixels: int = 10) -> Histogram:
    """All pixels in bin ``i``: distinct ``i`` give dissimilarity 1."""
    counts = np.zeros(b**3, dtype=np.int64)
    counts[i] = pixels
    return Histogram(counts, b)


def labeled_doc(labels, durations=None, transitions=None):
    """Document whose shots share a histogram iff they share a label."""
    palette = {}
    hists = [color(palette.setdefault(ch, len(palette))) for ch in labels]
    durations = durations or [10] * len(labels)
    return make_document(durations, transitions, hists)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)

import pathlib

import numpy as np
import pytest

from kgorient.graph import Graph, Triple

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def chain():
    return Graph(("a", "b", "c"), (Triple("a", "rel", "b"), Triple("b", "rel", "c")))


def random_orthogonal(rng, d):
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


_ACCEPTANCE_LINES = "_acceptance_lines"


@pytest.fixture
def criterion(request, capsys):
    """Record one ``PASS``/``FAIL`` line for an acceptance criterion.

    Lines are echoed as they happen and repeated in the terminal summary.
    """
    lines = request.config.__dict__.setdefault(_ACCEPTANCE_LINES, [])

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get(_ACCEPTANCE_LINES)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

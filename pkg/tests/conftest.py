import numpy as np
import pytest

from ral.core import CostMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def gaussian_7x7_batch():
    """1000 Gaussian 7x7 matrices from an independent numpy stream."""
    r = np.random.default_rng(7)
    return [CostMatrix(a) for a in r.standard_normal((1000, 7, 7))]


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line (printed in the terminal summary) and assert it."""

    def record(label: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE.append((label, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")

from __future__ import annotations

import random

import pytest

from cnotkit.gf2core import BitMatrix


def random_invertible(rng: random.Random, n: int) -> BitMatrix:
    while True:
        M = BitMatrix(n, tuple(rng.getrandbits(n) for _ in range(n)))
        if M.is_invertible():
            return M


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])

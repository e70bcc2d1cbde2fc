import sys
import numpy as np
import pytest
from hypothesis import settings

from fentropy.entropy import builtin

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_hermitian(rng, d, scale=1.0):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * (G + G.conj().T) / 2


def builtin_functions():
    return [
        builtin("shannon"),
        builtin("natural_xlogx"),
        builtin("gini_simpson"),
        builtin("tsallis", alpha=1.5),
        builtin("tsallis", alpha=2),
        builtin("tsallis", alpha=3),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for mod in list(sys.modules.values()):
        lines.extend(getattr(mod, "ACCEPTANCE_RESULTS", None) or [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

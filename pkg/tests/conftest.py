import numpy as np
import pytest

from shac.space import ContinuousUniform, SearchSpace


class HalfStub:
    """Accepts rows whose feature ``index`` exceeds ``cut``."""

    def __init__(self, index: int = 0, cut: float = 0.5) -> None:
        self.index = index
        self.cut = cut

    def predict(self, features):
        return np.where(features[:, self.index] > self.cut, 1, -1)


class BitStub:
    """Accepts rows whose bit ``bit`` of floor(x * 2**n_bits) is set.

    On a uniform coordinate, stubs for distinct bits are independent fair
    coins, so k of them accept a 2**-k fraction.
    """

    def __init__(self, bit: int, n_bits: int) -> None:
        self.bit = bit
        self.n_bits = n_bits

    def predict(self, features):
        code = np.floor(features[:, 0] * 2.0**self.n_bits).astype(np.int64)
        return np.where((code >> self.bit) & 1, 1, -1)


class ConstStub:
    def __init__(self, label: int) -> None:
        self.label = label

    def predict(self, features):
        return np.full(features.shape[0], self.label)


@pytest.fixture
def unit_space():
    return SearchSpace([ContinuousUniform(0.0, 1.0)])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

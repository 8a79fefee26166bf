import numpy as np
import pytest

from plandscape.network import InteractionMatrix
from plandscape.optimizer import Landscape
from plandscape.performance import BudgetSpec, ImportanceWeights, PerformanceParams

ACCEPTANCE_LINES = []


@pytest.fixture
def make_landscape():
    def make(coefficients, weights=None, alphabet=5, budget=None, eta=3.0):
        c = np.asarray(coefficients, dtype=float)
        m, n = c.shape
        w = ImportanceWeights(np.ones(m, dtype=int) if weights is None else weights)
        b_t = n * (alphabet - 1) if budget is None else budget
        return Landscape(InteractionMatrix(c), w, BudgetSpec(alphabet, b_t), PerformanceParams(eta))

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import numpy as np
import pytest

from phasebound.errors import SolverError, UsageError
from phasebound.rootfind import bisect_then_brent


def test_cubic_root():
    root = bisect_then_brent(lambda x: x**3 - 2.0, 0.0, 2.0)
    assert root == pytest.approx(2.0 ** (1.0 / 3.0), abs=1e-12)


def test_exact_zero_at_endpoint_returned():
    assert bisect_then_brent(np.sin, 0.0, 1.0, fa=0.0) == 0.0
    assert bisect_then_brent(lambda x: x - 1.0, 0.0, 1.0) == 1.0


def test_flat_then_steep():
    # pre-bisection keeps the secant steps from stalling on a plateau
    f = lambda x: np.tanh(50.0 * (x - 0.737)) + x * 1e-6
    root = bisect_then_brent(f, -4.0, 5.0)
    assert abs(f(root)) < 1e-10


def test_unbracketed_rejected():
    with pytest.raises((SolverError, UsageError, ValueError)):
        bisect_then_brent(lambda x: x * x + 1.0, -1.0, 1.0)

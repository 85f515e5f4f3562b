import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"


def random_symmetric(rng, n, scale=1.0):
    A = rng.normal(scale=scale, size=(n, n))
    return 0.5 * (A + A.T)


def random_covariance(rng, n, samples=None):
    samples = samples or 5 * n
    x = rng.normal(size=(samples, n)) @ rng.normal(size=(n, n)) / np.sqrt(n)
    x = x + 0.5 * rng.normal(size=(samples, n))
    C = np.cov(x, rowvar=False, bias=True)
    d = 1 / np.sqrt(np.diag(C))
    C = C * d[:, None] * d[None, :]
    np.fill_diagonal(C, 1.0)
    return 0.5 * (C + C.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

import math

import pytest
from hypothesis import strategies as st

from lgin.Scripts.equilibria import find_equilibria
from lgin.Scripts.model import ModelParams

# diagonal equilibrium of P1: 2x^2 - 3x - 0.5 = 0
P1_EQ = (3.0 + math.sqrt(13.0)) / 4.0
# diagonal saddle of P3: 4x^2 - 5.04x - 0.01 = 0
P3_SADDLE = (5.04 + math.sqrt(5.04 ** 2 + 0.16)) / 8.0


def log_uniform(lo: float = 1e-2, hi: float = 1e2):
    return st.floats(math.log10(lo), math.log10(hi)).map(lambda e: 10.0 ** e)


def st_params(lo: float = 1e-2, hi: float = 1e2):
    return st.builds(ModelParams, *[log_uniform(lo, hi) for _ in range(6)])


@pytest.fixture(autouse=True)
def _no_env_tol(monkeypatch):
    monkeypatch.delenv("LGIN_DEFAULT_TOL", raising=False)


@pytest.fixture
def p1() -> ModelParams:
    return ModelParams(b1=3, b2=3, c1=1, c2=1, h1=0.5, h2=0.5)


@pytest.fixture
def p2() -> ModelParams:
    return ModelParams(b1=2, b2=2, c1=0.5, c2=0.5, h1=1, h2=1)


@pytest.fixture
def p3() -> ModelParams:
    # bistable
    return ModelParams(b1=6, b2=6, c1=3, c2=3, h1=0.01, h2=0.01)


@pytest.fixture
def cond_a() -> ModelParams:
    return ModelParams(b1=1.5, b2=1.5, c1=2, c2=2, h1=1, h2=1)


@pytest.fixture(scope="session")
def p3_equilibria():
    return find_equilibria(ModelParams(b1=6, b2=6, c1=3, c2=3, h1=0.01, h2=0.01))

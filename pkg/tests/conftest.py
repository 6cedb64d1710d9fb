import pytest

from crnoma import SystemParams, db_to_linear


@pytest.fixture
def params_10db() -> SystemParams:
    """p0 = p1 = 10 (10 dB), r0 = r1 = 1: the equal-power singular-branch config."""
    return SystemParams(p0=10.0, p1=10.0, r0_hat=1.0, r1_hat=1.0)


def make_params(p0_db: float, p1_db: float, r0: float, r1: float) -> SystemParams:
    return SystemParams(p0=db_to_linear(p0_db), p1=db_to_linear(p1_db), r0_hat=r0, r1_hat=r1)

import math
import os

# settings are cached on first import; keep test runs off the working directory
os.environ.setdefault("ENTROPY_DATABASE_URL", "sqlite://")
os.environ.setdefault("ENTROPY_AUDIT_SAMPLES", "2000")

import pytest  # noqa: E402

from app import schemas  # noqa: E402


@pytest.fixture
def l1_linf() -> schemas.ExponentPair:
    return schemas.ExponentPair(p=1, q=math.inf)


@pytest.fixture
def l1_l2() -> schemas.ExponentPair:
    return schemas.ExponentPair(p=1, q=2)


@pytest.fixture
def scalar_profile() -> schemas.EntropyProfile:
    return schemas.EntropyProfile.scalar_identity(16)


@pytest.fixture
def small_budget() -> schemas.Budget:
    return schemas.Budget(max_centers=200_000, packing_trials=300, audit_samples=1000)

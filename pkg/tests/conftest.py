from __future__ import annotations

import numpy as np
import pytest

from fpharmonics.field import cached_field

SEED = 20260823


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def ctx13():
    return cached_field(13)


@pytest.fixture
def ctx31():
    return cached_field(31)

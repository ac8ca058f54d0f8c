import numpy as np
import pytest

from secoff.config import AgentConfig, EnvConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def env_cfg():
    return EnvConfig()


@pytest.fixture
def agent_cfg():
    return AgentConfig()


@pytest.fixture
def small_env_cfg():
    # 4 users keeps exhaustive checks cheap
    return EnvConfig(n_ues=4, t_slots=5)

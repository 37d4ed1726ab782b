import numpy as np
import pytest
from hypothesis import settings, HealthCheck

from manetsim import SimConfig

# JIT warmup makes the first property example slow; disable deadlines globally.
settings.register_profile(
    "sim", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("sim")


@pytest.fixture
def small_config():
    """Desk-scale network that lives a few hundred steps."""
    return SimConfig(
        n_nodes=80,
        area_side=8.0,
        comm_radius=2.0,
        speed=0.5,
        alpha=0.5,
        gen_rate=0.2,
        capacity=3,
        init_energy=60.0,
        hop_cost=1.0,
        seed=11,
        max_steps=3000,
        transient_cutoff=20,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(123)

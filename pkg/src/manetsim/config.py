"""Simulation parameters and the seeded random streams used by one run."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, asdict

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SimConfig:
    """All model parameters plus run controls for a single simulation.

    Defaults form the reference scenario used by the acceptance suite and
    demos: 1000 nodes on a 20x20 torus, radius 3, speed 0.5, balanced
    routing, capacity 5, 1000 energy units and unit hop cost.
    """

    n_nodes: int = 1000
    area_side: float = 20.0
    comm_radius: float = 3.0
    speed: float = 0.5
    alpha: float = 0.5
    gen_rate: float = 0.1
    capacity: int = 5
    init_energy: float = 1000.0
    hop_cost: float = 1.0
    seed: int = 0
    max_steps: int = 50000
    transient_cutoff: int = 100

    def validate(self) -> "SimConfig":
        if not isinstance(self.n_nodes, (int, np.integer)) or self.n_nodes < 2:
            raise ConfigurationError(f"n_nodes must be an integer >= 2, got {self.n_nodes!r}")
        if not self.area_side > 0:
            raise ConfigurationError(f"area_side must be > 0, got {self.area_side!r}")
        if not self.comm_radius > 0:
            raise ConfigurationError(f"comm_radius must be > 0, got {self.comm_radius!r}")
        if not self.speed >= 0:
            raise ConfigurationError(f"speed must be >= 0, got {self.speed!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not self.gen_rate >= 0:
            raise ConfigurationError(f"gen_rate must be >= 0, got {self.gen_rate!r}")
        if not isinstance(self.capacity, (int, np.integer)) or self.capacity < 1:
            raise ConfigurationError(f"capacity must be an integer >= 1, got {self.capacity!r}")
        if not self.init_energy > 0:
            raise ConfigurationError(f"init_energy must be > 0, got {self.init_energy!r}")
        if not self.hop_cost > 0:
            raise ConfigurationError(f"hop_cost must be > 0, got {self.hop_cost!r}")
        if not isinstance(self.seed, (int, np.integer)):
            raise ConfigurationError(f"seed must be an integer, got {self.seed!r}")
        if not isinstance(self.max_steps, (int, np.integer)) or self.max_steps < 1:
            raise ConfigurationError(f"max_steps must be an integer >= 1, got {self.max_steps!r}")
        if not isinstance(self.transient_cutoff, (int, np.integer)) or self.transient_cutoff < 0:
            raise ConfigurationError(
                f"transient_cutoff must be an integer >= 0, got {self.transient_cutoff!r}"
            )
        return self

    @property
    def hop_budget(self) -> int:
        """Total one-hop transmissions a node can fund: floor(init_energy / hop_cost)."""
        return int(math.floor(self.init_energy / self.hop_cost))

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class RngStreams:
    """Independent substreams derived from one root seed.

    Initialization, per-step turn noise and traffic each get their own
    generator so that changing traffic randomness never perturbs node
    trajectories (and vice versa).
    """

    init: np.random.Generator
    motion: np.random.Generator
    traffic: np.random.Generator
    root_seed: int = field(default=0)

    @classmethod
    def from_seed(cls, seed: int) -> "RngStreams":
        children = np.random.SeedSequence(seed).spawn(3)
        return cls(
            init=np.random.Generator(np.random.PCG64(children[0])),
            motion=np.random.Generator(np.random.PCG64(children[1])),
            traffic=np.random.Generator(np.random.PCG64(children[2])),
            root_seed=int(seed),
        )


def config_field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(SimConfig))

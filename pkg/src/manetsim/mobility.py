"""Node kinematics on the periodic square: initialization, motion, distance.

Positions live on an L x L torus. Each step a node advances by a constant
speed along its current heading, then the heading picks up an independent
uniform perturbation from [-pi/3, pi/3]. Distances use the minimum-image
convention, so wrap-adjacent nodes are close.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig

TURN_NOISE_HALF_WIDTH = np.pi / 3.0


@dataclass
class Kinematics:
    """Positions and headings for all nodes (struct of arrays).

    Invariants: 0 <= x, y < area_side; heading reduced to (-pi, pi].
    """

    x: np.ndarray
    y: np.ndarray
    heading: np.ndarray

    def __len__(self) -> int:
        return self.x.shape[0]

    def copy(self) -> "Kinematics":
        return Kinematics(self.x.copy(), self.y.copy(), self.heading.copy())


def _wrap_positions(a: np.ndarray, area_side: float) -> None:
    np.mod(a, area_side, out=a)
    # np.mod can return exactly area_side for tiny negative inputs
    a[a == area_side] = 0.0


def _reduce_heading(h: np.ndarray) -> None:
    np.mod(h, 2.0 * np.pi, out=h)
    h[h > np.pi] -= 2.0 * np.pi


def init_world(config: SimConfig, rng: np.random.Generator) -> Kinematics:
    """Draw initial kinematics: x, y uniform on [0, L), heading uniform on [-pi, pi)."""
    config.validate()
    n = config.n_nodes
    x = rng.random(n) * config.area_side
    y = rng.random(n) * config.area_side
    heading = rng.random(n) * (2.0 * np.pi) - np.pi
    return Kinematics(x=x, y=y, heading=heading)


def step_positions(world: Kinematics, config: SimConfig, rng: np.random.Generator) -> Kinematics:
    """Advance every node one step, in place.

    Position moves by `speed` along the heading held at the start of the
    step; only then does the heading receive its turn perturbation.
    """
    v = config.speed
    L = config.area_side
    world.x += v * np.cos(world.heading)
    world.y += v * np.sin(world.heading)
    _wrap_positions(world.x, L)
    _wrap_positions(world.y, L)
    noise = (rng.random(len(world)) * 2.0 - 1.0) * TURN_NOISE_HALF_WIDTH
    world.heading += noise
    _reduce_heading(world.heading)
    return world


def toroidal_distance(a, b, area_side: float):
    """Minimum-image distance between points on the torus.

    `a` and `b` are (x, y) pairs or arrays of shape (..., 2). Scalars in,
    float out; arrays in, array out. Never exceeds area_side / sqrt(2).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = np.abs(a - b)
    d = np.minimum(d, area_side - d)
    out = np.sqrt(d[..., 0] * d[..., 0] + d[..., 1] * d[..., 1])
    if out.ndim == 0:
        return float(out)
    return out


def toroidal_distance_xy(ax, ay, bx, by, area_side: float):
    """Componentwise variant of `toroidal_distance` for struct-of-array callers."""
    dx = np.abs(np.asarray(ax, dtype=float) - bx)
    dx = np.minimum(dx, area_side - dx)
    dy = np.abs(np.asarray(ay, dtype=float) - by)
    dy = np.minimum(dy, area_side - dy)
    out = np.sqrt(dx * dx + dy * dy)
    if out.ndim == 0:
        return float(out)
    return out

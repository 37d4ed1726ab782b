"""Fixed-radius neighbor queries over a uniform grid on the torus.

The grid tiles the torus with floor(L / r) cells per side, so every cell is
at least r wide and a query only inspects the 3x3 cell neighborhood around
a node. When fewer than 3 cells fit per side the grid cannot wrap cleanly
and the index falls back to scanning all nodes (correctness over speed).

`brute_force_neighbors` is the independent O(N) reference used to verify
the grid; keep the two implementations separate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import SimConfig
from .mobility import Kinematics, toroidal_distance_xy


def _position_arrays(positions) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(positions, Kinematics):
        return positions.x, positions.y
    x, y = positions
    return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


@dataclass
class GridIndex:
    """Immutable bucket structure for one positions snapshot.

    `cells_per_side` < 3 marks fallback mode: bucket arrays are unused and
    queries scan every node.
    """

    area_side: float
    comm_radius: float
    cells_per_side: int
    cell_side: float
    n_nodes: int
    cell_of: np.ndarray
    bucket_start: np.ndarray
    bucket_items: np.ndarray
    snapshot_step: int = -1
    _bucket_map: dict | None = field(default=None, repr=False)

    @property
    def fallback(self) -> bool:
        return self.cells_per_side < 3

    @property
    def buckets(self) -> dict[tuple[int, int], list[int]]:
        """(cell_x, cell_y) -> node ids. Built on demand; empty cells omitted."""
        if self._bucket_map is None:
            out: dict[tuple[int, int], list[int]] = {}
            nc = self.cells_per_side
            if nc >= 1:
                for c in range(nc * nc):
                    lo, hi = self.bucket_start[c], self.bucket_start[c + 1]
                    if hi > lo:
                        out[(c // nc, c % nc)] = [int(i) for i in self.bucket_items[lo:hi]]
            self._bucket_map = out
        return self._bucket_map


def rebuild_index(positions, config: SimConfig, snapshot_step: int = -1) -> GridIndex:
    """Build a fresh index for the given positions snapshot."""
    x, y = _position_arrays(positions)
    n = x.shape[0]
    L = config.area_side
    r = config.comm_radius
    cells_per_side = int(math.floor(L / r))
    if cells_per_side < 3:
        cell_side = L
        cell_of = np.zeros(n, dtype=np.int64)
        bucket_start = np.zeros(2, dtype=np.int64)
        bucket_items = np.empty(0, dtype=np.int64)
    else:
        cell_side = L / cells_per_side
        cell_of = np.empty(n, dtype=np.int64)
        bucket_start = np.empty(cells_per_side * cells_per_side + 1, dtype=np.int64)
        bucket_items = np.empty(n, dtype=np.int64)
        _kernels.build_grid(x, y, cells_per_side, cell_side, cell_of, bucket_start, bucket_items)
    return GridIndex(
        area_side=L,
        comm_radius=r,
        cells_per_side=cells_per_side,
        cell_side=cell_side,
        n_nodes=n,
        cell_of=cell_of,
        bucket_start=bucket_start,
        bucket_items=bucket_items,
        snapshot_step=snapshot_step,
    )


def neighbors_of(index: GridIndex, node: int, positions, config: SimConfig) -> np.ndarray:
    """All ids within comm_radius of `node` (boundary inclusive), as a sorted array.

    The index must have been built from the same positions snapshot.
    """
    x, y = _position_arrays(positions)
    n = x.shape[0]
    if not 0 <= node < n:
        raise IndexError(f"unknown node id {node} for a {n}-node snapshot")
    out = np.empty(n, dtype=np.int64)
    count = _kernels.neighbors_into(
        x, y, node, config.area_side, config.comm_radius,
        index.cells_per_side, index.cell_side, index.bucket_start, index.bucket_items,
        out,
    )
    found = out[:count]
    found.sort()
    return found


def brute_force_neighbors(positions, node: int, config: SimConfig) -> np.ndarray:
    """Reference implementation: scan all nodes with vectorized distances."""
    x, y = _position_arrays(positions)
    n = x.shape[0]
    if not 0 <= node < n:
        raise IndexError(f"unknown node id {node} for a {n}-node snapshot")
    d = toroidal_distance_xy(x, y, x[node], y[node], config.area_side)
    mask = d <= config.comm_radius
    mask[node] = False
    return np.flatnonzero(mask)

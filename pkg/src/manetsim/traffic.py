"""Packet traffic on the moving network: generation, routing, delivery, death.

One step runs six phases in fixed order: move nodes, rebuild the neighbor
index, generate new packets, deliver queued packets, snapshot observables,
check for death. Generation precedes delivery, so a fresh packet can move
in the step it was created if it reaches the front of a short queue.

A relayed packet goes to the neighbor with the best routing score,
energy^(1-alpha) / distance^alpha (see `routing_weights` for the full
normalized weight vector and `select_next_hop` for the choice rule). With
equal energies this is greedy geographic forwarding for any alpha > 0;
as energies spread, drained neighbors lose ties and load rebalances.

A node pays `hop_cost` for every packet it moves, whether the move is a
relay hop or the final hand-off to the destination. The network is dead as
soon as any node can no longer fund a single hop. Energy bookkeeping is
integer at heart: each node tracks how many hops it has paid for, and its
residual energy is `init_energy - spent * hop_cost`, which keeps the
energy ledger exact for integer-valued parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import SimConfig, RngStreams
from .metrics import StepRecord, congested_count
from .mobility import Kinematics, init_world, step_positions
from .neighbors import GridIndex, rebuild_index

ROUTING_DISTANCE_FLOOR_REL = _kernels.DISTANCE_FLOOR_REL


@dataclass(frozen=True)
class Packet:
    """One packet in flight; `hops` counts transmissions made so far."""

    id: int
    src: int
    dst: int
    born_at: int
    hops: int


@dataclass(frozen=True)
class NodeState:
    """Inspection view of a single node: position, residual energy, FIFO queue."""

    x: float
    y: float
    heading: float
    energy: float
    queue: tuple[Packet, ...]


@dataclass(frozen=True)
class DeliveryStats:
    """Counters for one delivery phase; energy_spent == forwarded * hop_cost.

    `generated` belongs to the generation phase and is zero as returned by
    `deliver_step`; the step composition reports it in the StepRecord.
    """

    forwarded: int
    arrived: int
    generated: int
    energy_spent: float


class _PacketPool:
    """Slab of packet slots chained into per-node FIFO queues.

    Slots are recycled through a free stack; `grow` is called between
    kernel invocations so the compiled code never reallocates.
    """

    __slots__ = ("dst", "src", "born", "hops", "pid", "nxt", "free_stack", "free_top", "capacity")

    def __init__(self, capacity: int):
        capacity = max(int(capacity), 64)
        self.capacity = capacity
        self.dst = np.empty(capacity, dtype=np.int64)
        self.src = np.empty(capacity, dtype=np.int64)
        self.born = np.empty(capacity, dtype=np.int64)
        self.hops = np.empty(capacity, dtype=np.int64)
        self.pid = np.empty(capacity, dtype=np.int64)
        self.nxt = np.empty(capacity, dtype=np.int64)
        self.free_stack = np.arange(capacity - 1, -1, -1, dtype=np.int64)
        self.free_top = capacity

    def ensure_free(self, need: int) -> None:
        if self.free_top >= need:
            return
        old_cap = self.capacity
        new_cap = max(2 * old_cap, old_cap + need)
        grow = new_cap - old_cap
        for name in ("dst", "src", "born", "hops", "pid", "nxt"):
            arr = getattr(self, name)
            setattr(self, name, np.concatenate([arr, np.empty(grow, dtype=np.int64)]))
        new_free = np.empty(new_cap, dtype=np.int64)
        new_free[: self.free_top] = self.free_stack[: self.free_top]
        new_free[self.free_top : self.free_top + grow] = np.arange(
            new_cap - 1, old_cap - 1, -1, dtype=np.int64
        )
        self.free_stack = new_free
        self.free_top += grow
        self.capacity = new_cap


@dataclass
class NetworkState:
    """Mutable state of one run: kinematics, energies, queues, counters."""

    config: SimConfig
    kinematics: Kinematics
    spent: np.ndarray            # int64[N], hops paid for by each node
    pool: _PacketPool
    q_head: np.ndarray
    q_tail: np.ndarray
    q_len: np.ndarray
    t: int = 0
    dead: bool = False
    next_packet_id: int = 0
    hop_log_chunks: list = field(default_factory=list)
    # scratch buffers reused by the delivery kernel
    _order_buf: np.ndarray = None
    _nbr_buf: np.ndarray = None
    _nbr_mask: np.ndarray = None
    _arrived_buf: np.ndarray = None

    @classmethod
    def create(cls, config: SimConfig, rngs: RngStreams) -> "NetworkState":
        config.validate()
        n = config.n_nodes
        world = init_world(config, rngs.init)
        per_step = n * (int(np.floor(config.gen_rate)) + 1)
        return cls(
            config=config,
            kinematics=world,
            spent=np.zeros(n, dtype=np.int64),
            pool=_PacketPool(2 * per_step),
            q_head=np.full(n, -1, dtype=np.int64),
            q_tail=np.full(n, -1, dtype=np.int64),
            q_len=np.zeros(n, dtype=np.int64),
            _order_buf=np.empty(n, dtype=np.int64),
            _nbr_buf=np.empty(n, dtype=np.int64),
            _nbr_mask=np.zeros(n, dtype=np.uint8),
            _arrived_buf=np.empty(max(n, 1024), dtype=np.int64),
        )

    @property
    def energies(self) -> np.ndarray:
        return self.config.init_energy - self.spent * self.config.hop_cost

    @property
    def queue_lengths(self) -> np.ndarray:
        return self.q_len.copy()

    @property
    def total_queued(self) -> int:
        return int(self.q_len.sum())

    def min_hops_left(self) -> int:
        return int(self.config.hop_budget - self.spent.max())

    def hop_log(self) -> np.ndarray:
        if not self.hop_log_chunks:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(self.hop_log_chunks)

    def inject_packet(self, node: int, dst: int, now: int | None = None) -> Packet:
        """Append one packet to a node's queue tail (seeding and test hook)."""
        n = self.config.n_nodes
        if not 0 <= node < n or not 0 <= dst < n or dst == node:
            raise ValueError(f"bad src/dst pair ({node}, {dst}) for {n} nodes")
        self.pool.ensure_free(1)
        pool = self.pool
        pool.free_top -= 1
        slot = pool.free_stack[pool.free_top]
        pool.dst[slot] = dst
        pool.src[slot] = node
        pool.born[slot] = self.t if now is None else now
        pool.hops[slot] = 0
        pool.pid[slot] = self.next_packet_id
        pool.nxt[slot] = -1
        self.next_packet_id += 1
        if self.q_len[node] == 0:
            self.q_head[node] = slot
        else:
            pool.nxt[self.q_tail[node]] = slot
        self.q_tail[node] = slot
        self.q_len[node] += 1
        return Packet(
            id=int(pool.pid[slot]), src=node, dst=dst,
            born_at=int(pool.born[slot]), hops=0,
        )

    def node(self, i: int) -> NodeState:
        if not 0 <= i < self.config.n_nodes:
            raise IndexError(f"unknown node id {i}")
        queue = []
        slot = self.q_head[i]
        pool = self.pool
        while slot != -1:
            queue.append(
                Packet(
                    id=int(pool.pid[slot]),
                    src=int(pool.src[slot]),
                    dst=int(pool.dst[slot]),
                    born_at=int(pool.born[slot]),
                    hops=int(pool.hops[slot]),
                )
            )
            slot = pool.nxt[slot]
        return NodeState(
            x=float(self.kinematics.x[i]),
            y=float(self.kinematics.y[i]),
            heading=float(self.kinematics.heading[i]),
            energy=float(self.config.init_energy - self.spent[i] * self.config.hop_cost),
            queue=tuple(queue),
        )


def routing_weights(
    energies, distances_to_dst, alpha: float, area_side: float | None = None
) -> np.ndarray:
    """Next-hop distribution over a sender's neighbors.

    Weight of neighbor i is (E_i / sum E)^(1-alpha) / (l_i / sum l)^alpha,
    normalized to sum to one; equivalently P_i is proportional to
    E_i^(1-alpha) * l_i^(-alpha). alpha=0 routes by residual energy alone,
    alpha=1 by inverse distance to the destination alone. Distances are
    floored at a 1e-9 fraction of the area side (or of the largest
    distance, when the area is not given) so co-located nodes cannot
    divide by zero.
    """
    e = np.asarray(energies, dtype=float)
    l = np.asarray(distances_to_dst, dtype=float)
    if e.size == 0:
        raise ValueError("routing_weights requires a non-empty neighbor set")
    if e.shape != l.shape:
        raise ValueError("energies and distances must align")
    scale = float(area_side) if area_side is not None else float(l.max())
    floor = ROUTING_DISTANCE_FLOOR_REL * scale
    if floor <= 0.0:
        floor = np.finfo(float).tiny
    l = np.maximum(l, floor)
    w = (e / e.sum()) ** (1.0 - alpha) / (l / l.sum()) ** alpha
    total = w.sum()
    if np.isfinite(total) and total > 0:
        return w / total
    return np.full(e.shape, 1.0 / e.size)


def select_next_hop(energies, distances_to_dst, alpha: float, area_side: float | None = None) -> int:
    """Index of the neighbor a sender forwards to: the largest routing weight.

    Ties keep the earliest index, matching the delivery kernel's scan order.
    """
    w = routing_weights(energies, distances_to_dst, alpha, area_side)
    return int(np.argmax(w))


def generate_packets(
    state: NetworkState, config: SimConfig, rng: np.random.Generator, now: int
) -> int:
    """Append this step's new packets to every node's queue tail.

    Each node creates floor(gen_rate) packets plus one more with
    probability equal to the fractional part; destinations are uniform
    over the other nodes. Returns the total created.
    """
    whole = int(np.floor(config.gen_rate))
    frac = config.gen_rate - whole
    state.pool.ensure_free(config.n_nodes * (whole + 1))
    pool = state.pool
    total, next_pid, free_top = _kernels.generate_kernel(
        config.n_nodes, whole, frac, now, state.next_packet_id,
        pool.dst, pool.src, pool.born, pool.hops, pool.pid, pool.nxt,
        state.q_head, state.q_tail, state.q_len, pool.free_stack, pool.free_top,
        rng,
    )
    state.next_packet_id = int(next_pid)
    pool.free_top = int(free_top)
    return int(total)


def deliver_step(
    state: NetworkState,
    index: GridIndex,
    config: SimConfig,
    rng: np.random.Generator,
    now: int,
) -> DeliveryStats:
    """Run one delivery phase; the index must match the current positions."""
    pool = state.pool
    max_arrivals = int(min(state.q_len.sum(), config.n_nodes * config.capacity))
    if state._arrived_buf.shape[0] < max_arrivals:
        state._arrived_buf = np.empty(max_arrivals, dtype=np.int64)
    forwarded, arrived, free_top = _kernels.deliver_kernel(
        state.kinematics.x, state.kinematics.y,
        config.area_side, config.comm_radius, config.alpha, config.capacity,
        config.init_energy, config.hop_cost, config.hop_budget, state.spent,
        pool.dst, pool.hops, pool.nxt,
        state.q_head, state.q_tail, state.q_len, pool.free_stack, pool.free_top,
        index.cells_per_side, index.cell_side, index.bucket_start, index.bucket_items,
        state._order_buf, state._nbr_buf, state._nbr_mask,
        state._arrived_buf,
        rng,
    )
    pool.free_top = int(free_top)
    if arrived:
        state.hop_log_chunks.append(state._arrived_buf[:arrived].copy())
    return DeliveryStats(
        forwarded=int(forwarded),
        arrived=int(arrived),
        generated=0,
        energy_spent=int(forwarded) * config.hop_cost,
    )


def is_dead(nodes, config: SimConfig) -> bool:
    """True once any node can no longer pay for one hop (min energy < hop_cost)."""
    energies = getattr(nodes, "energies", nodes)
    return bool(np.asarray(energies).min() < config.hop_cost)


def traffic_step(state: NetworkState, config: SimConfig, rngs: RngStreams) -> StepRecord:
    """Advance the network one step and return its observables record."""
    if state.dead:
        raise RuntimeError("traffic_step called on a dead network")
    state.t += 1
    step_positions(state.kinematics, config, rngs.motion)
    index = rebuild_index(state.kinematics, config, snapshot_step=state.t)
    generated = generate_packets(state, config, rngs.traffic, state.t)
    n_c = congested_count(state.q_len, config)
    stats = deliver_step(state, index, config, rngs.traffic, state.t)
    total_spent = int(state.spent.sum())
    e_total = config.n_nodes * config.init_energy - total_spent * config.hop_cost
    e_max = config.init_energy - int(state.spent.min()) * config.hop_cost
    e_min = config.init_energy - int(state.spent.max()) * config.hop_cost
    if state.min_hops_left() <= 0:
        state.dead = True
    return StepRecord(
        t=state.t,
        S=state.total_queued,
        n_c=n_c,
        E_total=e_total,
        E_max=e_max,
        E_min=e_min,
        generated=generated,
        forwarded=stats.forwarded,
        arrived=stats.arrived,
    )

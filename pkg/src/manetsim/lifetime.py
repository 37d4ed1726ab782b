"""Analytic network-lifetime formulas and the nonlinear correction factor.

The network dies when the first node runs out of energy. With D packet
moves per step network-wide, the energy budget fixes the lifetime:

    T = (E_total(0) - E_total(T)) / (D * hop_cost)

In free flow D is N * gen_rate * tau0 (every packet needs tau0 hops); under
total congestion every node moves `capacity` packets per step. One formula
covers both regimes through the effective per-node throughput
Omega = min(gen_rate * tau0, capacity):

    T = k * init_energy / (Omega * hop_cost)

with a dimensionless factor k absorbing whatever the clean regimes miss
(transients, end-of-life load concentration, partial congestion).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class LifetimeInputs:
    """Bundle of the quantities the formulas consume; mirrors RunSummary fields."""

    init_energy: float
    hop_cost: float
    capacity: float
    gen_rate: float
    tau0: float
    energy_range_at_death: float
    n_nodes: int
    avg_deliveries_per_step: float

    @property
    def omega(self) -> float:
        return effective_throughput(self.gen_rate, self.tau0, self.capacity)


def effective_throughput(gen_rate: float, tau0: float, capacity: float) -> float:
    """Omega: per-node packet moves per step, min(gen_rate * tau0, capacity)."""
    return min(gen_rate * tau0, capacity)


def predict_general(
    e_total_start: float, e_total_end: float, deliveries_per_step: float, hop_cost: float
) -> float:
    """Lifetime from the exact energy ledger: spent energy over spend rate."""
    if deliveries_per_step <= 0:
        raise ValueError(f"deliveries_per_step must be > 0, got {deliveries_per_step!r}")
    if hop_cost <= 0:
        raise ValueError(f"hop_cost must be > 0, got {hop_cost!r}")
    if not e_total_start >= e_total_end >= 0:
        raise ValueError("need e_total_start >= e_total_end >= 0")
    return (e_total_start - e_total_end) / (deliveries_per_step * hop_cost)


def predict_no_congestion(
    init_energy: float, energy_range_at_death: float,
    gen_rate: float, tau0: float, hop_cost: float,
) -> float:
    """Free-flow lifetime: (E0 - R(T)/2) / (gen_rate * tau0 * hop_cost).

    Assumes residual energy at death is spread evenly between 0 and R(T),
    so the mean residue per node is R(T)/2.
    """
    denom = gen_rate * tau0 * hop_cost
    if denom <= 0:
        raise ValueError(f"gen_rate * tau0 * hop_cost must be > 0, got {denom!r}")
    return (init_energy - energy_range_at_death / 2.0) / denom


def predict_absolute(init_energy: float, capacity: float, hop_cost: float) -> float:
    """Fully congested lifetime: every node spends capacity * hop_cost per step."""
    if capacity <= 0 or hop_cost <= 0 or init_energy <= 0:
        raise ValueError("init_energy, capacity and hop_cost must all be > 0")
    return init_energy / (capacity * hop_cost)


def predict_unified(
    init_energy: float, gen_rate: float, tau0: float,
    capacity: float, hop_cost: float, k: float,
) -> float:
    """Lifetime for any regime: k * init_energy / (Omega * hop_cost)."""
    if k <= 0:
        raise ValueError(f"k must be > 0, got {k!r}")
    omega = effective_throughput(gen_rate, tau0, capacity)
    if omega <= 0 or hop_cost <= 0:
        raise ValueError("Omega and hop_cost must be > 0")
    return k * init_energy / (omega * hop_cost)


def extract_k(
    lifetime: float, init_energy: float, gen_rate: float,
    tau0: float, capacity: float, hop_cost: float,
) -> float:
    """Invert the unified formula: k = T * Omega * hop_cost / init_energy."""
    if lifetime <= 0:
        raise ValueError(f"lifetime must be > 0, got {lifetime!r}")
    omega = effective_throughput(gen_rate, tau0, capacity)
    if omega <= 0 or hop_cost <= 0 or init_energy <= 0:
        raise ValueError("Omega, hop_cost and init_energy must be > 0")
    return lifetime * omega * hop_cost / init_energy

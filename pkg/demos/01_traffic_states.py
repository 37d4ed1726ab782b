"""Four traffic states on a small network.

Sweeping the packet generation rate moves the network through four
regimes: queued packets S(t) stay flat (no congestion), grow faster and
faster (slow), grow exponentially then linearly (fast), or grow linearly
from the start (absolute). This script runs one seeded simulation per
regime, prints the shape of S(t) and the congested-node count, and leaves
the full time series as CSV files under demos/out/.
"""

import numpy as np

from manetsim import SimConfig, emit_outputs, run_simulation

BASE = SimConfig(
    n_nodes=200, area_side=10.0, comm_radius=2.0, speed=0.5, alpha=0.5,
    capacity=3, init_energy=400.0, hop_cost=1.0, seed=7, transient_cutoff=50,
)

RATES = [0.1, 0.8, 1.0, 2.0]


def sparkline(values, width=48):
    values = np.asarray(values, dtype=float)
    idx = np.linspace(0, len(values) - 1, width).astype(int)
    v = values[idx]
    lo, hi = v.min(), v.max()
    ticks = " .:-=+*#%@"
    if hi == lo:
        return ticks[1] * width
    scaled = ((v - lo) / (hi - lo) * (len(ticks) - 1)).astype(int)
    return "".join(ticks[s] for s in scaled)


def main():
    print(f"network: N={BASE.n_nodes}, L={BASE.area_side}, r={BASE.comm_radius}, "
          f"C={BASE.capacity}, E0={BASE.init_energy}")
    print()
    for rho in RATES:
        cfg = SimConfig(**{**BASE.as_dict(), "gen_rate": rho})
        series, summary = run_simulation(cfg)
        out_dir = f"demos/out/state_rho_{rho}"
        emit_outputs(series, out_dir)
        emit_outputs(summary, out_dir)
        print(f"rho={rho:<4}  state={summary.state.name:<19}  T={summary.lifetime}  "
              f"delta_S={summary.delta_s:8.2f}  peak n_c={int(series.n_c.max())}")
        print(f"  S(t)   |{sparkline(series.S)}|  final S={int(series.S[-1])}")
        print(f"  n_c(t) |{sparkline(series.n_c)}|")
        print()
    print("time series written to demos/out/state_rho_*/series.csv")


if __name__ == "__main__":
    main()

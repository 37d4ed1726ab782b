"""Locating the congestion-state boundaries.

The three critical generation rates separate no/slow, slow/fast and
fast/absolute congestion. Each boundary is found by bisecting the
majority-vote classification of replicated runs; shared replica seeds
make the search deterministic for a given config seed.
"""

from manetsim import SimConfig, find_critical_rates

BASE = SimConfig(
    n_nodes=200, area_side=10.0, comm_radius=2.0, speed=0.5, alpha=0.5,
    capacity=3, init_energy=400.0, hop_cost=1.0, seed=80, transient_cutoff=50,
)


def main():
    rho_s, rho_f, rho_a = find_critical_rates(
        BASE, rho_lo=0.05, rho_hi=4.0, replicas=5, tolerance=0.1
    )
    print(f"slow congestion sets in at     rho_s ~ {rho_s:.2f}")
    print(f"fast congestion sets in at     rho_f ~ {rho_f:.2f}")
    print(f"absolute congestion sets in at rho_a ~ {rho_a:.2f}")
    print()
    print("below rho_s queues stay flat for the whole lifetime; past rho_a")
    print("every node is congested almost immediately and the lifetime sits")
    print(f"at its floor E0/(C*dE) = {BASE.init_energy / BASE.capacity:.0f} steps.")


if __name__ == "__main__":
    main()

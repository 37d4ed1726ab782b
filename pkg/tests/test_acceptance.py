"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. The reference scenario is
N=1000, L=20, r=3, v=0.5, alpha=0.5, C=5, E0=1000, hop cost 1. Heavy
ensembles are shared through session fixtures; everything is seeded, so
the suite is deterministic. Expect tens of minutes on one core.
"""

import numpy as np
import pytest
from scipy import stats

from manetsim import (
    SimConfig,
    brute_force_neighbors,
    find_critical_rates,
    neighbors_of,
    predict_no_congestion,
    rebuild_index,
    routing_weights,
    run_replicas,
    run_simulation,
    sweep,
)
from manetsim.cli import main as cli_main
from manetsim.config import RngStreams
from manetsim.traffic import NetworkState, traffic_step

DEFAULTS = SimConfig()  # the reference parameter set
N_RHO_ABS = DEFAULTS.n_nodes * 5.0
TAU0_REFERENCE = 3.275


@pytest.fixture
def report(capfd):
    """Criterion reporter: prints its PASS/FAIL line past pytest's capture."""

    def _report(criterion: str, ok: bool, detail: str) -> None:
        with capfd.disabled():
            print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}",
                  flush=True)
        assert ok, f"criterion {criterion}: {detail}"

    return _report


@pytest.fixture(scope="session")
def ens_absolute():
    """100 replicas at rho=5 (absolute congestion)."""
    cfg = SimConfig(gen_rate=5.0)
    return run_replicas(cfg, 100, seed_base=10_000)


@pytest.fixture(scope="session")
def ens_freeflow():
    """30 replicas at rho=0.1 (no congestion)."""
    cfg = SimConfig(gen_rate=0.1)
    return run_replicas(cfg, 30, seed_base=20_000)


class TestCriterion1AbsoluteLifetime:
    def test_mean_lifetime_200(self, report, ens_absolute):
        assert all(s.died for s in ens_absolute.summaries)
        mean_t = ens_absolute.mean("lifetime")
        ok = abs(mean_t - 200.0) <= 2.0
        report("1 (absolute-congestion lifetime)", ok,
               f"mean T={mean_t:.3f} over 100 replicas, target 200 +-1%")


class TestCriterion2CharacteristicTime:
    def test_tau0_reference_value(self, report, ens_freeflow):
        mean_tau = ens_freeflow.mean("tau0")
        lo, hi = TAU0_REFERENCE * 0.95, TAU0_REFERENCE * 1.05
        ok = lo <= mean_tau <= hi
        report("2 (characteristic time)", ok,
               f"mean tau0={mean_tau:.4f} over 30 replicas, target {TAU0_REFERENCE} +-5%")


class TestCriterion3FreeFlowLifetimeFormula:
    def test_simulated_T_matches_formula_per_run(self, report, ens_freeflow):
        worst = 0.0
        for s in ens_freeflow.summaries:
            pred = predict_no_congestion(
                s.config["init_energy"], s.energy_range_final,
                s.config["gen_rate"], s.tau0, s.config["hop_cost"],
            )
            rel = abs(s.lifetime - pred) / pred
            worst = max(worst, rel)
        ok = worst <= 0.10
        report("3 (free-flow lifetime self-consistency)", ok,
               f"worst per-run |T_sim - T_eq|/T_eq = {worst:.4f}, limit 0.10")


class TestCriterion4KRegimes:
    def test_k_absolute_regime(self, report, ens_absolute):
        mean_k = ens_absolute.mean("k")
        ok = abs(mean_k - 1.0) <= 0.01
        report("4a (k in absolute regime)", ok, f"mean k={mean_k:.4f}, target 1.00 +-0.01")

    def test_k_free_flow_regime(self, report, ens_freeflow):
        ks = ens_freeflow.values("k")
        mean_k = float(ks.mean())
        ok = 0.9 <= mean_k < 1.0
        report("4b (k in no-congestion regime)", ok,
               f"mean k={mean_k:.4f} (runs span [{ks.min():.4f}, {ks.max():.4f}]); required [0.9, 1)")


class TestCriterion5DeltaSLimits:
    def test_free_flow_delta_s_near_zero(self, report, ens_freeflow):
        mean_ds = ens_freeflow.mean("delta_s")
        limit = 0.01 * DEFAULTS.n_nodes * 0.1
        ok = mean_ds <= limit
        report("5a (delta_S at rho=0.1)", ok,
               f"mean delta_S={mean_ds:.4f} <= {limit:.2f} (0.01*N*rho)")

    def test_absolute_delta_s_approaches_generation_rate(self, report, ens_absolute):
        mean_ds = ens_absolute.mean("delta_s")
        rel_gap = abs(mean_ds - N_RHO_ABS) / N_RHO_ABS
        ok = rel_gap <= 0.05
        report("5b (delta_S at rho=5)", ok,
               f"mean delta_S={mean_ds:.1f}, N*rho={N_RHO_ABS:.0f}, gap {rel_gap:.3f}; limit 0.05")


class TestCriterion6CriticalRates:
    def test_ordering_and_seed_stability(self, report):
        tol = 0.25
        a = find_critical_rates(SimConfig(seed=0), 0.1, 5.0, replicas=5, tolerance=tol)
        b = find_critical_rates(SimConfig(seed=50_000), 0.1, 5.0, replicas=5, tolerance=tol)
        ordered = a[0] < a[1] < a[2] and b[0] < b[1] < b[2]
        drift = max(abs(x - y) for x, y in zip(a, b))
        ok = ordered and drift <= 2 * tol
        report("6 (critical-rate ordering & stability)", ok,
               f"seedset A: rho_s={a[0]:.3f} rho_f={a[1]:.3f} rho_a={a[2]:.3f}; "
               f"seedset B: {b[0]:.3f}/{b[1]:.3f}/{b[2]:.3f}; max drift {drift:.3f} <= {2*tol}")


def _spearman(xs, means):
    rho, _ = stats.spearmanr(xs, means)
    return float(rho)


class TestCriterion7Trends:
    N_RUNS = 30

    def _sweep_means(self, parameter, values, base=None):
        table = sweep(base or DEFAULTS, parameter, values, n_runs=self.N_RUNS)
        tau = [cell.mean("tau0") for cell in table.cells]
        life = [cell.mean("lifetime") for cell in table.cells]
        return tau, life

    def test_radius_trend(self, report):
        values = [2.4, 2.7, 3.0, 3.4, 4.0]
        tau, life = self._sweep_means("r", values)
        s_tau = _spearman(values, tau)
        s_life = _spearman(values, life)
        ok = s_tau <= -0.9 and s_life >= 0.9
        report("7a (radius trend)", ok,
               f"tau0 spearman={s_tau:.2f} (<=-0.9), T spearman={s_life:.2f} (>=0.9); "
               f"tau0={[f'{v:.2f}' for v in tau]}, T={[f'{v:.0f}' for v in life]}")

    def test_area_trend(self, report):
        values = [16.0, 18.0, 20.0, 22.0, 24.0]
        tau, life = self._sweep_means("L", values)
        s_tau = _spearman(values, tau)
        s_life = _spearman(values, life)
        ok = s_tau >= 0.9 and s_life <= -0.9
        report("7b (area trend)", ok,
               f"tau0 spearman={s_tau:.2f} (>=0.9), T spearman={s_life:.2f} (<=-0.9); "
               f"tau0={[f'{v:.2f}' for v in tau]}, T={[f'{v:.0f}' for v in life]}")

    def test_node_count_trend(self, report):
        values = [600, 800, 1000, 1200, 1400]
        tau, life = self._sweep_means("N", values)
        s_tau = _spearman(values, tau)
        s_life = _spearman(values, life)
        ok = s_tau <= -0.9 and s_life >= 0.9
        report("7c (node-count trend)", ok,
               f"tau0 spearman={s_tau:.2f} (<=-0.9), T spearman={s_life:.2f} (>=0.9); "
               f"tau0={[f'{v:.2f}' for v in tau]}, T={[f'{v:.0f}' for v in life]}")

    def test_rate_trend(self, report):
        values = [0.2, 0.5, 1.0, 2.0, 5.0]
        _, life = self._sweep_means("rho", values)
        s_life = _spearman(values, life)
        ok = s_life <= -0.9
        report("7d (generation-rate trend)", ok,
               f"T spearman={s_life:.2f} (<=-0.9); T={[f'{v:.0f}' for v in life]}")

    def test_single_hop_when_radius_covers_torus(self, report):
        # r >= L/sqrt(2): every pair is adjacent, every delivery is one hop
        cfg = SimConfig(comm_radius=15.0, seed=4)
        _, summary = run_simulation(cfg, keep_series=False)
        ok = summary.tau0 == 1.0
        report("7e (tau0=1 for full-coverage radius)", ok,
               f"tau0={summary.tau0} with r=15 >= L/sqrt(2)={20/np.sqrt(2):.3f}")


class TestCriterion8ConservationSuite:
    def test_exact_ledgers_on_small_networks(self, report):
        checked = 0
        for seed, rate, cap, e0 in [(1, 0.7, 2, 30), (2, 1.5, 3, 25), (3, 0.0, 1, 10)]:
            cfg = SimConfig(
                n_nodes=40, area_side=6.0, comm_radius=2.0, gen_rate=rate,
                capacity=cap, init_energy=float(e0), seed=seed, max_steps=200,
            )
            rngs = RngStreams.from_seed(cfg.seed)
            state = NetworkState.create(cfg, rngs)
            gen = arr = fwd = 0
            while not state.dead and state.t < cfg.max_steps:
                rec = traffic_step(state, cfg, rngs)
                gen += rec.generated
                arr += rec.arrived
                fwd += rec.forwarded
                assert gen == arr + rec.S, "packet ledger broke"
                spent_energy = 40 * cfg.init_energy - rec.E_total
                assert spent_energy == fwd * cfg.hop_cost, "energy ledger broke"
                checked += 1
        report("8a (exact conservation ledgers)", True,
               f"energy and packet ledgers exact over {checked} steps, 3 configs")

    def test_routing_weights_form_distribution(self, report):
        rng = np.random.default_rng(99)
        for _ in range(300):
            n = rng.integers(1, 40)
            e = rng.uniform(0.1, 1000.0, n)
            l = rng.uniform(0.01, 25.0, n)
            alpha = rng.uniform(0.0, 1.0)
            w = routing_weights(e, l, alpha)
            assert w.shape == (n,) and np.all(w >= 0)
            assert abs(w.sum() - 1.0) <= 1e-12
        report("8b (routing weights are distributions)", True,
               "300 random weight vectors: nonnegative, sum to 1 +-1e-12")

    def test_grid_equals_brute_force_200_instances(self, report):
        rng = np.random.default_rng(7)
        for case in range(200):
            n = int(rng.integers(2, 120))
            L = float(rng.uniform(1.0, 30.0))
            r = float(rng.uniform(0.2, L))
            cfg = SimConfig(n_nodes=max(n, 2), area_side=L, comm_radius=r)
            pos = (rng.random(n) * L, rng.random(n) * L)
            idx = rebuild_index(pos, cfg)
            for i in range(n):
                got = neighbors_of(idx, i, pos, cfg)
                want = brute_force_neighbors(pos, i, cfg)
                assert np.array_equal(got, want), f"instance {case}, node {i}"
        report("8c (grid index == brute force)", True,
               "200 random instances, exact set equality for every node")


class TestCriterion9CliDeterminism:
    ARGS = [
        "--nodes", "60", "--area", "7", "--radius", "2", "--rate", "0.4",
        "--capacity", "3", "--energy", "60", "--seed", "21", "--max-steps", "3000",
    ]

    def test_run_and_sweep_byte_identical(self, report, tmp_path):
        dirs = [tmp_path / d for d in ("r1", "r2", "s1", "s2")]
        assert cli_main(["run", *self.ARGS, "--out", str(dirs[0])]) == 0
        assert cli_main(["run", *self.ARGS, "--out", str(dirs[1])]) == 0
        sweep_args = ["sweep", "rho", "0.2,0.6", *self.ARGS, "--runs", "3"]
        assert cli_main([*sweep_args, "--out", str(dirs[2])]) == 0
        assert cli_main([*sweep_args, "--out", str(dirs[3]), "--jobs", "2"]) == 0
        same = (
            (dirs[0] / "series.csv").read_bytes() == (dirs[1] / "series.csv").read_bytes()
            and (dirs[0] / "summary.json").read_bytes() == (dirs[1] / "summary.json").read_bytes()
            and (dirs[2] / "sweep.csv").read_bytes() == (dirs[3] / "sweep.csv").read_bytes()
            and (dirs[2] / "sweep.json").read_bytes() == (dirs[3] / "sweep.json").read_bytes()
        )
        report("9 (CLI byte determinism)", same,
               "run and sweep outputs byte-identical across repeats (and --jobs)")

"""Run driver: single simulations, replicated ensembles, parameter sweeps."""

from __future__ import annotations

import gc
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from .config import SimConfig, RngStreams
from .errors import ConfigurationError, InsufficientDataError
from .lifetime import extract_k
from .metrics import (
    ClassifierThresholds,
    DEFAULT_THRESHOLDS,
    RunSeries,
    TrafficState,
    characteristic_time,
    classify_state,
    delta_s,
)
from .traffic import NetworkState, traffic_step

SWEEPABLE = {
    "rho": "gen_rate",
    "r": "comm_radius",
    "v": "speed",
    "alpha": "alpha",
    "L": "area_side",
    "N": "n_nodes",
}

# numeric RunSummary fields aggregated by run_replicas / sweep
AGGREGATE_FIELDS = (
    "lifetime",
    "delta_s",
    "tau0",
    "k",
    "energy_range_final",
    "generated_total",
    "arrived_total",
    "forwarded_total",
)


@contextmanager
def _gc_paused():
    """Suspend cyclic GC for the step loop; it allocates fast and cycle-free."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


@dataclass(frozen=True)
class RunSummary:
    """End-of-run aggregates for one seeded simulation.

    `lifetime` (and hence `k`) is absent when the run hit max_steps without
    a node dying; `tau0` is absent when nothing was delivered; `state` is
    absent when the run was too short to classify.
    """

    lifetime: int | None
    died: bool
    delta_s: float | None
    tau0: float | None
    k: float | None
    state: TrafficState | None
    energy_range_final: float
    generated_total: int
    arrived_total: int
    forwarded_total: int
    seed: int
    config: dict
    thresholds: dict


def run_simulation(
    config: SimConfig,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
    keep_series: bool = True,
) -> tuple[RunSeries | None, RunSummary]:
    """Step the network until the first node dies or max_steps is reached.

    Deterministic for a given config: all randomness comes from substreams
    of config.seed. Set keep_series=False to drop the per-step arrays and
    save memory in large ensembles (the summary is unaffected).
    """
    config.validate()
    rngs = RngStreams.from_seed(config.seed)
    state = NetworkState.create(config, rngs)

    n_steps_cap = config.max_steps
    cols = {
        "t": np.zeros(n_steps_cap + 1, dtype=np.int64),
        "S": np.zeros(n_steps_cap + 1, dtype=np.int64),
        "n_c": np.zeros(n_steps_cap + 1, dtype=np.int64),
        "E_total": np.zeros(n_steps_cap + 1, dtype=np.float64),
        "E_max": np.zeros(n_steps_cap + 1, dtype=np.float64),
        "E_min": np.zeros(n_steps_cap + 1, dtype=np.float64),
        "generated": np.zeros(n_steps_cap + 1, dtype=np.int64),
        "forwarded": np.zeros(n_steps_cap + 1, dtype=np.int64),
        "arrived": np.zeros(n_steps_cap + 1, dtype=np.int64),
    }
    cols["E_total"][0] = config.n_nodes * config.init_energy
    cols["E_max"][0] = config.init_energy
    cols["E_min"][0] = config.init_energy

    # a node that cannot fund a single hop means the network is born dead
    state.dead = config.hop_budget <= 0
    with _gc_paused():
        while not state.dead and state.t < config.max_steps:
            rec = traffic_step(state, config, rngs)
            i = rec.t
            cols["t"][i] = rec.t
            cols["S"][i] = rec.S
            cols["n_c"][i] = rec.n_c
            cols["E_total"][i] = rec.E_total
            cols["E_max"][i] = rec.E_max
            cols["E_min"][i] = rec.E_min
            cols["generated"][i] = rec.generated
            cols["forwarded"][i] = rec.forwarded
            cols["arrived"][i] = rec.arrived

    end = state.t
    series = RunSeries(
        t=cols["t"][: end + 1],
        S=cols["S"][: end + 1],
        n_c=cols["n_c"][: end + 1],
        E_total=cols["E_total"][: end + 1],
        E_max=cols["E_max"][: end + 1],
        E_min=cols["E_min"][: end + 1],
        generated=cols["generated"][: end + 1],
        forwarded=cols["forwarded"][: end + 1],
        arrived=cols["arrived"][: end + 1],
        hop_log=state.hop_log(),
        config=config,
        died=state.dead,
    )
    summary = summarize_run(series, thresholds)
    return (series if keep_series else None), summary


def summarize_run(series: RunSeries, thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS) -> RunSummary:
    config = series.config
    died = series.died
    lifetime = series.end_step if died else None
    try:
        growth = delta_s(series, config.transient_cutoff)
    except InsufficientDataError:
        growth = None
    try:
        tau0 = characteristic_time(series.hop_log)
    except InsufficientDataError:
        tau0 = None
    try:
        state = classify_state(series, config, thresholds)
    except InsufficientDataError:
        state = None
    k = None
    if lifetime is not None and tau0 is not None and config.gen_rate > 0:
        k = extract_k(
            lifetime, config.init_energy, config.gen_rate,
            tau0, config.capacity, config.hop_cost,
        )
    return RunSummary(
        lifetime=lifetime,
        died=died,
        delta_s=growth,
        tau0=tau0,
        k=k,
        state=state,
        energy_range_final=float(series.E_max[-1] - series.E_min[-1]),
        generated_total=int(series.generated.sum()),
        arrived_total=int(series.arrived.sum()),
        forwarded_total=int(series.forwarded.sum()),
        seed=config.seed,
        config=config.as_dict(),
        thresholds=thresholds.as_dict(),
    )


@dataclass
class ReplicaSet:
    """Summaries of n independent runs of one configuration (seeds differ)."""

    config: dict
    seed_base: int
    summaries: list

    @property
    def n_runs(self) -> int:
        return len(self.summaries)

    def values(self, field: str) -> np.ndarray:
        vals = [getattr(s, field) for s in self.summaries]
        return np.array([v for v in vals if v is not None], dtype=float)

    def mean(self, field: str) -> float | None:
        v = self.values(field)
        return float(v.mean()) if v.size else None

    def stderr(self, field: str) -> float | None:
        """Standard error of the mean; absent for fewer than two samples."""
        v = self.values(field)
        if v.size < 2:
            return None
        return float(v.std(ddof=1) / math.sqrt(v.size))

    def state_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for s in self.summaries:
            name = s.state.name if s.state is not None else "UNCLASSIFIED"
            counts[name] = counts.get(name, 0) + 1
        return counts

    def majority_state(self) -> str | None:
        counts = self.state_counts()
        if not counts:
            return None
        return max(sorted(counts), key=lambda k: counts[k])

    def to_row(self) -> dict:
        row: dict = {
            "n_runs": self.n_runs,
            "seed_base": self.seed_base,
            "died_count": sum(1 for s in self.summaries if s.died),
            "state_counts": self.state_counts(),
            "state_majority": self.majority_state(),
        }
        for field in AGGREGATE_FIELDS:
            row[f"{field}_mean"] = self.mean(field)
            row[f"{field}_stderr"] = self.stderr(field)
        return row


def run_replicas(
    config: SimConfig,
    n_runs: int,
    seed_base: int | None = None,
    jobs: int = 1,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
) -> ReplicaSet:
    """Run n_runs independent simulations seeded seed_base .. seed_base+n-1.

    Replicas may execute on a thread pool; results are collected in seed
    order, so the aggregation never depends on scheduling.
    """
    if n_runs < 1:
        raise ConfigurationError(f"n_runs must be >= 1, got {n_runs}")
    if seed_base is None:
        seed_base = config.seed
    configs = [replace(config, seed=seed_base + i) for i in range(n_runs)]

    def one(cfg: SimConfig) -> RunSummary:
        return run_simulation(cfg, thresholds=thresholds, keep_series=False)[1]

    if jobs > 1 and n_runs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(one, configs))
    else:
        summaries = [one(cfg) for cfg in configs]
    return ReplicaSet(config=config.as_dict(), seed_base=seed_base, summaries=summaries)


@dataclass
class SweepTable:
    """One replicated ensemble per swept parameter value, in input order."""

    parameter: str
    values: list
    cells: list  # ReplicaSet per value
    n_runs: int

    def rows(self) -> list[dict]:
        out = []
        for value, cell in zip(self.values, self.cells):
            row = {"parameter": self.parameter, "value": value}
            row.update(cell.to_row())
            out.append(row)
        return out


def sweep(
    base_config: SimConfig,
    parameter: str,
    values,
    n_runs: int,
    jobs: int = 1,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
) -> SweepTable:
    """Replicated runs across one swept parameter (rho, r, v, alpha, L or N).

    Every cell reuses the same seed block, so parameter effects are
    compared under common random numbers.
    """
    if parameter not in SWEEPABLE:
        raise ConfigurationError(
            f"unknown sweep parameter {parameter!r}; choose one of {sorted(SWEEPABLE)}"
        )
    values = list(values)
    if not values:
        return SweepTable(parameter=parameter, values=[], cells=[], n_runs=n_runs)
    field = SWEEPABLE[parameter]
    cells = []
    for value in values:
        cast = int(value) if field == "n_nodes" else float(value)
        cfg = replace(base_config, **{field: cast})
        cfg.validate()
        cells.append(run_replicas(cfg, n_runs, jobs=jobs, thresholds=thresholds))
    return SweepTable(parameter=parameter, values=values, cells=cells, n_runs=n_runs)

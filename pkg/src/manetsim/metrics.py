"""Per-step observables, run series, congestion-state classification.

The classifier turns a finished run into one of four traffic states from
the shape of S(t) (total queued packets) and n_c(t) (congested nodes):

* no congestion: S flat after the initial fill, n_c essentially zero;
* slow congestion: S keeps growing but some nodes never congest;
* fast congestion: congestion spreads to (nearly) all nodes mid-run;
* absolute congestion: (nearly) all nodes congest right from the start.

All thresholds live in `ClassifierThresholds` so results are auditable.
The last few percent of steps are excluded from classification windows:
end-of-life load spikes (the few surviving high-energy nodes attract all
traffic) are an artifact of dying, not a congestion signature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, asdict, replace

import numpy as np

from .config import SimConfig
from .errors import BracketError, InsufficientDataError


class TrafficState(enum.IntEnum):
    """Ordered congestion regimes; comparisons follow severity.

    Values start at 1 so no member is falsy.
    """

    NO_CONGESTION = 1
    SLOW_CONGESTION = 2
    FAST_CONGESTION = 3
    ABSOLUTE_CONGESTION = 4


@dataclass(frozen=True)
class ClassifierThresholds:
    """Decision constants for `classify_state`, echoed into output files.

    eps_abs/eps_rel bound the packet growth rate treated as "flat";
    theta_none/theta_full are the n_c fractions for "none"/"all" congested;
    early_window separates absolute from fast congestion; tail_exclude is
    the fraction of final steps dropped from every window.
    """

    eps_abs: float = 0.5
    eps_rel: float = 0.01
    theta_none: float = 0.01
    theta_full: float = 0.95
    early_window: int = 50
    tail_exclude: float = 0.05

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT_THRESHOLDS = ClassifierThresholds()


@dataclass(frozen=True)
class StepRecord:
    """Observables for one step.

    `n_c` is counted at the start of the delivery phase (right after
    generation); the remaining fields are end-of-step snapshots. The three
    counters are this step's counts, not cumulative.
    """

    t: int
    S: int
    n_c: int
    E_total: float
    E_max: float
    E_min: float
    generated: int
    forwarded: int
    arrived: int


CSV_FIELDS = ("t", "S", "n_c", "E_total", "E_max", "E_min", "generated", "forwarded", "arrived")


@dataclass
class RunSeries:
    """Full time series of one run, stored column-wise; row 0 is the t=0 state."""

    t: np.ndarray
    S: np.ndarray
    n_c: np.ndarray
    E_total: np.ndarray
    E_max: np.ndarray
    E_min: np.ndarray
    generated: np.ndarray
    forwarded: np.ndarray
    arrived: np.ndarray
    hop_log: np.ndarray
    config: SimConfig
    died: bool

    def __len__(self) -> int:
        return self.t.shape[0]

    @property
    def end_step(self) -> int:
        return int(self.t[-1])

    def record(self, i: int) -> StepRecord:
        return StepRecord(
            t=int(self.t[i]),
            S=int(self.S[i]),
            n_c=int(self.n_c[i]),
            E_total=float(self.E_total[i]),
            E_max=float(self.E_max[i]),
            E_min=float(self.E_min[i]),
            generated=int(self.generated[i]),
            forwarded=int(self.forwarded[i]),
            arrived=int(self.arrived[i]),
        )

    def __iter__(self):
        return (self.record(i) for i in range(len(self)))


def congested_count(nodes, config: SimConfig) -> int:
    """Nodes holding more packets than they can move this step (> capacity).

    `nodes` is anything with a `queue_lengths` array attribute, or a plain
    sequence of queue lengths.
    """
    qlens = getattr(nodes, "queue_lengths", nodes)
    return int(np.count_nonzero(np.asarray(qlens) > config.capacity))


def energy_range(record: StepRecord) -> float:
    """Spread between the richest and poorest node at this step."""
    return record.E_max - record.E_min


def _window_start(transient_cutoff: int, end_step: int) -> int:
    return min(int(transient_cutoff), int(0.05 * end_step))


def delta_s(series: RunSeries, transient_cutoff: int | None = None) -> float:
    """Average growth rate of total queued packets after the transient.

    Endpoint difference over [t0, end] with t0 = min(transient_cutoff,
    5% of the run length); identical to the mean one-step difference over
    that window but immune to single-step noise.
    """
    if transient_cutoff is None:
        transient_cutoff = series.config.transient_cutoff
    end = series.end_step
    t0 = _window_start(transient_cutoff, end)
    if end - t0 < 1:
        raise InsufficientDataError(
            f"need at least one step after the transient window (end={end}, t0={t0})"
        )
    return float(series.S[end] - series.S[t0]) / float(end - t0)


def characteristic_time(hop_log) -> float:
    """Mean number of transmissions a delivered packet needed, source to destination."""
    hops = np.asarray(hop_log)
    if hops.size == 0:
        raise InsufficientDataError("no delivered packets: characteristic time undefined")
    return float(hops.mean())


def classify_state(
    series: RunSeries,
    config: SimConfig | None = None,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
) -> TrafficState:
    """Assign one of the four traffic states to a finished run."""
    if config is None:
        config = series.config
    end = series.end_step
    if end < thresholds.early_window:
        raise InsufficientDataError(
            f"series ends at step {end}, shorter than the early window "
            f"({thresholds.early_window}); cannot classify"
        )
    n = config.n_nodes
    t_cut = end - int(math.ceil(thresholds.tail_exclude * end))
    t0 = _window_start(config.transient_cutoff, end)
    if t_cut <= t0:
        raise InsufficientDataError(f"empty classification window [{t0}, {t_cut}]")

    growth = float(series.S[t_cut] - series.S[t0]) / float(t_cut - t0)
    flat = growth <= thresholds.eps_abs + thresholds.eps_rel * n * config.gen_rate
    n_c_window = series.n_c[t0 : t_cut + 1]
    full = thresholds.theta_full * n

    if flat and float(np.median(n_c_window)) <= thresholds.theta_none * n:
        return TrafficState.NO_CONGESTION
    early = series.n_c[1 : thresholds.early_window + 1]
    if early.size and early.max() >= full:
        return TrafficState.ABSOLUTE_CONGESTION
    later = series.n_c[thresholds.early_window + 1 : t_cut + 1]
    if later.size and later.max() >= full:
        return TrafficState.FAST_CONGESTION
    return TrafficState.SLOW_CONGESTION


def _majority_at_least(config: SimConfig, rate: float, target: TrafficState,
                       replicas: int, thresholds: ClassifierThresholds) -> bool:
    """Majority vote of `classified state >= target` over seeded replicas.

    Stops as soon as the vote is decided; the outcome is identical to
    running the full seed list.
    """
    from .harness import run_simulation  # local import: harness depends on metrics

    need = replicas // 2 + 1
    votes = 0
    for i in range(replicas):
        cfg = replace(config, gen_rate=rate, seed=config.seed + i)
        _, summary = run_simulation(cfg, thresholds=thresholds, keep_series=False)
        if summary.state is not None and summary.state >= target:
            votes += 1
        if votes >= need or votes + (replicas - 1 - i) < need:
            break
    return votes >= need


def find_critical_rates(
    config: SimConfig,
    rho_lo: float,
    rho_hi: float,
    replicas: int = 11,
    tolerance: float = 0.1,
    thresholds: ClassifierThresholds = DEFAULT_THRESHOLDS,
) -> tuple[float, float, float]:
    """Locate the three generation rates separating the four traffic states.

    Bisects the majority-vote classification between rho_lo (which must
    classify as no congestion) and rho_hi (which must classify as absolute
    congestion). Each boundary search starts at the previous boundary, so
    the returned rates are ordered. Replica seeds are shared across probe
    rates (common random numbers), making each search deterministic for a
    given config seed.
    """
    config.validate()
    if not rho_lo < rho_hi:
        raise BracketError(f"need rho_lo < rho_hi, got [{rho_lo}, {rho_hi}]")
    if _majority_at_least(config, rho_lo, TrafficState.SLOW_CONGESTION, replicas, thresholds):
        raise BracketError(
            f"rho_lo={rho_lo} already classifies beyond no-congestion; widen the range downward"
        )
    if not _majority_at_least(config, rho_hi, TrafficState.ABSOLUTE_CONGESTION, replicas, thresholds):
        raise BracketError(
            f"rho_hi={rho_hi} does not classify as absolute congestion; widen the range upward"
        )

    results = []
    lo = rho_lo
    for target in (
        TrafficState.SLOW_CONGESTION,
        TrafficState.FAST_CONGESTION,
        TrafficState.ABSOLUTE_CONGESTION,
    ):
        a, b = lo, rho_hi
        while b - a > tolerance:
            mid = 0.5 * (a + b)
            if _majority_at_least(config, mid, target, replicas, thresholds):
                b = mid
            else:
                a = mid
        boundary = 0.5 * (a + b)
        if results and boundary < results[-1]:
            boundary = results[-1]  # enforce ordering within tolerance noise
        results.append(boundary)
        lo = a  # predicate known False here, valid start for the next bracket
    rho_s, rho_f, rho_a = results
    return rho_s, rho_f, rho_a

"""Monte Carlo engine: drive birth/death steps, record observables, replicate.

A run is deterministic given its seed.  Random draws happen in fixed block
order per run: the (X, Y) increment blocks first, then one fitness block
(one draw per birth, or one per batch in batch-constant mode).  The same
pre-drawn streams can feed both the full population simulation and the
reduced left-interval queue recursion, which is what makes the exact
cross-checks possible.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, ConstructionError, RegimeError
from .increments import FiniteTable, IncrementLaw
from .measure import BorelSet, FitnessMeasure
from .population import Population
from . import analytics

DENSE_RECORD_LIMIT = 10_000
RECORD_GROWTH = 1.01

#: splitmix64 finalizer constants, used to derive independent replica seeds
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1


def mix64(v: int) -> int:
    """splitmix64 finalizer; scrambles adjacent seeds into unrelated streams."""
    v = (v + 0x9E3779B97F4A7C15) & _MASK
    v = ((v ^ (v >> 30)) * _MIX_1) & _MASK
    v = ((v ^ (v >> 27)) * _MIX_2) & _MASK
    return v ^ (v >> 31)


def replica_seed(base_seed: int, index: int) -> int:
    return mix64((base_seed & _MASK) + index)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Observable:
    name: str
    borel: BorelSet


@dataclass(frozen=True)
class SimConfig:
    measure: FitnessMeasure
    law: IncrementLaw
    horizon: int
    seed: int = 0
    replicas: int = 1
    observables: tuple[Observable, ...] = ()
    snapshot_steps: tuple[int, ...] = ()
    checkpoints: tuple[int, ...] = ()  # extra steps always recorded
    stride: int | None = None          # fixed-stride recording override

    def __post_init__(self):
        if self.horizon < 2 or self.horizon % 2 != 0:
            raise ConstructionError(f"horizon {self.horizon} must be even and >= 2")
        if self.replicas < 1:
            raise ConstructionError("replicas must be >= 1")
        names = [o.name for o in self.observables]
        if len(set(names)) != len(names):
            raise ConstructionError(f"observable names must be unique: {names}")
        for s in (*self.snapshot_steps, *self.checkpoints):
            if not 0 <= s <= self.horizon:
                raise ConstructionError(f"step {s} outside [0, horizon]")
        if self.stride is not None and self.stride < 1:
            raise ConstructionError("stride must be >= 1")

    @classmethod
    def from_config(cls, cfg: dict) -> "SimConfig":
        if not isinstance(cfg, dict):
            raise ConfigError("simulation config must be an object")
        known = {"measure", "increments", "horizon", "seed", "replicas",
                 "observables", "snapshot_steps", "checkpoints", "stride"}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            measure = FitnessMeasure.from_config(cfg["measure"])
            law = IncrementLaw.from_config(cfg["increments"])
            horizon = int(cfg["horizon"])
        except KeyError as exc:
            raise ConfigError(f"config missing required key {exc}") from exc
        obs = []
        for entry in cfg.get("observables", ()):
            try:
                obs.append(Observable(str(entry["name"]), BorelSet.parse(entry["set"])))
            except (KeyError, TypeError) as exc:
                raise ConfigError(f"bad observable entry {entry!r}") from exc
        try:
            return cls(
                measure=measure, law=law, horizon=horizon,
                seed=int(cfg.get("seed", 0)), replicas=int(cfg.get("replicas", 1)),
                observables=tuple(obs),
                snapshot_steps=tuple(int(s) for s in cfg.get("snapshot_steps", ())),
                checkpoints=tuple(int(s) for s in cfg.get("checkpoints", ())),
                stride=None if cfg.get("stride") is None else int(cfg["stride"]),
            )
        except ConstructionError as exc:
            raise ConfigError(str(exc)) from exc

    def to_config(self) -> dict:
        out = {
            "measure": self.measure.to_config(),
            "increments": self.law.to_config(),
            "horizon": self.horizon,
            "seed": self.seed,
            "replicas": self.replicas,
            "observables": [{"name": o.name, "set": str(o.borel)} for o in self.observables],
            "snapshot_steps": list(self.snapshot_steps),
        }
        if self.checkpoints:
            out["checkpoints"] = list(self.checkpoints)
        if self.stride is not None:
            out["stride"] = self.stride
        return out


def recorded_steps(horizon: int, *, stride: int | None = None, extra=()) -> np.ndarray:
    """Steps at which trajectory rows are kept.

    Dense up to DENSE_RECORD_LIMIT, then geometrically spaced; a fixed
    ``stride`` replaces that scheme.  ``extra`` steps and the final step are
    always included.
    """
    if stride is not None:
        steps = set(range(0, horizon + 1, stride))
    else:
        steps = set(range(0, min(horizon, DENSE_RECORD_LIMIT) + 1))
        s = DENSE_RECORD_LIMIT
        while s < horizon:
            s = max(s + 1, math.ceil(s * RECORD_GROWTH))
            if s <= horizon:
                steps.add(s)
    steps.add(horizon)
    steps.update(int(e) for e in extra if 0 <= int(e) <= horizon)
    return np.asarray(sorted(steps), dtype=np.int64)


# ---------------------------------------------------------------------------
# Pre-drawn randomness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Streams:
    """All randomness of one run, drawn up front in a fixed block order."""

    xs: np.ndarray                 # births per cycle
    ys: np.ndarray                 # death requests per cycle
    fitness: np.ndarray | None     # one draw per birth (iid mode)
    batch_fitness: np.ndarray | None  # one draw per cycle (batch-constant mode)
    offsets: np.ndarray            # prefix sums of xs, len cycles+1

    @property
    def cycles(self) -> int:
        return len(self.xs)

    def births_in(self, borel: BorelSet) -> np.ndarray:
        """Per-cycle count of births landing in the set (the thinned stream)."""
        if self.batch_fitness is not None:
            return self.xs * borel.contains_array(self.batch_fitness)
        mask = borel.contains_array(self.fitness).astype(np.int64)
        cum = np.concatenate(([0], np.cumsum(mask)))
        return cum[self.offsets[1:]] - cum[self.offsets[:-1]]


def draw_streams(measure: FitnessMeasure, law: IncrementLaw, cycles: int,
                 rng: np.random.Generator) -> Streams:
    xs, ys = law.sample_pairs(rng, cycles)
    offsets = np.concatenate(([0], np.cumsum(xs)))
    if law.batch_constant:
        return Streams(xs, ys, None, measure.sample(rng, cycles), offsets)
    total = int(offsets[-1])
    return Streams(xs, ys, measure.sample(rng, total), None, offsets)


# ---------------------------------------------------------------------------
# Trajectory records
# ---------------------------------------------------------------------------


@dataclass
class ObservableTrack:
    name: str
    z: np.ndarray        # alive in the set, per recorded step
    killed: np.ndarray   # cumulative kills in the set
    tau: np.ndarray      # even steps (including 0) at which the set was empty
    births: np.ndarray   # cumulative births into the set
    max_ratio: float     # running max of Z_n(A)/Z_n over every step with Z_n > 0
    max_ratio_step: int


@dataclass
class TrajectoryRecord:
    steps: np.ndarray
    z: np.ndarray
    n_cum: np.ndarray    # cumulative count of elementary birth/death events
    observables: dict[str, ObservableTrack]
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]]
    meta: dict = field(default_factory=dict)

    def final(self, column: str = "z") -> int:
        return int(getattr(self, column)[-1])

    def write_csv(self, fh) -> None:
        names = list(self.observables)
        header = "n,Z,N" + "".join(f",Z_{n},K_{n},tau_{n}" for n in names)
        fh.write(header + "\n")
        cols = [self.steps, self.z, self.n_cum]
        for n in names:
            t = self.observables[n]
            cols.extend([t.z, t.killed, t.tau])
        for row in zip(*cols):
            fh.write(",".join(str(int(v)) for v in row) + "\n")


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


def run(cfg: SimConfig) -> TrajectoryRecord:
    """Simulate one trajectory for cfg.horizon steps (replica 0's stream)."""
    rng = np.random.default_rng(cfg.seed)
    streams = draw_streams(cfg.measure, cfg.law, cfg.horizon // 2, rng)
    return run_on_streams(cfg, streams)


def run_on_streams(cfg: SimConfig, streams: Streams) -> TrajectoryRecord:
    """Engine core: consume pre-drawn streams step by step."""
    horizon = cfg.horizon
    rec = recorded_steps(horizon, stride=cfg.stride,
                         extra=(*cfg.checkpoints, *cfg.snapshot_steps))
    rec_set = set(rec.tolist())
    snap_set = set(int(s) for s in cfg.snapshot_steps)

    pop = Population()
    obs = list(cfg.observables)
    n_obs = len(obs)
    borels = [o.borel for o in obs]
    xtil = [streams.births_in(b) for b in borels]

    z_a = [0] * n_obs
    killed_a = [0] * n_obs
    tau_a = [0] * n_obs
    births_a = [0] * n_obs
    max_ratio = [0.0] * n_obs
    max_ratio_step = [0] * n_obs

    steps_l, z_l, n_l = [], [], []
    obs_rows = [([], [], [], []) for _ in range(n_obs)]  # z, killed, tau, births
    snapshots: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    n_cum = 0
    for j in range(n_obs):
        tau_a[j] += 1  # step 0: every set is empty

    def emit(step: int) -> None:
        if step in rec_set:
            steps_l.append(step)
            z_l.append(pop.total)
            n_l.append(n_cum)
            for j in range(n_obs):
                rows = obs_rows[j]
                rows[0].append(z_a[j])
                rows[1].append(killed_a[j])
                rows[2].append(tau_a[j])
                rows[3].append(births_a[j])
        if step in snap_set:
            snapshots[step] = pop.fitness_counts()

    emit(0)
    xs, ys = streams.xs, streams.ys
    fitness = streams.fitness.tolist() if streams.fitness is not None else None
    batch_fit = streams.batch_fitness
    offsets = streams.offsets

    for k in range(streams.cycles):
        x = int(xs[k])
        step = 2 * k + 1
        if batch_fit is not None:
            f_k = float(batch_fit[k])
            if x > 0:
                pop.birth_step(f_k, count=x)
            else:
                pop.birth_step(())
        else:
            pop.birth_step(fitness[offsets[k]:offsets[k + 1]])
        n_cum += x
        total = pop.total
        for j in range(n_obs):
            added = int(xtil[j][k])
            z_a[j] += added
            births_a[j] += added
            if total > 0:
                r = z_a[j] / total
                if r > max_ratio[j]:
                    max_ratio[j] = r
                    max_ratio_step[j] = step
        emit(step)

        y = int(ys[k])
        step = 2 * k + 2
        report = pop.death_step(y)
        n_cum += y
        if n_obs:
            for f, c in report.removed:
                for j in range(n_obs):
                    if borels[j].contains(f):
                        z_a[j] -= c
                        killed_a[j] += c
            total = pop.total
            for j in range(n_obs):
                if z_a[j] == 0:
                    tau_a[j] += 1
                elif total > 0:
                    r = z_a[j] / total
                    if r > max_ratio[j]:
                        max_ratio[j] = r
                        max_ratio_step[j] = step
        emit(step)

    tracks = {}
    for j, o in enumerate(obs):
        rows = obs_rows[j]
        tracks[o.name] = ObservableTrack(
            name=o.name,
            z=np.asarray(rows[0], dtype=np.int64),
            killed=np.asarray(rows[1], dtype=np.int64),
            tau=np.asarray(rows[2], dtype=np.int64),
            births=np.asarray(rows[3], dtype=np.int64),
            max_ratio=max_ratio[j],
            max_ratio_step=max_ratio_step[j],
        )
    meta = {"seed": cfg.seed, "horizon": horizon}
    if hasattr(cfg.law.law_x, "table_cutoff"):
        meta["zeta_table_cutoff"] = cfg.law.law_x.table_cutoff
    return TrajectoryRecord(
        steps=np.asarray(steps_l, dtype=np.int64),
        z=np.asarray(z_l, dtype=np.int64),
        n_cum=np.asarray(n_l, dtype=np.int64),
        observables=tracks,
        snapshots=snapshots,
        meta=meta,
    )


# ---------------------------------------------------------------------------
# Reduced queue on a left interval, and the exact cross-checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QueueRun:
    """Reduced dynamics of a left interval, one entry per cycle (even steps)."""

    queue: np.ndarray      # queue[k] = interval count at step 2k (Lindley recursion)
    walk: np.ndarray       # walk[k] = free-walk partial sum S_k, walk[0] = 0
    births_in: np.ndarray  # thinned birth counts per cycle
    deaths: np.ndarray

    def reflected_walk(self) -> np.ndarray:
        """S_k - min_{i<=k} S_i, the reflection identity's right-hand side."""
        return self.walk - np.minimum.accumulate(self.walk)


def run_queue(measure: FitnessMeasure, law: IncrementLaw, f: float, horizon: int,
              seed: int, include_f: bool = True) -> QueueRun:
    """Simulate the left-interval queue and its free walk from one stream."""
    rng = np.random.default_rng(seed)
    streams = draw_streams(measure, law, horizon // 2, rng)
    borel = BorelSet.interval(0.0, f, True, include_f)
    if measure.mass(borel) <= 0.0:
        raise RegimeError(f"left interval {borel} carries no mass")
    return queue_from_streams(streams, borel)


def queue_from_streams(streams: Streams, borel: BorelSet) -> QueueRun:
    xtil = streams.births_in(borel)
    inc = xtil - streams.ys
    walk = np.concatenate(([0], np.cumsum(inc)))
    queue = np.empty(streams.cycles + 1, dtype=np.int64)
    queue[0] = 0
    q = 0
    for k in range(streams.cycles):
        q = max(q + int(inc[k]), 0)
        queue[k + 1] = q
    return QueueRun(queue=queue, walk=walk, births_in=xtil, deaths=streams.ys.copy())


def duality_check(measure: FitnessMeasure, law: IncrementLaw, f: float, horizon: int,
                  seed: int, include_f: bool = True) -> dict:
    """Drive the full simulation and the queue from one shared stream.

    Returns exact-equality verdicts for (a) the reflection identity
    queue == S - running_min(S) and (b) full population counts in [0,f]
    against the queue, at every even step.
    """
    rng = np.random.default_rng(seed)
    streams = draw_streams(measure, law, horizon // 2, rng)
    borel = BorelSet.interval(0.0, f, True, include_f)
    qr = queue_from_streams(streams, borel)
    cfg = SimConfig(measure=measure, law=law, horizon=horizon, seed=seed,
                    observables=(Observable("I", borel),))
    record = run_on_streams(cfg, streams)
    even = record.steps % 2 == 0
    cycle_idx = (record.steps[even] // 2).astype(np.int64)
    pop_z = record.observables["I"].z[even]
    reflected = qr.reflected_walk()
    return {
        "reflection_exact": bool(np.array_equal(qr.queue, reflected)),
        "population_matches_queue": bool(np.array_equal(pop_z, qr.queue[cycle_idx])),
        "checked_steps": int(even.sum()),
    }


def stationary_histogram(measure: FitnessMeasure, law: IncrementLaw, f: float,
                         horizon: int, seed: int, include_f: bool = True,
                         burn_in: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Empirical distribution of the queue value over the post-burn-in cycles.

    The positive-recurrent limit law has no closed form here, so it is only
    exposed empirically.
    """
    qr = run_queue(measure, law, f, horizon, seed, include_f)
    tail = qr.queue[int(len(qr.queue) * burn_in):]
    values, counts = np.unique(tail, return_counts=True)
    return values, counts / counts.sum()


# ---------------------------------------------------------------------------
# Replication
# ---------------------------------------------------------------------------


@dataclass
class ColumnStats:
    mean: np.ndarray
    std: np.ndarray | None
    min: np.ndarray
    max: np.ndarray

    @classmethod
    def across(cls, rows: np.ndarray) -> "ColumnStats":
        return cls(
            mean=rows.mean(axis=0),
            std=rows.std(axis=0, ddof=1) if rows.shape[0] >= 2 else None,
            min=rows.min(axis=0),
            max=rows.max(axis=0),
        )

    def to_json_dict(self) -> dict:
        out = {"mean": self.mean.tolist(), "min": self.min.tolist(), "max": self.max.tolist()}
        out["std"] = self.std.tolist() if self.std is not None else None
        return out


@dataclass
class ReplicateResult:
    records: list[TrajectoryRecord]
    steps: np.ndarray
    z: ColumnStats
    n_cum: ColumnStats
    observables: dict[str, dict[str, ColumnStats]]

    def to_json_dict(self) -> dict:
        return {
            "replicas": len(self.records),
            "steps": self.steps.tolist(),
            "z": self.z.to_json_dict(),
            "n_cum": self.n_cum.to_json_dict(),
            "observables": {
                name: {col: stats.to_json_dict() for col, stats in cols.items()}
                for name, cols in self.observables.items()
            },
        }


def _run_replica(args) -> TrajectoryRecord:
    cfg, index = args
    return run(replace(cfg, seed=replica_seed(cfg.seed, index), replicas=1))


def max_workers(replicas: int) -> int:
    cap = os.environ.get("FITNESS_EVO_THREADS")
    workers = min(replicas, os.cpu_count() or 1)
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return workers


def replicate(cfg: SimConfig) -> ReplicateResult:
    """Run cfg.replicas independent trajectories and aggregate them.

    Replica r draws from seed mix64(cfg.seed + r), so aggregates do not
    depend on execution order or worker count.
    """
    jobs = [(cfg, r) for r in range(cfg.replicas)]
    workers = max_workers(cfg.replicas)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_replica, jobs))
    else:
        records = [_run_replica(j) for j in jobs]
    steps = records[0].steps
    z = ColumnStats.across(np.stack([r.z for r in records]))
    n_cum = ColumnStats.across(np.stack([r.n_cum for r in records]))
    obs: dict[str, dict[str, ColumnStats]] = {}
    for o in cfg.observables:
        obs[o.name] = {
            "z": ColumnStats.across(np.stack([r.observables[o.name].z for r in records])),
            "killed": ColumnStats.across(np.stack([r.observables[o.name].killed for r in records])),
            "tau": ColumnStats.across(np.stack([r.observables[o.name].tau for r in records])),
        }
    return ReplicateResult(records=records, steps=steps, z=z, n_cum=n_cum, observables=obs)


# ---------------------------------------------------------------------------
# Shape diagnostics
# ---------------------------------------------------------------------------


def _as_step_function(snapshot) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(snapshot, tuple) and len(snapshot) == 2:
        points, weights = map(np.asarray, snapshot)
        if weights.dtype.kind in "iu":  # raw (fitness, count) snapshot
            cum = np.cumsum(weights)
            return points.astype(float), cum / cum[-1]
        return points.astype(float), weights.astype(float)
    pairs = list(snapshot)
    points = np.asarray([p for p, _ in pairs], dtype=float)
    vals = np.asarray([v for _, v in pairs], dtype=float)
    return points, vals


def sup_distance(snapshot, measure: FitnessMeasure, law: IncrementLaw) -> float:
    """Exact sup_f |emp(f) - F_inf(f)| between a CDF snapshot and the limit shape.

    Evaluates both one-sided limits at every jump of either function, which is
    where the sup of a step-vs-piecewise-linear difference must live.
    """
    shape = analytics.shape_law(measure, law)
    if not shape.defined:
        raise RegimeError("limit shape undefined in this regime")
    points, cum = _as_step_function(snapshot)
    if len(points) == 0:
        raise ValueError("empty snapshot")
    cand = np.unique(np.concatenate([points, np.asarray(shape.breakpoints()), [0.0, 1.0]]))
    idx_right = np.searchsorted(points, cand, side="right")
    idx_left = np.searchsorted(points, cand, side="left")
    emp_right = np.where(idx_right > 0, cum[np.maximum(idx_right - 1, 0)], 0.0)
    emp_left = np.where(idx_left > 0, cum[np.maximum(idx_left - 1, 0)], 0.0)
    lim_right = np.asarray([shape.cdf(t) for t in cand])
    lim_left = np.asarray([shape.cdf_left(t) for t in cand])
    return float(max(np.abs(emp_right - lim_right).max(),
                     np.abs(emp_left - lim_left).max()))


# ---------------------------------------------------------------------------
# Branching-process Monte Carlo
# ---------------------------------------------------------------------------


def bp_hit_zero_frequency(measure: FitnessMeasure, law: IncrementLaw, f: float,
                          horizon: int, replicas: int, seed: int, *,
                          initial: int = 1, left_open: bool = False) -> float:
    """Fraction of replicas whose [0,f] count hits zero at an odd time <= horizon.

    Starts each replica with ``initial`` species in the interval at an odd
    time.  All replicas advance in lockstep on one generator, so the result
    is deterministic given the seed.
    """
    if not law.y_is_unit:
        raise RegimeError("branching-process Monte Carlo requires Y identically 1")
    big_f = measure.cdf_left(f) if left_open else measure.cdf(f)
    rng = np.random.default_rng(seed)
    z = np.full(replicas, initial, dtype=np.int64)
    hit = z == 0
    for _ in range(horizon // 2):
        x = np.asarray(law.law_x.sample(rng, size=replicas), dtype=np.int64)
        if law.batch_constant:
            landed = x * (rng.random(replicas) < big_f)
        else:
            landed = rng.binomial(x, big_f)
        z = np.maximum(z - 1, 0) + landed
        z[hit] = 0
        hit |= z == 0
    return float(hit.mean())


# ---------------------------------------------------------------------------
# Dependent-fitness counterexample construction
# ---------------------------------------------------------------------------


def counterexample_bands(k_max: int) -> dict:
    """Band structure for the batch-constant law with rare huge batches.

    Level thresholds n_i = i(i+1)/2 split a geometric(1/2) level variable H
    into bands (n_k, n_{k+1}]; band k emits batches of size
    (k+1)! * prod(tau_0..tau_k), where tau_k is the smallest horizon making a
    level-(k+1) hit within tau_k trials at least 1 - 2^-k likely.  Levels
    beyond the last band clamp into it.
    """
    if k_max < 1:
        raise ConstructionError("k_max must be >= 1")
    thresholds = [i * (i + 1) // 2 for i in range(k_max + 2)]
    taus: list[int] = []
    for k in range(k_max + 1):
        if k == 0:
            tau = 1
        else:
            q = 2.0 ** -thresholds[k]
            bound = 2.0 ** -(k + 1) / (1.0 - 2.0 ** -(k + 1))
            tau = max(1, math.ceil(math.log(bound) / math.log1p(-q)))
        taus.append(max(tau, taus[-1] if taus else 1))
    values: list[int] = []
    probs: list[float] = []
    prod = 1
    for k in range(k_max + 1):
        prod *= taus[k]
        g = math.factorial(k + 1) * prod
        if g >= 2**63:
            raise ConstructionError(
                f"batch size overflows 64-bit counts at k={k}; max feasible k_max is {k - 1}")
        values.append(g)
        p = 2.0 ** -thresholds[k] - 2.0 ** -thresholds[k + 1]
        if k == k_max:
            p = 2.0 ** -thresholds[k]  # absorb the clamped upper tail
        probs.append(p)
    return {"thresholds": thresholds, "taus": taus, "batch_sizes": values, "probs": probs}


def build_counterexample_law(k_max: int) -> IncrementLaw:
    """Batch-constant law (X = banded huge batches, Y = 1) whose whole-batch
    fitness assignment lets one batch dominate the population infinitely often."""
    bands = counterexample_bands(k_max)
    x_law = FiniteTable(bands["batch_sizes"], bands["probs"])
    return IncrementLaw.bp(x_law, batch_constant=True)


def counterexample_demo(k_max: int, horizon: int, seeds, borel: BorelSet,
                        measure: FitnessMeasure | None = None) -> list[dict]:
    """Run the dependent-fitness scenario over a fixed seed set.

    Reports, per seed, the maximal share of the population ever held by the
    observed set and whether the share later fell back below mu(A) + 0.1.
    This is a demonstration of behaviour that occurs on an event of positive
    but unquantified probability, not a hard guarantee per seed.
    """
    measure = measure or FitnessMeasure.uniform()
    law = build_counterexample_law(k_max)
    target_low = measure.mass(borel) + 0.1
    out = []
    for seed in seeds:
        cfg = SimConfig(measure=measure, law=law, horizon=horizon, seed=int(seed),
                        observables=(Observable("A", borel),))
        rec = run(cfg)
        track = rec.observables["A"]
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(rec.z > 0, track.z / np.maximum(rec.z, 1), 0.0)
        peak = track.max_ratio
        peak_step = track.max_ratio_step
        after = ratio[rec.steps > peak_step]
        out.append({
            "seed": int(seed),
            "max_ratio": float(peak),
            "max_ratio_step": int(peak_step),
            "dropped_after_peak": bool(after.size and after.min() < target_low),
            "min_after_peak": float(after.min()) if after.size else None,
        })
    return out

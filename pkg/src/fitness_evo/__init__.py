"""Batch-birth / least-fit-removal evolution model: simulator and exact theory."""

from .errors import (
    ConfigError,
    ConstructionError,
    ConvergenceError,
    DomainError,
    EmptyPopulationError,
    FitnessEvoError,
    RegimeError,
    SequencingError,
)
from .measure import BorelSet, FitnessMeasure
from .increments import (
    Deterministic,
    FiniteTable,
    IncrementLaw,
    ShiftedGeometric,
    ZetaLike,
)
from .population import KillReport, Population
from .analytics import (
    KillingRates,
    RecurrenceClass,
    ShapeLaw,
    bp_extinction,
    classify_left_interval,
    critical_fitness,
    killing_rate,
    killing_report,
    limit_cdf,
    limit_measure,
    shape_law,
    survival_verdict,
)
from .simulate import (
    Observable,
    QueueRun,
    ReplicateResult,
    SimConfig,
    TrajectoryRecord,
    bp_hit_zero_frequency,
    build_counterexample_law,
    counterexample_demo,
    duality_check,
    replicate,
    run,
    run_queue,
    sup_distance,
)

__version__ = "0.1.0"

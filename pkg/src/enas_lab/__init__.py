"""Runtime-experiment lab for elitist block-count architecture search."""

from .evolution import (
    Action,
    Mode,
    MutationOp,
    TrajectoryStep,
    TrialConfig,
    TrialResult,
    apply_op,
    init_architecture,
    mutate,
    run_trial,
    sample_k,
    sample_op,
)
from .fitness import (
    Allocation,
    Architecture,
    BlockType,
    FitnessScore,
    Semantics,
    allocation_levels,
    best_allocation_bruteforce,
    best_allocation_greedy,
    compare,
    fitness,
    is_optimal,
    levels_value,
    literal_fitness,
    literal_levels,
    placement_fitness,
)
from .geometry import (
    DiskPoint,
    RegionKind,
    RegionSpec,
    UniformInstance,
    green_fraction,
    label_point,
    make_instance,
    region_of,
    sample_disk_point,
)
from .harness import (
    QUARTER_N,
    BoundCheck,
    DriftRecord,
    Phase,
    RawTrial,
    SweepCell,
    SweepConfig,
    check_bounds,
    derive_trial_seed,
    estimate_drift,
    fit_linear,
    run_sweep,
    run_sweep_raw,
)
from .network import (
    Classifier,
    PlacedBlock,
    Sense,
    ThresholdUnit,
    build_network,
    classify,
    classify_batch,
    make_block,
    monte_carlo_accuracy,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Sweeps over (n, mode, semantics), runtime statistics, and bound checks.

Per-trial seeds are derived from (master seed, cell, trial index) through a
SeedSequence, so statistics are invariant under worker count and scheduling.
"""
from __future__ import annotations

import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .evolution import Mode, TrialConfig, run_trial
from .fitness import Semantics
from .geometry import make_instance

_MODE_CODE = {Mode.ONE_BIT: 0, Mode.MULTI_BIT: 1}
_SEM_CODE = {Semantics.LITERAL: 0, Semantics.PLACEMENT: 1}

QUARTER_N = "quarter-n"


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple[int, ...]
    modes: tuple[Mode, ...]
    semantics: tuple[Semantics, ...]
    trials: int
    s_rule: int | str  # explicit integer or QUARTER_N
    master_seed: int
    workers: int = 1
    max_generations: int = 10**7
    strict_selection: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.s_rule == QUARTER_N:
            for n in self.n_values:
                if n % 4 != 0:
                    raise ValueError(f"{QUARTER_N} needs n divisible by 4, got {n}")
        elif not isinstance(self.s_rule, int) or self.s_rule < 0:
            raise ValueError(f"s_rule must be {QUARTER_N!r} or a nonnegative int")


@dataclass(frozen=True)
class SweepCell:
    n: int
    mode: Mode
    semantics: Semantics
    trials: int
    mean: float
    std: float
    std_error: float
    ci95_low: float
    ci95_high: float
    min: int
    max: int
    theory_upper: float | None
    capped_trials: int


@dataclass(frozen=True)
class RawTrial:
    trial: int
    seed: int
    n: int
    mode: Mode
    semantics: Semantics
    generations: int
    initial: tuple[int, int, int]
    final: tuple[int, int, int]
    hit_cap: bool


class Phase(Enum):
    PHASE1 = "phase1"  # triangles still missing: distance (b+c) - i
    PHASE2 = "phase2"  # segments still missing: distance (a+b) - j


@dataclass(frozen=True)
class DriftRecord:
    phase: Phase
    mean_one_step_decrease: float | None
    std_error: float | None
    samples: int


@dataclass(frozen=True)
class BoundCheck:
    n: int
    mode: Mode
    semantics: Semantics
    bound: float
    observed: float
    passed: bool


def derive_trial_seed(master_seed: int, n: int, mode: Mode,
                      semantics: Semantics, trial_index: int) -> int:
    ss = np.random.SeedSequence(
        [master_seed, n, _MODE_CODE[mode], _SEM_CODE[semantics], trial_index]
    )
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def resolve_s(s_rule: int | str, n: int) -> int:
    if s_rule == QUARTER_N:
        return n // 4
    return int(s_rule)


def _run_chunk(args) -> list[tuple[int, int, int, tuple, tuple, bool]]:
    n, mode_value, sem_value, s, max_gens, strict, indexed_seeds = args
    mode = Mode(mode_value)
    sem = Semantics(sem_value)
    out = []
    for idx, seed in indexed_seeds:
        res = run_trial(TrialConfig(
            n=n, s=s, mode=mode, semantics=sem, seed=seed,
            max_generations=max_gens, strict_selection=strict,
        ))
        out.append((idx, seed, res.generations,
                    res.initial.as_tuple(), res.final.as_tuple(), res.hit_cap))
    return out


def _run_cell_raw(cfg: SweepConfig, n: int, mode: Mode,
                  sem: Semantics) -> list[RawTrial]:
    s = resolve_s(cfg.s_rule, n)
    seeds = [(t, derive_trial_seed(cfg.master_seed, n, mode, sem, t))
             for t in range(cfg.trials)]
    task = lambda chunk: (n, mode.value, sem.value, s, cfg.max_generations,
                          cfg.strict_selection, chunk)
    if cfg.workers <= 1 or cfg.trials < 4 * cfg.workers:
        results = _run_chunk(task(seeds))
    else:
        chunk_size = math.ceil(len(seeds) / (4 * cfg.workers))
        chunks = [seeds[k: k + chunk_size]
                  for k in range(0, len(seeds), chunk_size)]
        results = []
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            for part in pool.map(_run_chunk, [task(ch) for ch in chunks]):
                results.extend(part)
    results.sort(key=lambda r: r[0])
    return [
        RawTrial(trial=idx, seed=seed, n=n, mode=mode, semantics=sem,
                 generations=gens, initial=init, final=final, hit_cap=cap)
        for idx, seed, gens, init, final, cap in results
    ]


def summarize_cell(n: int, mode: Mode, sem: Semantics,
                   raw: list[RawTrial]) -> SweepCell:
    gens = [r.generations for r in raw if not r.hit_cap]
    capped = sum(1 for r in raw if r.hit_cap)
    if not gens:
        raise ValueError(f"all {len(raw)} trials hit the cap for n={n}")
    mean = statistics.fmean(gens)
    std = statistics.pstdev(gens) if len(gens) > 1 else 0.0
    se = std / math.sqrt(len(gens))
    theory = 63 * n / 4 if mode is Mode.ONE_BIT else None
    return SweepCell(
        n=n, mode=mode, semantics=sem, trials=len(raw),
        mean=mean, std=std, std_error=se,
        ci95_low=mean - 1.96 * se, ci95_high=mean + 1.96 * se,
        min=min(gens), max=max(gens),
        theory_upper=theory, capped_trials=capped,
    )


def run_sweep_raw(cfg: SweepConfig) -> tuple[list[SweepCell], list[RawTrial]]:
    """All cells plus the per-trial records, in deterministic order."""
    cells: list[SweepCell] = []
    raw_all: list[RawTrial] = []
    keys = sorted(
        ((n, mode, sem)
         for n in cfg.n_values for mode in cfg.modes for sem in cfg.semantics),
        key=lambda k: (k[0], _MODE_CODE[k[1]], _SEM_CODE[k[2]]),
    )
    for n, mode, sem in keys:
        raw = _run_cell_raw(cfg, n, mode, sem)
        cells.append(summarize_cell(n, mode, sem, raw))
        raw_all.extend(raw)
    return cells, raw_all


def run_sweep(cfg: SweepConfig) -> list[SweepCell]:
    return run_sweep_raw(cfg)[0]


def estimate_drift(cfg: TrialConfig, trials: int) -> list[DriftRecord]:
    """Pooled one-step distance decreases per phase over many trajectories.

    Phase 1 covers generations whose parent still misses triangles
    (i < b + c); phase 2 the rest up to the optimum. Uses Welford-style
    accumulation so trajectories are not kept in memory.
    """
    if not cfg.record_trajectory:
        raise ValueError("estimate_drift needs cfg.record_trajectory = True")
    inst = make_instance(cfg.n)
    full_i = inst.b + inst.c
    acc = {Phase.PHASE1: [0, 0.0, 0.0], Phase.PHASE2: [0, 0.0, 0.0]}

    def push(phase: Phase, delta: float) -> None:
        cnt, mean, m2 = acc[phase]
        cnt += 1
        d = delta - mean
        mean += d / cnt
        m2 += d * (delta - mean)
        acc[phase] = [cnt, mean, m2]

    for t in range(trials):
        seed = derive_trial_seed(cfg.seed, cfg.n, cfg.mode, cfg.semantics, t)
        res = run_trial(TrialConfig(
            n=cfg.n, s=cfg.s, mode=cfg.mode, semantics=cfg.semantics,
            seed=seed, max_generations=cfg.max_generations,
            record_trajectory=True, strict_selection=cfg.strict_selection,
        ))
        steps = res.trajectory
        pi, pj = steps[0].i, steps[0].j
        for st in steps[1:]:
            if st.accepted:
                ni, nj = st.i, st.j
            else:
                ni, nj = pi, pj
            if pi < full_i:
                push(Phase.PHASE1, ni - pi)
            else:
                push(Phase.PHASE2, nj - pj)
            pi, pj = ni, nj

    records = []
    for phase in (Phase.PHASE1, Phase.PHASE2):
        cnt, mean, m2 = acc[phase]
        if cnt == 0:
            records.append(DriftRecord(phase, None, None, 0))
        else:
            var = m2 / cnt
            records.append(DriftRecord(
                phase, mean, math.sqrt(var / cnt), cnt))
    return records


def fit_linear(cells: list[SweepCell]) -> tuple[float, float, float]:
    """OLS of cell mean against n; returns (slope, intercept, r_squared).

    Degenerate (constant-mean) inputs return slope 0 and NaN r_squared.
    """
    if len(cells) < 3:
        raise ValueError("need at least 3 cells to fit")
    if len({(c.mode, c.semantics) for c in cells}) != 1:
        raise ValueError("cells must share mode and semantics")
    if len({c.n for c in cells}) != len(cells):
        raise ValueError("cells must have distinct n")
    x = np.array([c.n for c in cells], dtype=float)
    y = np.array([c.mean for c in cells], dtype=float)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return 0.0, float(y.mean()), float("nan")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), float(intercept), r2


def check_bounds(cells: list[SweepCell]) -> list[BoundCheck]:
    """Empirical means against the proven per-mode runtime bounds.

    One-bit: mean + 3 SE must stay below 63n/4. Multi-bit: mean - 3 SE must
    stay above n/5.
    """
    report = []
    for c in cells:
        if c.mode is Mode.ONE_BIT:
            bound = 63 * c.n / 4
            observed = c.mean + 3 * c.std_error
            passed = observed <= bound
        else:
            bound = c.n / 5
            observed = c.mean - 3 * c.std_error
            passed = observed >= bound
        report.append(BoundCheck(n=c.n, mode=c.mode, semantics=c.semantics,
                                 bound=bound, observed=observed, passed=passed))
    return report


def initialization_distribution(s: int) -> np.ndarray:
    """Exact law of the initial B+C block total: index z in [0, 2s]."""
    z = np.arange(2 * s + 1)
    return (np.minimum(z, 2 * s - z) + 1) / (s + 1) ** 2

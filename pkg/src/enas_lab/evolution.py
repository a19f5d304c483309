"""(1+1) elitist search over block counts with one-bit or multi-bit mutation.

Mutation applies Add / Remove / Modify operators; the multi-bit mode draws the
number of applications K with K-1 ~ Poisson(1) via the product method, so a
trial is a pure function of its seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from .geometry import make_instance
from .fitness import (
    Architecture,
    BlockType,
    Semantics,
    greedy_levels_raw,
    literal_levels_raw,
)

_POISSON_FLOOR = math.exp(-1.0)

_KINDS = (BlockType.A, BlockType.B, BlockType.C)


class Mode(Enum):
    ONE_BIT = "onebit"
    MULTI_BIT = "multibit"


class Action(Enum):
    ADD = "add"
    REMOVE = "remove"
    MODIFY = "modify"


@dataclass(frozen=True)
class MutationOp:
    action: Action
    kind: BlockType
    dest: BlockType | None = None  # Modify only

    def __post_init__(self):
        if self.action is Action.MODIFY:
            if self.dest is None or self.dest is self.kind:
                raise ValueError("Modify needs a distinct destination kind")
        elif self.dest is not None:
            raise ValueError(f"{self.action} takes no destination kind")


@dataclass(frozen=True)
class TrialConfig:
    n: int
    s: int
    mode: Mode
    semantics: Semantics
    seed: int
    max_generations: int = 10**7
    record_trajectory: bool = False
    strict_selection: bool = False


@dataclass(frozen=True)
class TrajectoryStep:
    generation: int
    n_a: int
    n_b: int
    n_c: int
    i: int
    j: int
    accepted: bool
    k: int


@dataclass(frozen=True)
class TrialResult:
    generations: int
    initial: Architecture
    final: Architecture
    hit_cap: bool
    trajectory: tuple[TrajectoryStep, ...] | None = None


def init_architecture(s: int, rng: random.Random) -> Architecture:
    """Independent uniform draws from {0, ..., s} per block type."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return Architecture(n_a=rng.randint(0, s),
                        n_b=rng.randint(0, s),
                        n_c=rng.randint(0, s))


def sample_op(rng: random.Random) -> MutationOp:
    """One operator draw: class 1/3 each, kind 1/3 each, Modify dest 1/2 each."""
    u = rng.random()
    action = Action.ADD if u < 1 / 3 else Action.REMOVE if u < 2 / 3 else Action.MODIFY
    v = rng.random()
    kind = _KINDS[0] if v < 1 / 3 else _KINDS[1] if v < 2 / 3 else _KINDS[2]
    if action is not Action.MODIFY:
        return MutationOp(action=action, kind=kind)
    others = tuple(k for k in _KINDS if k is not kind)
    dest = others[0] if rng.random() < 0.5 else others[1]
    return MutationOp(action=Action.MODIFY, kind=kind, dest=dest)


def apply_op(x: Architecture, op: MutationOp) -> Architecture:
    """Apply one operator; Remove and Modify on an empty kind are no-ops."""
    counts = {BlockType.A: x.n_a, BlockType.B: x.n_b, BlockType.C: x.n_c}
    if op.action is Action.ADD:
        counts[op.kind] += 1
    elif op.action is Action.REMOVE:
        if counts[op.kind] > 0:
            counts[op.kind] -= 1
    else:
        if counts[op.kind] > 0:
            counts[op.kind] -= 1
            counts[op.dest] += 1
    return Architecture(n_a=counts[BlockType.A],
                        n_b=counts[BlockType.B],
                        n_c=counts[BlockType.C])


def sample_k(mode: Mode, rng: random.Random) -> int:
    """Number of operator applications in one generation."""
    if mode is Mode.ONE_BIT:
        return 1
    # Product-form Poisson(1) sampler: multiply uniforms until below 1/e.
    k = 0
    p = 1.0
    while True:
        k += 1
        p *= rng.random()
        if p <= _POISSON_FLOOR:
            break
    return k  # 1 + Poisson(1) since the loop runs Poisson(1)+1 times


def mutate(x: Architecture, mode: Mode,
           rng: random.Random) -> tuple[Architecture, int]:
    """K sequential operator applications; returns the offspring and K."""
    k = sample_k(mode, rng)
    y = x
    for _ in range(k):
        y = apply_op(y, sample_op(rng))
    return y, k


def _mutate_counts(n_a: int, n_b: int, n_c: int, one_bit: bool,
                   rand) -> tuple[int, int, int, int]:
    """Hot-loop twin of mutate(): same uniform stream, raw int counts.

    Must draw exactly what sample_k + K * sample_op draw, in the same order,
    so that trials stay bit-reproducible against the public operators.
    """
    if one_bit:
        k = 1
    else:
        k = 0
        p = 1.0
        while True:
            k += 1
            p *= rand()
            if p <= _POISSON_FLOOR:
                break
    for _ in range(k):
        u = rand()
        v = rand()
        if u < 1 / 3:  # add
            if v < 1 / 3:
                n_a += 1
            elif v < 2 / 3:
                n_b += 1
            else:
                n_c += 1
        elif u < 2 / 3:  # remove
            if v < 1 / 3:
                if n_a:
                    n_a -= 1
            elif v < 2 / 3:
                if n_b:
                    n_b -= 1
            else:
                if n_c:
                    n_c -= 1
        else:  # modify; dest draw happens regardless of availability
            if v < 1 / 3:
                w = rand()
                if n_a:
                    n_a -= 1
                    if w < 0.5:
                        n_b += 1
                    else:
                        n_c += 1
            elif v < 2 / 3:
                w = rand()
                if n_b:
                    n_b -= 1
                    if w < 0.5:
                        n_a += 1
                    else:
                        n_c += 1
            else:
                w = rand()
                if n_c:
                    n_c -= 1
                    if w < 0.5:
                        n_a += 1
                    else:
                        n_b += 1
    return n_a, n_b, n_c, k


def run_trial(cfg: TrialConfig) -> TrialResult:
    """Single elitist run; generations counts offspring evaluations."""
    inst = make_instance(cfg.n)
    a, b, c = inst.a, inst.b, inst.c
    ti, tj = inst.optimal_levels
    literal = cfg.semantics is Semantics.LITERAL
    strict = cfg.strict_selection
    one_bit = cfg.mode is Mode.ONE_BIT

    rng = random.Random(cfg.seed)
    rand = rng.random
    initial = init_architecture(cfg.s, rng)
    n_a, n_b, n_c = initial.as_tuple()

    levels = literal_levels_raw if literal else greedy_levels_raw
    i, j = levels(n_a, n_b, n_c, a, b, c)
    traj: list[TrajectoryStep] | None = None
    if cfg.record_trajectory:
        traj = [TrajectoryStep(0, n_a, n_b, n_c, i, j, True, 0)]

    generations = 0
    hit_cap = False
    max_gens = cfg.max_generations
    while i != ti or j != tj:
        if generations >= max_gens:
            hit_cap = True
            break
        generations += 1
        ya, yb, yc, k = _mutate_counts(n_a, n_b, n_c, one_bit, rand)
        yi, yj = levels(ya, yb, yc, a, b, c)
        if strict:
            accepted = yi > i or (yi == i and yj > j)
        else:
            accepted = yi > i or (yi == i and yj >= j)
        if accepted:
            n_a, n_b, n_c, i, j = ya, yb, yc, yi, yj
        if traj is not None:
            traj.append(TrajectoryStep(generations, ya, yb, yc,
                                       yi, yj, accepted, k))

    return TrialResult(
        generations=generations,
        initial=initial,
        final=Architecture(n_a, n_b, n_c),
        hit_cap=hit_cap,
        trajectory=tuple(traj) if traj is not None else None,
    )

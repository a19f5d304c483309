"""Architecture fitness, two ways.

Literal semantics evaluates the closed-form level bookkeeping directly from
the block counts. Placement semantics asks what the best geometric assignment
of those blocks to regions achieves; a deterministic greedy computes it and a
brute-force enumerator serves as the independent oracle. Selection compares
integer level pairs only, never floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .geometry import UniformInstance


class BlockType(Enum):
    A = "A"
    B = "B"
    C = "C"


class Semantics(Enum):
    LITERAL = "literal"
    PLACEMENT = "placement"


@dataclass(frozen=True)
class Architecture:
    """Search point: how many blocks of each type the network has."""

    n_a: int
    n_b: int
    n_c: int

    def __post_init__(self):
        if self.n_a < 0 or self.n_b < 0 or self.n_c < 0:
            raise ValueError(f"negative block count in {self}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_a, self.n_b, self.n_c)


@dataclass(frozen=True)
class FitnessScore:
    i: int
    j: int
    value: float
    semantics: Semantics


@dataclass(frozen=True)
class Allocation:
    """Assignment of blocks to regions.

    b_on_b / b_on_c: B-blocks covering whole B- / C-sectors.
    c_on_c / c_on_b: C-blocks covering C- / B-sector triangles.
    a_on_a / a_on_b: A-blocks covering A- / B-sector segments.
    """

    b_on_b: int = 0
    b_on_c: int = 0
    c_on_c: int = 0
    c_on_b: int = 0
    a_on_a: int = 0
    a_on_b: int = 0

    def as_tuple(self) -> tuple[int, int, int, int, int, int]:
        return (self.b_on_b, self.b_on_c, self.c_on_c,
                self.c_on_b, self.a_on_a, self.a_on_b)


def check_feasible(al: Allocation, x: Architecture, inst: UniformInstance) -> None:
    """Raise ValueError unless al is a feasible placement of x's blocks."""
    if any(v < 0 for v in al.as_tuple()):
        raise ValueError(f"negative field in {al}")
    if al.b_on_b + al.b_on_c > x.n_b:
        raise ValueError("more B blocks placed than available")
    if al.c_on_c + al.c_on_b > x.n_c:
        raise ValueError("more C blocks placed than available")
    if al.a_on_a + al.a_on_b > x.n_a:
        raise ValueError("more A blocks placed than available")
    if al.b_on_b + al.c_on_b > inst.b:
        raise ValueError("B-sector triangles over-covered")
    if al.c_on_c + al.b_on_c > inst.c:
        raise ValueError("C-sectors over-covered")
    if al.a_on_a > inst.a:
        raise ValueError("A-sector segments over-covered")
    if al.b_on_b + al.a_on_b > inst.b:
        raise ValueError("B-sector segments over-covered")


def literal_levels(x: Architecture, inst: UniformInstance) -> tuple[int, int]:
    """Closed-form level pair (i, j) from raw block counts."""
    return literal_levels_raw(x.n_a, x.n_b, x.n_c, inst.a, inst.b, inst.c)


def literal_levels_raw(n_a: int, n_b: int, n_c: int,
                       a: int, b: int, c: int) -> tuple[int, int]:
    i = min(n_b, b) + min(n_c, c)
    j = min(n_a, a) + min(n_b, b) - max(0, min(n_b - b, c - n_c))
    return i, j


def levels_value(inst: UniformInstance, i: int, j: int) -> float:
    """Classification accuracy implied by a level pair."""
    return ((inst.n / 2 + i) * inst.triangle_area
            + (inst.n / 4 + j) * inst.segment_area) / math.pi


def literal_fitness(x: Architecture, inst: UniformInstance) -> FitnessScore:
    i, j = literal_levels(x, inst)
    return FitnessScore(i=i, j=j, value=levels_value(inst, i, j),
                        semantics=Semantics.LITERAL)


def allocation_levels(al: Allocation, x: Architecture | None = None,
                      inst: UniformInstance | None = None) -> tuple[int, int]:
    """Level pair achieved by an explicit placement.

    Every covered triangle adds to i; B-blocks misplaced on C-sectors cover a
    white segment each, subtracting from j. Pass x and inst to also check
    feasibility.
    """
    if x is not None and inst is not None:
        check_feasible(al, x, inst)
    i = al.b_on_b + al.c_on_b + al.c_on_c + al.b_on_c
    j = al.b_on_b + al.a_on_b + al.a_on_a - al.b_on_c
    return i, j


def greedy_levels_raw(n_a: int, n_b: int, n_c: int,
                      a: int, b: int, c: int) -> tuple[int, int]:
    """Level pair of best_allocation_greedy without building the Allocation."""
    b_on_b = min(n_b, b)
    c_on_c = min(n_c, c)
    c_on_b = min(n_c - c_on_c, b - b_on_b)
    b_on_c = min(n_b - b_on_b, c - c_on_c)
    a_on_a = min(n_a, a)
    a_on_b = min(n_a - a_on_a, b - b_on_b)
    return (b_on_b + c_on_b + c_on_c + b_on_c,
            b_on_b + a_on_b + a_on_a - b_on_c)


def best_allocation_greedy(x: Architecture, inst: UniformInstance) -> Allocation:
    """Deterministic optimal placement: own-kind regions first, then fill-ins."""
    b, c, a = inst.b, inst.c, inst.a
    b_on_b = min(x.n_b, b)
    c_on_c = min(x.n_c, c)
    c_on_b = min(x.n_c - c_on_c, b - b_on_b)
    b_on_c = min(x.n_b - b_on_b, c - c_on_c)
    a_on_a = min(x.n_a, a)
    a_on_b = min(x.n_a - a_on_a, b - b_on_b)
    return Allocation(b_on_b=b_on_b, b_on_c=b_on_c, c_on_c=c_on_c,
                      c_on_b=c_on_b, a_on_a=a_on_a, a_on_b=a_on_b)


def best_allocation_bruteforce(x: Architecture, inst: UniformInstance,
                               cap: int = 12) -> Allocation:
    """Exhaustive placement oracle.

    Block counts are clamped to their maximum useful values before
    enumeration (extra blocks cannot change the score). Ties on the score
    break toward the lexicographically smallest field tuple, which the
    lexicographic iteration order delivers for free.
    """
    a, b, c = inst.a, inst.b, inst.c
    n_a = min(x.n_a, a + b)
    n_b = min(x.n_b, b + c)
    n_c = min(x.n_c, b + c)
    if max(n_a, n_b, n_c) > cap:
        raise ValueError(
            f"enumeration budget exceeded: effective counts {(n_a, n_b, n_c)} "
            f"vs cap {cap}"
        )
    # Score order on (i, j) equals the order of T*i + S*j: allocation level
    # pairs span j-ranges narrower than n and T > n*S for every accepted n.
    best = None
    best_key = None
    for b_on_b in range(min(n_b, b) + 1):
        for b_on_c in range(min(n_b - b_on_b, c) + 1):
            for c_on_c in range(min(n_c, c - b_on_c) + 1):
                for c_on_b in range(min(n_c - c_on_c, b - b_on_b) + 1):
                    for a_on_a in range(min(n_a, a) + 1):
                        for a_on_b in range(
                                min(n_a - a_on_a, b - b_on_b) + 1):
                            i = b_on_b + c_on_b + c_on_c + b_on_c
                            j = b_on_b + a_on_b + a_on_a - b_on_c
                            if best_key is None or (i, j) > best_key:
                                best_key = (i, j)
                                best = (b_on_b, b_on_c, c_on_c,
                                        c_on_b, a_on_a, a_on_b)
    return Allocation(*best)


def placement_fitness(x: Architecture, inst: UniformInstance) -> FitnessScore:
    al = best_allocation_greedy(x, inst)
    i, j = allocation_levels(al)
    return FitnessScore(i=i, j=j, value=levels_value(inst, i, j),
                        semantics=Semantics.PLACEMENT)


def fitness(x: Architecture, inst: UniformInstance,
            semantics: Semantics) -> FitnessScore:
    if semantics is Semantics.LITERAL:
        return literal_fitness(x, inst)
    return placement_fitness(x, inst)


def compare(fa: FitnessScore, fb: FitnessScore) -> int:
    """-1, 0 or 1 ordering fa against fb by exact integer levels.

    Lexicographic order on (i, j) matches the order of the real accuracy
    values, so no float comparison is needed.
    """
    if fa.semantics is not fb.semantics:
        raise ValueError(
            f"cannot compare {fa.semantics.value} with {fb.semantics.value} scores"
        )
    ka, kb = (fa.i, fa.j), (fb.i, fb.j)
    return (ka > kb) - (ka < kb)


def is_optimal(x: Architecture, inst: UniformInstance,
               semantics: Semantics) -> bool:
    """Whether x reaches the top level pair (b+c, a+b) under semantics."""
    if semantics is Semantics.LITERAL:
        levels = literal_levels(x, inst)
    else:
        levels = greedy_levels_raw(x.n_a, x.n_b, x.n_c,
                                   inst.a, inst.b, inst.c)
    return levels == inst.optimal_levels

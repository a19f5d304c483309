"""Threshold-neuron networks realizing an allocation, plus Monte Carlo accuracy.

A block is an AND of binary threshold units; the classifier ORs the blocks.
Unit parameters are fixed geometrically (no training): B-blocks carve out a
whole sector with two zero-bias half-planes, C-blocks add a chord unit to keep
only the triangle, A-blocks keep only the segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .fitness import Allocation, BlockType, check_feasible, Architecture
from .geometry import (
    TWO_PI,
    DiskPoint,
    UniformInstance,
    label_points,
    sample_disk_points,
)


class Sense(Enum):
    AT_LEAST = ">="
    AT_MOST = "<="


@dataclass(frozen=True)
class ThresholdUnit:
    weight_angle: float
    bias: float
    sense: Sense

    def fires(self, r: float, phi: float) -> bool:
        proj = r * math.cos(phi - self.weight_angle)
        if self.sense is Sense.AT_LEAST:
            return proj >= self.bias
        return proj <= self.bias


@dataclass(frozen=True)
class PlacedBlock:
    kind: BlockType
    sector: int
    units: tuple[ThresholdUnit, ...]

    def output(self, r: float, phi: float) -> bool:
        return all(u.fires(r, phi) for u in self.units)


def make_block(kind: BlockType, sector: int, inst: UniformInstance) -> PlacedBlock:
    """Block of the given kind aimed at a concrete sector."""
    width = inst.sector_angle
    lo = sector * width
    center = lo + width / 2.0
    chord = inst.chord_offset
    sector_units = (
        ThresholdUnit(lo + math.pi / 2.0, 0.0, Sense.AT_LEAST),
        ThresholdUnit(lo + width - math.pi / 2.0, 0.0, Sense.AT_LEAST),
    )
    if kind is BlockType.A:
        units = (ThresholdUnit(center, chord, Sense.AT_LEAST),)
    elif kind is BlockType.B:
        units = sector_units
    else:
        units = sector_units + (ThresholdUnit(center, chord, Sense.AT_MOST),)
    return PlacedBlock(kind=kind, sector=sector, units=units)


@dataclass(frozen=True)
class Classifier:
    instance: UniformInstance
    blocks: tuple[PlacedBlock, ...]


def build_network(al: Allocation, inst: UniformInstance,
                  x: Architecture | None = None) -> Classifier:
    """Materialize an allocation as placed blocks on concrete sectors.

    Assignment is deterministic, lowest sector index first within each
    allocation field. Pass x to check feasibility against the architecture.
    """
    if x is not None:
        check_feasible(al, x, inst)
    else:
        check_feasible(
            al,
            Architecture(n_a=al.a_on_a + al.a_on_b,
                         n_b=al.b_on_b + al.b_on_c,
                         n_c=al.c_on_c + al.c_on_b),
            inst,
        )
    b_sectors = [k for k in range(inst.n) if k % 4 == 0]
    c_sectors = [k for k in range(inst.n) if k % 4 == 2]
    a_sectors = [k for k in range(inst.n) if k % 4 in (1, 3)]

    blocks: list[PlacedBlock] = []
    for k in b_sectors[: al.b_on_b]:
        blocks.append(make_block(BlockType.B, k, inst))
    for k in c_sectors[: al.c_on_c]:
        blocks.append(make_block(BlockType.C, k, inst))
    for k in b_sectors[al.b_on_b: al.b_on_b + al.c_on_b]:
        blocks.append(make_block(BlockType.C, k, inst))
    for k in c_sectors[al.c_on_c: al.c_on_c + al.b_on_c]:
        blocks.append(make_block(BlockType.B, k, inst))
    for k in a_sectors[: al.a_on_a]:
        blocks.append(make_block(BlockType.A, k, inst))
    for k in b_sectors[al.b_on_b: al.b_on_b + al.a_on_b]:
        blocks.append(make_block(BlockType.A, k, inst))
    return Classifier(instance=inst, blocks=tuple(blocks))


def classify(cl: Classifier, p: DiskPoint) -> int:
    """OR over blocks of AND over threshold units."""
    phi = p.phi % TWO_PI
    return 1 if any(b.output(p.r, phi) for b in cl.blocks) else 0


def classify_batch(cl: Classifier, r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorized classify over coordinate arrays."""
    phi = np.mod(phi, TWO_PI)
    out = np.zeros(r.shape, dtype=bool)
    for block in cl.blocks:
        fired = np.ones(r.shape, dtype=bool)
        for u in block.units:
            proj = r * np.cos(phi - u.weight_angle)
            if u.sense is Sense.AT_LEAST:
                fired &= proj >= u.bias
            else:
                fired &= proj <= u.bias
        out |= fired
    return out.astype(np.int64)


def monte_carlo_accuracy(cl: Classifier, samples: int,
                         rng: np.random.Generator) -> tuple[float, float]:
    """Accuracy estimate and its standard error from uniform disk samples."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    correct = 0
    remaining = samples
    batch = 1 << 18
    while remaining > 0:
        m = min(batch, remaining)
        r, phi = sample_disk_points(rng, m)
        labels = label_points(cl.instance, r, phi)
        preds = classify_batch(cl, r, phi)
        correct += int(np.sum(preds == labels))
        remaining -= m
    p = correct / samples
    return p, math.sqrt(p * (1.0 - p) / samples)

"""Unit-disk classification instance: sector layout, region areas, point labels.

The disk is cut into n equal sectors. Each sector splits into an inscribed
isoceles triangle (apex at the origin, base on the chord) and the circular
segment beyond the chord. Sectors come in three kinds:

* A: segment labeled 1, triangle labeled 0 (a half-space suffices),
* B: whole sector labeled 1,
* C: triangle labeled 1, segment labeled 0.

Counts are a = n/2 A-sectors and b = c = n/4 B/C-sectors, which forces
n to be a multiple of 4.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi


class RegionKind(Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class UniformInstance:
    """Immutable problem instance for a given sector count n."""

    n: int
    a: int
    b: int
    c: int
    triangle_area: float
    segment_area: float

    @property
    def sector_angle(self) -> float:
        return TWO_PI / self.n

    @property
    def chord_offset(self) -> float:
        # r*cos(psi - pi/n) <= cos(pi/n) puts a point in the triangle.
        return math.cos(math.pi / self.n)

    @property
    def optimal_levels(self) -> tuple[int, int]:
        return self.b + self.c, self.a + self.b


@dataclass(frozen=True)
class RegionSpec:
    index: int
    kind: RegionKind


@dataclass(frozen=True)
class DiskPoint:
    r: float
    phi: float


def make_instance(n: int) -> UniformInstance:
    """Build the instance for sector count n (n >= 8 and divisible by 4)."""
    if n < 8 or n % 4 != 0:
        raise ValueError(
            f"n={n} is invalid: need n >= 8 and n divisible by 4 "
            "(region counts a=n/2, b=c=n/4 must be integers)"
        )
    t = 0.5 * math.sin(TWO_PI / n)
    s = math.pi / n - t
    inst = UniformInstance(
        n=n, a=n // 2, b=n // 4, c=n // 4, triangle_area=t, segment_area=s
    )
    # Exact selection (compare on integer level pairs) relies on one triangle
    # outweighing every segment the level bookkeeping can reach.
    if t - (3 * n / 4) * s <= 0:
        raise ValueError(f"dominance inequality fails at n={n}")
    return inst


def region_of(inst: UniformInstance, k: int) -> RegionSpec:
    """Kind of sector k under the canonical period-4 layout B,A,C,A."""
    if not 0 <= k < inst.n:
        raise IndexError(f"sector index {k} out of range [0, {inst.n})")
    m = k % 4
    if m == 0:
        kind = RegionKind.B
    elif m == 2:
        kind = RegionKind.C
    else:
        kind = RegionKind.A
    return RegionSpec(index=k, kind=kind)


def sector_of(inst: UniformInstance, phi: float) -> int:
    """Sector index containing angle phi; boundary rays go to the lower index."""
    phi = phi % TWO_PI
    k = int(phi / inst.sector_angle)
    return min(k, inst.n - 1)


def in_triangle(inst: UniformInstance, r: float, psi: float) -> bool:
    """Whether (r, psi-within-sector) lies in the inscribed triangle.

    Points exactly on the chord count as triangle points.
    """
    return r * math.cos(psi - math.pi / inst.n) <= inst.chord_offset


def label_point(inst: UniformInstance, p: DiskPoint) -> int:
    """True label (0 or 1) of a point on the disk."""
    phi = p.phi % TWO_PI
    k = sector_of(inst, phi)
    kind = region_of(inst, k).kind
    if kind is RegionKind.B:
        return 1
    tri = in_triangle(inst, p.r, phi - k * inst.sector_angle)
    if kind is RegionKind.C:
        return 1 if tri else 0
    return 0 if tri else 1


def label_points(inst: UniformInstance, r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Vectorized label_point over arrays of polar coordinates."""
    phi = np.mod(phi, TWO_PI)
    k = np.minimum((phi / inst.sector_angle).astype(np.int64), inst.n - 1)
    psi = phi - k * inst.sector_angle
    tri = r * np.cos(psi - math.pi / inst.n) <= inst.chord_offset
    m = k % 4
    is_b = m == 0
    is_c = m == 2
    labels = np.where(is_b, 1, np.where(is_c, tri, ~tri))
    return labels.astype(np.int64)


def sample_disk_point(rng) -> DiskPoint:
    """Uniform point on the unit disk from two unit uniforms of rng."""
    u = rng.random()
    v = rng.random()
    return DiskPoint(r=math.sqrt(u), phi=TWO_PI * v)


def sample_disk_points(rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized uniform sampling; returns (r, phi) arrays."""
    u = rng.random(count)
    v = rng.random(count)
    return np.sqrt(u), TWO_PI * v


def green_fraction(inst: UniformInstance) -> float:
    """Total measure of label-1 points divided by the disk area."""
    t, s = inst.triangle_area, inst.segment_area
    return (inst.b * (t + s) + inst.a * s + inst.c * t) / math.pi

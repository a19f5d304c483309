import math

import numpy as np
import pytest

from enas_lab import (
    DiskPoint,
    RegionKind,
    green_fraction,
    label_point,
    make_instance,
    region_of,
    sample_disk_point,
)
from enas_lab.geometry import TWO_PI, label_points, sample_disk_points

# evaluated to double precision ahead of time from the area formulas
T16 = 0.1913417161825449
S16 = 0.005007824666817179


class FakeRng:
    """Feeds a fixed list of unit uniforms."""

    def __init__(self, values):
        self.values = list(values)

    def random(self):
        return self.values.pop(0)


def test_make_instance_n16():
    inst = make_instance(16)
    assert (inst.a, inst.b, inst.c) == (8, 4, 4)
    assert inst.triangle_area == pytest.approx(T16, abs=1e-15)
    assert inst.segment_area == pytest.approx(S16, abs=1e-15)


@pytest.mark.parametrize("bad_n", [10, 7, 4, 0, -8, 14])
def test_make_instance_rejects_bad_n(bad_n):
    with pytest.raises(ValueError, match="divisible by 4"):
        make_instance(bad_n)


@pytest.mark.parametrize("n", range(8, 204, 4))
def test_area_tiling_and_dominance(n):
    inst = make_instance(n)
    assert abs(n * (inst.triangle_area + inst.segment_area) - math.pi) <= 1e-12
    assert inst.triangle_area - (3 * n / 4) * inst.segment_area > 0
    assert inst.triangle_area > 0 and inst.segment_area > 0


def test_region_layout(inst16):
    assert region_of(inst16, 0).kind is RegionKind.B
    assert region_of(inst16, 2).kind is RegionKind.C
    assert region_of(inst16, 15).kind is RegionKind.A
    kinds = [region_of(inst16, k).kind for k in range(16)]
    assert kinds.count(RegionKind.A) == inst16.a
    assert kinds.count(RegionKind.B) == inst16.b
    assert kinds.count(RegionKind.C) == inst16.c
    with pytest.raises(IndexError):
        region_of(inst16, 16)
    with pytest.raises(IndexError):
        region_of(inst16, -1)


def test_label_examples(inst16):
    width = inst16.sector_angle
    # origin falls in sector 0, a fully-green B sector
    assert label_point(inst16, DiskPoint(0.0, 0.0)) == 1
    # arc point of a C sector sits in the white segment
    assert label_point(inst16, DiskPoint(1.0, 2.5 * width)) == 0
    # interior point of an A sector sits in the white triangle
    assert label_point(inst16, DiskPoint(0.5, 1.5 * width)) == 0
    # arc point of an A sector sits in the green segment
    assert label_point(inst16, DiskPoint(1.0, 1.5 * width)) == 1
    # B sector: both parts green
    assert label_point(inst16, DiskPoint(1.0, 0.5 * width)) == 1


def test_label_totality_and_vector_agreement(inst16):
    rng = np.random.default_rng(1)
    r, phi = sample_disk_points(rng, 2000)
    vec = label_points(inst16, r, phi)
    scalar = [label_point(inst16, DiskPoint(ri, pi)) for ri, pi in zip(r, phi)]
    assert set(vec.tolist()) <= {0, 1}
    assert vec.tolist() == scalar


def test_sample_disk_point_endpoints():
    p = sample_disk_point(FakeRng([0.0, 0.0]))
    assert (p.r, p.phi) == (0.0, 0.0)
    p = sample_disk_point(FakeRng([1.0, 0.5]))
    assert p.r == 1.0
    assert p.phi == pytest.approx(math.pi)


def test_sample_disk_point_radius_mean():
    rng = np.random.default_rng(7)
    r, _ = sample_disk_points(rng, 1_000_000)
    assert float(r.mean()) == pytest.approx(2 / 3, abs=1e-3)


def test_monte_carlo_label_fraction(inst16):
    rng = np.random.default_rng(11)
    r, phi = sample_disk_points(rng, 1_000_000)
    frac = float(label_points(inst16, r, phi).mean())
    expected = green_fraction(inst16)
    se = math.sqrt(expected * (1 - expected) / 1_000_000)
    assert abs(frac - expected) <= 4 * se


def test_green_fraction_value(inst16):
    assert green_fraction(inst16) == pytest.approx(0.5063761603988918, abs=1e-12)


def test_phi_normalization(inst16):
    assert label_point(inst16, DiskPoint(1.0, TWO_PI + 0.5 * inst16.sector_angle)) == 1

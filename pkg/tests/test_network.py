import math

import numpy as np
import pytest

from enas_lab import (
    Allocation,
    Architecture,
    BlockType,
    DiskPoint,
    build_network,
    classify,
    classify_batch,
    best_allocation_greedy,
    make_block,
    monte_carlo_accuracy,
    placement_fitness,
)
from enas_lab.geometry import in_triangle, label_points, sample_disk_points, sector_of

SINGLE_C_ACCURACY_16 = 0.5545297995013853  # empty-classifier accuracy plus T/pi

CANONICAL_16 = Allocation(b_on_b=4, c_on_c=4, a_on_a=8)


def _points(n_points, seed):
    rng = np.random.default_rng(seed)
    return sample_disk_points(rng, n_points)


def test_empty_classifier_outputs_zero(inst16):
    cl = build_network(Allocation(), inst16)
    assert classify(cl, DiskPoint(0.3, 1.0)) == 0
    r, phi = _points(1000, 0)
    assert not classify_batch(cl, r, phi).any()


def test_optimal_classifier_matches_labels(inst16):
    cl = build_network(CANONICAL_16, inst16, Architecture(8, 4, 4))
    r, phi = _points(100_000, 1)
    preds = classify_batch(cl, r, phi)
    labels = label_points(inst16, r, phi)
    assert int(np.sum(preds != labels)) <= 5


def test_optimal_classifier_scalar_examples(inst16):
    cl = build_network(CANONICAL_16, inst16)
    width = inst16.sector_angle
    assert classify(cl, DiskPoint(1.0, 0.5 * width)) == 1   # B sector arc
    assert classify(cl, DiskPoint(1.0, 2.5 * width)) == 0   # C sector arc


@pytest.mark.parametrize("kind", list(BlockType))
def test_block_region_contract(inst16, kind):
    sector = {BlockType.A: 1, BlockType.B: 0, BlockType.C: 2}[kind]
    block = make_block(kind, sector, inst16)
    r, phi = _points(100_000, 2)
    mismatches = 0
    for ri, pi in zip(r, phi):
        out = block.output(ri, pi)
        in_sector = sector_of(inst16, pi) == sector
        tri = in_triangle(inst16, ri, pi - sector * inst16.sector_angle)
        if kind is BlockType.B:
            want = in_sector
        elif kind is BlockType.C:
            want = in_sector and tri
        else:
            want = in_sector and not tri
        mismatches += out != want
    assert mismatches <= 5


def test_single_c_block_accuracy(inst16):
    cl = build_network(Allocation(c_on_c=1), inst16)
    # the lone C block sits on the lowest-index C sector (sector 2)
    assert cl.blocks[0].sector == 2
    est, se = monte_carlo_accuracy(cl, 1_000_000, np.random.default_rng(3))
    assert abs(est - SINGLE_C_ACCURACY_16) <= 4 * se


def test_monte_carlo_empty_matches_literal(inst16):
    cl = build_network(Allocation(), inst16)
    est, se = monte_carlo_accuracy(cl, 1_000_000, np.random.default_rng(4))
    assert abs(est - 0.4936238396011082) <= 4 * se


def test_monte_carlo_optimal_is_exact(inst16):
    cl = build_network(CANONICAL_16, inst16)
    est, se = monte_carlo_accuracy(cl, 200_000, np.random.default_rng(5))
    assert est == 1.0
    assert se == 0.0


def test_monte_carlo_matches_placement_fitness(inst16):
    x = Architecture(8, 6, 2)
    score = placement_fitness(x, inst16)
    cl = build_network(best_allocation_greedy(x, inst16), inst16, x)
    est, se = monte_carlo_accuracy(cl, 1_000_000, np.random.default_rng(6))
    assert abs(est - score.value) <= 4 * se


def test_build_network_rejects_infeasible(inst16):
    with pytest.raises(ValueError):
        build_network(Allocation(b_on_b=5), inst16, Architecture(0, 9, 0))
    with pytest.raises(ValueError):
        build_network(Allocation(b_on_b=2), inst16, Architecture(0, 1, 0))


def test_monte_carlo_rejects_zero_samples(inst16):
    cl = build_network(Allocation(), inst16)
    with pytest.raises(ValueError):
        monte_carlo_accuracy(cl, 0, np.random.default_rng(0))


def test_block_unit_shapes(inst16):
    a = make_block(BlockType.A, 1, inst16)
    b = make_block(BlockType.B, 0, inst16)
    c = make_block(BlockType.C, 2, inst16)
    assert len(a.units) == 1 and len(b.units) == 2 and len(c.units) == 3
    chord = math.cos(math.pi / inst16.n)
    assert a.units[0].bias == pytest.approx(chord)
    assert all(u.bias == 0.0 for u in b.units)
    assert c.units[2].bias == pytest.approx(chord)

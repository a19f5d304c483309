import math
import random
from collections import Counter

import pytest

from enas_lab import (
    Action,
    Architecture,
    BlockType,
    Mode,
    MutationOp,
    Semantics,
    TrialConfig,
    apply_op,
    init_architecture,
    mutate,
    run_trial,
    sample_k,
    sample_op,
)
from enas_lab.evolution import _mutate_counts


def test_init_architecture_bounds():
    rng = random.Random(0)
    assert init_architecture(0, rng).as_tuple() == (0, 0, 0)
    for _ in range(200):
        x = init_architecture(4, rng)
        assert all(0 <= v <= 4 for v in x.as_tuple())
    with pytest.raises(ValueError):
        init_architecture(-1, rng)


def test_init_z0_law_small():
    # s=1: four equally likely outcomes for (n_b, n_c), two of them sum to 1
    rng = random.Random(1)
    count = 0
    draws = 100_000
    for _ in range(draws):
        x = init_architecture(1, rng)
        count += (x.n_b + x.n_c) == 1
    se = math.sqrt(0.25 / draws)
    assert abs(count / draws - 0.5) <= 4 * se


def test_apply_op_examples():
    assert apply_op(Architecture(0, 0, 0),
                    MutationOp(Action.REMOVE, BlockType.A)).as_tuple() == (0, 0, 0)
    assert apply_op(Architecture(1, 2, 3),
                    MutationOp(Action.MODIFY, BlockType.B, BlockType.C)
                    ).as_tuple() == (1, 1, 4)
    assert apply_op(Architecture(0, 2, 3),
                    MutationOp(Action.MODIFY, BlockType.A, BlockType.B)
                    ).as_tuple() == (0, 2, 3)
    assert apply_op(Architecture(0, 0, 0),
                    MutationOp(Action.ADD, BlockType.B)).as_tuple() == (0, 1, 0)


def test_mutation_op_validation():
    with pytest.raises(ValueError):
        MutationOp(Action.MODIFY, BlockType.A, BlockType.A)
    with pytest.raises(ValueError):
        MutationOp(Action.MODIFY, BlockType.A)
    with pytest.raises(ValueError):
        MutationOp(Action.ADD, BlockType.A, BlockType.B)


def test_sample_op_distribution():
    rng = random.Random(2)
    draws = 100_000
    counts = Counter()
    for _ in range(draws):
        op = sample_op(rng)
        counts[(op.action, op.kind, op.dest)] += 1
    # 12 concrete operators: 6 at mass 1/9, 6 at mass 1/18
    assert len(counts) == 12
    for (action, kind, dest), c in counts.items():
        expected = 1 / 18 if action is Action.MODIFY else 1 / 9
        se = math.sqrt(expected * (1 - expected) / draws)
        assert abs(c / draws - expected) <= 4 * se, (action, kind, dest)


def test_sample_k_onebit_constant():
    rng = random.Random(3)
    assert all(sample_k(Mode.ONE_BIT, rng) == 1 for _ in range(100))


def test_sample_k_multibit_distribution():
    rng = random.Random(4)
    draws = 100_000
    counts = Counter(sample_k(Mode.MULTI_BIT, rng) for _ in range(draws))
    for k, expected in ((1, 1 / math.e), (2, 1 / math.e), (3, 1 / (2 * math.e))):
        se = math.sqrt(expected * (1 - expected) / draws)
        assert abs(counts[k] / draws - expected) <= 4 * se, k
    assert min(counts) >= 1


def test_mutate_composition():
    y, k = mutate(Architecture(5, 5, 5), Mode.ONE_BIT, random.Random(5))
    assert k == 1
    assert sum(abs(a - 5) for a in y.as_tuple()) <= 2  # one op moves <= 2 counts


def test_hot_loop_matches_public_operators():
    for seed in range(300):
        for mode, one_bit in ((Mode.ONE_BIT, True), (Mode.MULTI_BIT, False)):
            r1, r2 = random.Random(seed), random.Random(seed)
            x0 = (seed % 5, seed % 3, seed % 2)
            got = _mutate_counts(*x0, one_bit, r1.random)
            y, k = mutate(Architecture(*x0), mode, r2)
            assert got == (*y.as_tuple(), k)
            assert r1.random() == r2.random()  # streams stay aligned


def _cfg(**kw):
    base = dict(n=16, s=4, mode=Mode.ONE_BIT, semantics=Semantics.LITERAL,
                seed=0, record_trajectory=True)
    base.update(kw)
    return TrialConfig(**base)


def test_run_trial_zero_generations_when_initial_optimal():
    # seed 5 draws (4, 2, 2) at n=8, s=4: already literal-optimal
    res = run_trial(TrialConfig(n=8, s=4, mode=Mode.ONE_BIT,
                                semantics=Semantics.LITERAL, seed=5))
    assert res.initial.as_tuple() == (4, 2, 2)
    assert res.generations == 0
    assert res.initial == res.final


def test_run_trial_reaches_literal_optimum():
    res = run_trial(_cfg(seed=7))
    assert not res.hit_cap
    f = res.final
    assert f.n_a >= 8 and f.n_b >= 4 and f.n_c >= 4


def test_run_trial_placement_semantics():
    res = run_trial(_cfg(seed=11, semantics=Semantics.PLACEMENT))
    f = res.final
    assert f.n_a >= 8 + max(0, 4 - f.n_b)
    assert f.n_b + f.n_c >= 8
    assert f.n_c >= 4


def test_run_trial_deterministic():
    a = run_trial(_cfg(seed=42, mode=Mode.MULTI_BIT))
    b = run_trial(_cfg(seed=42, mode=Mode.MULTI_BIT))
    assert a == b


def test_trajectory_elitism():
    res = run_trial(_cfg(seed=9, mode=Mode.MULTI_BIT))
    accepted = [(st.i, st.j) for st in res.trajectory if st.accepted]
    assert accepted == sorted(accepted)
    assert res.trajectory[0].generation == 0
    assert res.trajectory[-1].generation == res.generations


def test_trajectory_onebit_k_always_one():
    res = run_trial(_cfg(seed=13))
    assert all(st.k == 1 for st in res.trajectory[1:])


def test_hit_cap_reported_not_raised():
    res = run_trial(_cfg(seed=1, max_generations=3, s=0))
    assert res.hit_cap
    assert res.generations == 3


def test_strict_selection_still_converges():
    res = run_trial(_cfg(seed=17, strict_selection=True,
                         max_generations=200_000))
    assert not res.hit_cap
    accepted = [(st.i, st.j) for st in res.trajectory if st.accepted]
    assert accepted == sorted(set(accepted))  # strictly increasing

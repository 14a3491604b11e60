import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from viciouskit.combinatorics import (LatticeConfig, WalkCount, count_paths,
                                      count_paths_batch, oracle_count_dp,
                                      scaled_survival, survival_probability,
                                      time_lattice, walk_probability)


def test_lattice_config_validation():
    with pytest.raises(ValueError):
        LatticeConfig((1, 3))            # odd positions
    with pytest.raises(ValueError):
        LatticeConfig((2, 2))            # not strictly increasing
    with pytest.raises(ValueError):
        LatticeConfig((-2, 0), wall=True)
    assert len(LatticeConfig((0, 2, 4))) == 3


def test_single_walker_counts_are_binomials():
    u = LatticeConfig((0,))
    assert count_paths(2, u, (0,)).value == 2          # C(2,1)
    assert count_paths(4, u, (2,)).value == 4          # C(4,3)
    assert walk_probability(2, u, (0,)) == Fraction(1, 2)


def test_two_walker_total_is_ten_of_sixteen():
    u = LatticeConfig((0, 2))
    dp = oracle_count_dp(2, u)
    assert sum(c.value for c in dp.values()) == 10
    assert survival_probability(2, u) == Fraction(10, 16)
    total = sum(walk_probability(2, u, v) for v in dp)
    assert total == Fraction(10, 16)


def test_infeasible_endpoints_count_zero():
    u = LatticeConfig((0, 2))
    assert count_paths(1, u, (1, 1)).value == 0        # not increasing
    assert count_paths(2, u, (0, 10)).value == 0       # unreachable
    assert walk_probability(2, u, (0, 10)) == 0


def test_wall_hand_enumeration():
    # single walker from 0 staying >= 0 for two steps: only (+1,-1) and (+1,+1)
    u = LatticeConfig((0,), wall=True)
    dp = oracle_count_dp(2, u)
    assert {v: c.value for v, c in dp.items()} == {(0,): 1, (2,): 1}
    assert count_paths(2, u, (0,)).value == 1
    assert count_paths(2, u, (2,)).value == 1
    assert survival_probability(2, u) == Fraction(2, 4)


@pytest.mark.parametrize("wall", [False, True])
@pytest.mark.parametrize("positions", [(0,), (0, 2), (0, 4), (0, 2, 4), (2, 4, 8)])
def test_determinant_equals_dp(wall, positions):
    u = LatticeConfig(positions, wall=wall)
    for m in (1, 2, 3, 5):
        dp = oracle_count_dp(m, u)
        for v, cnt in dp.items():
            assert count_paths(m, u, v).value == cnt.value
        assert survival_probability(m, u) == Fraction(
            sum(c.value for c in dp.values()), 1 << (m * len(positions)))


def test_count_paths_batch_matches_scalar():
    u = LatticeConfig((0, 2, 4), wall=True)
    dp = oracle_count_dp(4, u)
    vs = np.array(sorted(dp))
    batch = count_paths_batch(4, u, vs)
    for v, b in zip(vs, batch):
        assert count_paths(4, u, tuple(v)).value == int(b)


def test_survival_monotone_and_translation_invariance():
    u = LatticeConfig((0, 2, 6))
    probs = [survival_probability(m, u) for m in range(5)]
    assert probs[0] == 1
    assert all(a >= b for a, b in zip(probs, probs[1:]))
    shifted = LatticeConfig((4, 6, 10))
    for m in (1, 3):
        dp = oracle_count_dp(m, u)
        for v, cnt in dp.items():
            v2 = tuple(p + 4 for p in v)
            assert count_paths(m, shifted, v2).value == cnt.value


def test_walkcount_bound_guard():
    with pytest.raises(ValueError):
        WalkCount(value=-1, steps=2, n_walkers=1)
    with pytest.raises(ValueError):
        WalkCount(value=100, steps=2, n_walkers=1)


def test_time_lattice():
    assert time_lattice(8, 1.0) == 64
    assert time_lattice(3, 1.0) == 8       # 2*floor(9/2)
    assert time_lattice(1, 0.3) == 0


def test_scaled_survival_ratio_improves_with_scale():
    u = LatticeConfig((0, 2))
    ratios = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for scale in (8, 16, 32):
            _, _, r = scaled_survival(scale, 1.0, u)
            ratios.append(r)
    errs = [abs(1 - r) for r in ratios]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.01


def test_scaled_survival_three_walkers():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, _, r = scaled_survival(16, 1.0, LatticeConfig((0, 2, 4)))
    assert abs(1 - r) < 0.25


def test_float_fallback_matches_exact_on_overlap():
    # same instance through the exact and the float-determinant paths
    from viciouskit import combinatorics as co

    u = LatticeConfig((0, 2))
    m = 12
    exact = float(survival_probability(m, u))
    approx = co._survival_float(m, u)
    assert approx == pytest.approx(exact, rel=1e-10)
    uw = LatticeConfig((2, 4), wall=True)
    exact_w = float(survival_probability(m, uw))
    assert co._survival_float(m, uw) == pytest.approx(exact_w, rel=1e-10)

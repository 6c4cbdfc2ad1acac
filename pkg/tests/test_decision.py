"""Strategy selection: cost assembly, midpoint utility, tie rules."""

import math

import numpy as np
import pytest

from namoplan.decision import (NoFeasibleStrategy, assemble_bypass_cost,
                               assemble_removal_cost, decide, laplace_utility)
from namoplan.intervals import CostInterval


def test_bypass_assembly():
    assert assemble_bypass_cost(CostInterval(10, 12), CostInterval(0, 0)) == \
        CostInterval(10, 12)
    got = assemble_bypass_cost(CostInterval(10, 12), CostInterval(2.85, 4.75))
    assert got.lo == pytest.approx(12.85)
    assert got.hi == pytest.approx(16.75)
    assert assemble_bypass_cost(CostInterval.infinite(),
                                CostInterval(1, 2)).is_infinite


def test_removal_assembly():
    got = assemble_removal_cost(CostInterval(15, 25), CostInterval(8, 9),
                                CostInterval(0, 0))
    assert got == CostInterval(23, 34)
    assert assemble_removal_cost(CostInterval(1, 2), CostInterval.infinite(),
                                 CostInterval(0, 0)).is_infinite


def test_assembly_order_independent():
    a, b, c = CostInterval(1, 2), CostInterval(3, 5), CostInterval(0.5, 0.5)
    assert assemble_removal_cost(a, b, c) == assemble_removal_cost(c, a, b)


def test_laplace_midpoints():
    assert laplace_utility(CostInterval(10, 20)) == 15.0
    assert laplace_utility(CostInterval.point(7.0)) == 7.0
    assert math.isinf(laplace_utility(CostInterval(0, math.inf)))


def test_laplace_matches_uniform_mean():
    rng = np.random.default_rng(21)
    iv = CostInterval(13.0, 42.0)
    samples = rng.uniform(iv.lo, iv.hi, 1_000_000)
    assert laplace_utility(iv) == pytest.approx(float(samples.mean()),
                                                rel=1e-3)


def test_decide_prefers_smaller_utility():
    d = decide(CostInterval(10, 20), CostInterval(23, 34), "B")
    assert d.choice == "bypass"
    assert d.u_bypass == 15.0 and d.u_removal == 28.5
    assert d.blocking_obstacle == "B"
    d2 = decide(CostInterval(40, 60), CostInterval(23, 34))
    assert d2.choice == "remove"


def test_decide_doorway_forces_removal():
    d = decide(CostInterval.infinite(), CostInterval(23, 34))
    assert d.choice == "remove"


def test_tie_goes_to_bypass():
    d = decide(CostInterval(10, 20), CostInterval(14, 16))
    assert d.choice == "bypass"


def test_both_infinite_is_no_strategy():
    with pytest.raises(NoFeasibleStrategy):
        decide(CostInterval.infinite(), CostInterval.infinite())


def test_decision_invariant_under_scaling_and_shift():
    rng = np.random.default_rng(3)
    for _ in range(200):
        a = sorted(rng.uniform(0, 100, 2))
        b = sorted(rng.uniform(0, 100, 2))
        lam = rng.uniform(0.01, 50)
        shift = CostInterval(*sorted(rng.uniform(0, 30, 2)))
        base = decide(CostInterval(*a), CostInterval(*b)).choice
        scaled = decide(CostInterval(*a).scale(lam),
                        CostInterval(*b).scale(lam)).choice
        shifted = decide(CostInterval(*a) + shift,
                         CostInterval(*b) + shift).choice
        assert base == scaled == shifted


def test_decision_record_serializes():
    d = decide(CostInterval(10, 20), CostInterval(23, 34), "B")
    out = d.to_dict()
    assert out["choice"] == "bypass"
    assert out["bypass_cost"] == [10, 20]
    assert out["removal_cost"] == [23, 34]
    assert out["blocking_obstacle"] == "B"

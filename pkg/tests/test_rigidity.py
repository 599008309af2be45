import random
from fractions import Fraction as F

import pytest

from pedigree.flows import FatProblem, FlowError, solve_fat
from pedigree.rigidity import fat_feasible_lp, find_rigid, rigidity_oracle

T = F(1, 10)


def rigid_example(cap14=None):
    supply = {1: 3 * T, 2: 3 * T, 3: 4 * T}
    demand = {4: 4 * T, 5: 2 * T, 6: 1 * T, 7: 3 * T}
    forbidden = {(1, 6), (1, 7), (3, 4), (3, 6)}
    arcs = {(o, d): None for o in supply for d in demand if (o, d) not in forbidden}
    if cap14 is not None:
        arcs[(1, 4)] = cap14
    return FatProblem(supply, demand, arcs)


def test_single_rigid_arc():
    p = rigid_example()
    rep = find_rigid(p, solve_fat(p).flow)
    assert rep.rigid == {(2, 6): T}
    assert rep.dummy == set()


def test_capacity_freezes_everything():
    p = rigid_example(cap14=2 * T)
    res = solve_fat(p)
    rep = find_rigid(p, res.flow)
    assert rep.free == set()
    assert rep.dummy == {(2, 5), (2, 7)}
    assert rep.rigid == {(1, 4): 2 * T, (1, 5): T, (2, 4): 2 * T, (2, 6): T, (3, 5): T, (3, 7): 3 * T}


def test_examples_match_oracle():
    for p in (rigid_example(), rigid_example(2 * T)):
        rep = find_rigid(p, solve_fat(p).flow)
        ref = rigidity_oracle(p)
        assert (rep.rigid, rep.dummy, rep.free) == (ref.rigid, ref.dummy, ref.free)


def random_fat(rng, max_side=8):
    no, nd = rng.randint(1, max_side), rng.randint(1, max_side)
    denom = rng.choice([4, 6, 8, 12])
    # build from a random feasible flow so most instances are feasible
    flow = {}
    for o in range(no):
        for d in range(nd):
            if rng.random() < 0.35:
                flow[(("o", o), ("d", d))] = F(rng.randint(0, 3), denom)
    supply = {("o", o): sum((f for (a, _), f in flow.items() if a == ("o", o)), F(0)) for o in range(no)}
    demand = {("d", d): sum((f for (_, b), f in flow.items() if b == ("d", d)), F(0)) for d in range(nd)}
    arcs = {}
    for a, f in flow.items():
        r = rng.random()
        arcs[a] = None if r < 0.6 else (f if r < 0.8 else f + F(rng.randint(0, 2), denom))
    for o in supply:
        for d in demand:
            if (o, d) not in arcs and rng.random() < 0.15:
                arcs[(o, d)] = None
    return FatProblem(supply, demand, arcs)


def test_random_instances_match_oracle():
    rng = random.Random(2024)
    kinds = {"rigid": 0, "dummy": 0, "free": 0}
    for _ in range(120):
        p = random_fat(rng)
        res = solve_fat(p)
        assert res.feasible == fat_feasible_lp(p)
        if not res.feasible:
            continue
        rep = find_rigid(p, res.flow)
        ref = rigidity_oracle(p)
        assert rep.rigid == ref.rigid
        assert rep.dummy == ref.dummy
        assert rep.free == ref.free
        kinds["rigid"] += bool(rep.rigid)
        kinds["dummy"] += bool(rep.dummy)
        kinds["free"] += bool(rep.free)
    assert all(kinds.values())


def test_find_rigid_needs_feasible_flow():
    p = rigid_example()
    with pytest.raises(FlowError):
        find_rigid(p, {})

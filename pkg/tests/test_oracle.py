import random
from fractions import Fraction as F
from itertools import combinations

import pytest

import catalog as cat
from pedigree.core import CharVector, all_pedigrees, combine
from pedigree.membership import decide
from pedigree.oracle import (active_pedigrees, affine_rank, candidates, dimension, full_dimension_expected,
                             membership, midpoint_adjacent, representation_dimension)
from pedigree.sampling import sample


def test_affine_rank_small():
    assert affine_rank([(0, 0), (1, 0), (0, 1), (1, 1)]) == 2
    assert affine_rank([(1, 2, 3)]) == 0
    assert affine_rank([(0, 0), (2, 2), (3, 3)]) == 1


@pytest.mark.parametrize("n,dim", [(4, 2), (5, 7), (6, 16)])
def test_dimension(n, dim):
    assert dimension(n) == dim == full_dimension_expected(n)


def test_membership_certificate_reproduces_point():
    res = membership(cat.SIX_MEMBER)
    assert res.member
    assert sum(res.weights.values()) == 1
    assert combine(res.weights, 6) == cat.SIX_MEMBER


def test_negative_point_rejected():
    x = CharVector.from_blocks([["-1/2", 1, "1/2"]])
    assert not membership(x).member


def test_candidates_prune_by_support():
    peds = candidates(cat.FIVE_MEMBER)
    assert all(cat.FIVE_MEMBER.value(k, e) > 0 for p in peds for k, e in enumerate(p.edges, start=4))


def test_unique_representation():
    assert set(active_pedigrees(cat.FAT_EXAMPLE)) == set(cat.FAT_EXAMPLE_WEIGHTS)
    assert representation_dimension(cat.FAT_EXAMPLE) == 0
    assert representation_dimension(cat.FIVE_REJECTED) is None


def adjacent_by_lp(p, q):
    mid = combine({p: F(1, 2), q: F(1, 2)}, p.n)
    return set(active_pedigrees(mid)) == {p, q}


def test_midpoint_adjacency_matches_lp_five():
    for p, q in combinations(all_pedigrees(5), 2):
        assert midpoint_adjacent(p, q) == adjacent_by_lp(p, q)


def test_midpoint_adjacency_matches_lp_six():
    rng = random.Random(6)
    pairs = list(combinations(all_pedigrees(6), 2))
    kinds = set()
    for p, q in rng.sample(pairs, 150):
        a = midpoint_adjacent(p, q)
        assert a == adjacent_by_lp(p, q)
        kinds.add(a)
    assert kinds == {True, False}


@pytest.mark.parametrize("n", [5, 6])
def test_same_stage_shrunk_pedigrees_are_adjacent(n):
    rng = random.Random(40 + n)
    pairs = 0
    for i in range(60):
        v = decide(sample(rng, n, ("hull", "perturbed")[i % 2]), keep_states=True)
        for st in v.states:
            peds = [p.pedigree() for p in st.rigid_set(st.stage)]
            for a, b in combinations(peds, 2):
                assert midpoint_adjacent(a, b)
                pairs += 1
    assert pairs > 30

import random
from fractions import Fraction as F

import pytest

from catalog import E, EIGHT_COMMODITY, FAT_EXAMPLE, FAT_EXAMPLE_WEIGHTS, SIX_REPAIRED, SIX_RIGID_STAGE4
from pedigree.core import Pedigree, PedigreeError
from pedigree.layered import (build_stage_problem, deletion_seed, first_stage, fmt_node, generator_violations,
                              invariant_violations, is_shrunk, link_capacity, node, restricted_network, to_dot)
from pedigree.membership import decide
from pedigree.sampling import sample


def source_paths(rn):
    """All source-to-sink node sequences of a restricted network."""
    succ = {}
    for t, h in rn.arcs:
        succ.setdefault(t, []).append(h)
    out = []

    def walk(p):
        if p[-1] == rn.sink:
            out.append(p)
            return
        for h in succ.get(p[-1], ()):
            walk(p + [h])

    for s in rn.sources():
        walk([s])
    return out


def path_edges(state, path, v):
    head = path[0]
    start = state.shrunk[head[1]].edges if is_shrunk(head) else (head[1],)
    return start + tuple(w[1] for w in path[1:]) + (v[1],)


def test_unique_five_city_flow_becomes_shrunk_pedigrees():
    st = first_stage(FAT_EXAMPLE)
    assert st.fat_result.feasible
    assert not st.rigidity.free and not st.rigidity.dummy
    assert {p.pedigree(): p.mu for p in st.state.shrunk} == FAT_EXAMPLE_WEIGHTS
    assert st.state.is_empty()


def test_stage4_arcs_are_pedigree_pairs():
    st = first_stage(FAT_EXAMPLE)
    arcs = {(fmt_node(a), fmt_node(b)) for a, b in st.fat.arcs}
    assert arcs == {("[4:1,3]", "[5:1,4]"), ("[4:1,3]", "[5:3,4]"), ("[4:2,3]", "[5:1,3]"),
                    ("[4:2,3]", "[5:2,4]"), ("[4:2,3]", "[5:3,4]")}


def test_six_city_stage4():
    st = first_stage(SIX_REPAIRED)
    assert {p.edges: p.mu for p in st.state.shrunk} == SIX_RIGID_STAGE4
    free = {(fmt_node(a), fmt_node(b)) for a, b in st.rigidity.free}
    # the four free arcs form one flow-change cycle through [5:1,2] and [5:3,4]
    assert free == {("[4:1,3]", "[5:1,2]"), ("[4:1,3]", "[5:3,4]"),
                    ("[4:2,3]", "[5:1,2]"), ("[4:2,3]", "[5:3,4]")}
    assert not st.rigidity.dummy
    assert not invariant_violations(st.state)


def test_six_city_link_capacities():
    state = first_stage(SIX_REPAIRED).state
    a = link_capacity(state, node(5, (1, 2)), node(6, (1, 3)))
    assert a.capacity == E and a.path == [node(4, (2, 3)), node(5, (1, 2))]
    b = link_capacity(state, node(5, (3, 4)), node(6, (3, 5)))
    assert b.capacity == E and b.path is None
    c = link_capacity(state, node(5, (1, 2)), node(6, (3, 5)))
    assert c.capacity == 0 and c.network.empty()


def test_deletion_seed_rules():
    u, v = node(6, (2, 5)), node(7, (1, 4))
    dead = deletion_seed(u, v)
    assert node(5, (1, 4)) in dead               # same edge as v further down
    # stage-5 triangles must contain 2 for u, stage-4 ones must contain 1 for v
    assert node(5, (1, 3)) in dead and node(5, (2, 3)) not in dead
    assert node(4, (2, 3)) in dead and node(4, (1, 3)) not in dead
    assert node(6, (1, 2)) in dead and u not in dead


def test_restricted_network_has_generator_fixpoint():
    state = first_stage(SIX_REPAIRED).state
    fat, links = build_stage_problem(state, 5)
    for info in links.values():
        assert not generator_violations(state, info.network)
    assert sum(fat.supply.values()) == sum(fat.demand.values())


@pytest.mark.parametrize("n", [6, 7])
def test_restricted_paths_are_pedigrees(n):
    """Up to seven cities every path of a restricted network, closed by its link, is a pedigree."""
    rng = random.Random(100 + n)
    checked = 0
    for i in range(40):
        v = decide(sample(rng, n, ("hull", "pmi")[i % 2]), keep_states=True)
        for st in v.states:
            for (_, dest), info in v.stage_problems.get(st.stage + 1, (None, {}))[1].items():
                for p in source_paths(info.network):
                    Pedigree(path_edges(st, p, dest))
                    checked += 1
    assert checked > 100


def test_eight_cities_admit_non_pedigree_paths():
    v = decide(EIGHT_COMMODITY, keep_states=True)
    st = v.states[-2]
    assert st.stage == 6
    u, dest = node(7, (1, 2)), node(8, (1, 5))
    rn = restricted_network(st, u, dest)
    bad = []
    for p in source_paths(rn):
        try:
            Pedigree(path_edges(st, p, dest))
        except PedigreeError:
            bad.append([fmt_node(w) for w in p])
    assert ["[4:2,3]", "[5:1,3]", "[6:2,3]", "[7:1,2]"] in bad


def test_invariants_hold_on_members():
    rng = random.Random(9)
    for i in range(30):
        v = decide(sample(rng, 7, "hull"), keep_states=True)
        assert v.member
        for st in v.states:
            assert invariant_violations(st) == []


def test_to_dot_names():
    st = first_stage(SIX_REPAIRED).state
    dot = to_dot(st)
    assert dot.startswith("digraph") and '"[4:1,3]" -> "[5:1,2]"' in dot
    assert "R[4]:0" in dot
    rn = restricted_network(st, node(5, (1, 2)), node(6, (1, 3)))
    assert '"[4:2,3]" -> "[5:1,2]"' in to_dot(st, rn)


def test_conservation_is_exact():
    st = first_stage(SIX_REPAIRED).state
    w = node(5, (1, 2))
    through = sum((p.residual for p in st.shrunk if p.contains(w)), F(0))
    assert st.cap[w] + through == SIX_REPAIRED.value(5, (1, 2))

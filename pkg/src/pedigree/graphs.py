"""Graph routines shared by the rigidity test and max-flow uniqueness.

Both questions reduce to the same one: in the mixed graph built from a
flow (forward arc where flow can only rise, backward arc where it can only
fall, undirected edge where it can move both ways), which elements lie on
no cycle that respects the arc directions?  Those elements carry the same
flow in every feasible solution.
"""
from __future__ import annotations

from typing import Hashable, Iterable

FORWARD, BACKWARD, BOTH = "fwd", "bwd", "both"


def strongly_connected_components(nodes: Iterable[Hashable], succ: dict) -> dict:
    """Iterative Tarjan; returns node -> component id."""
    index: dict = {}
    low: dict = {}
    comp: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    n_comp = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = n_comp
                    if w == v:
                        break
                n_comp += 1
    return comp


def bridges(nodes: Iterable[Hashable], edges: list[tuple[Hashable, Hashable, Hashable]]) -> set:
    """Ids of bridge edges in an undirected multigraph given as (u, v, id)."""
    adj: dict = {}
    for u, v, eid in edges:
        adj.setdefault(u, []).append((v, eid))
        adj.setdefault(v, []).append((u, eid))
    disc: dict = {}
    low: dict = {}
    out: set = set()
    t = 0
    for root in nodes:
        if root in disc or root not in adj:
            continue
        disc[root] = low[root] = t
        t += 1
        work = [(root, None, iter(adj[root]))]
        while work:
            v, via, it = work[-1]
            advanced = False
            for w, eid in it:
                if eid == via:
                    continue
                if w not in disc:
                    disc[w] = low[w] = t
                    t += 1
                    work.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    out.add(via)
    return out


def frozen_elements(elements: list[tuple[Hashable, Hashable, Hashable, str]]) -> set:
    """Ids of mixed-graph elements that lie on no direction-respecting cycle.

    elements: (id, u, v, kind) with kind FORWARD (u -> v), BACKWARD (v -> u)
    or BOTH (undirected).  An element is frozen when it joins two different
    strong components, or when it is a bridge of the undirected graph formed
    by its own strong component.
    """
    nodes: list = []
    seen: set = set()
    succ: dict = {}
    for eid, u, v, kind in elements:
        for x in (u, v):
            if x not in seen:
                seen.add(x)
                nodes.append(x)
        if kind in (FORWARD, BOTH):
            succ.setdefault(u, []).append(v)
        if kind in (BACKWARD, BOTH):
            succ.setdefault(v, []).append(u)
    comp = strongly_connected_components(nodes, succ)
    frozen = set()
    inner: list = []
    for eid, u, v, kind in elements:
        if comp[u] != comp[v]:
            frozen.add(eid)
        else:
            inner.append((u, v, eid))
    frozen |= bridges(nodes, inner)
    return frozen

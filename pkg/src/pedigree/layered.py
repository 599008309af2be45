"""Layered network of stage triangles and its stage-by-stage evolution.

Layer l holds one node [l:e] per common edge e with positive weight at
stage l.  As the construction advances, arcs whose flow is forced by the
transportation problem get peeled off into *shrunk* pedigrees: fixed
partial pedigrees that carry a known weight and act as extra sources
later on.  Every node and shrunk pedigree tracks the weight still
unexplained; the per-coordinate bookkeeping identity

    x(t) = residual(t) + sum of residual weight of shrunk pedigrees through t

holds after every step and is checked by ``invariant_violations``.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from fractions import Fraction

from .core import CharVector, Edge, Pedigree, PedigreeError, coordinate_count, edges_upto, extension_error
from .flows import FatProblem, FlowNetwork, max_flow, solve_fat, FatResult
from .rigidity import RigidityReport, find_rigid


def node(l: int, e: Edge) -> tuple:
    return (l, tuple(e))


def is_shrunk(v) -> bool:
    return v[0] == "R"


@dataclass
class Shrunk:
    """A partial pedigree whose weight is fixed, standing in for its whole path."""

    idx: int
    edges: tuple                # common edges, stages 4..stage+1
    stage: int                  # member of the set created at this stage
    mu: Fraction                # weight at creation
    residual: Fraction          # weight not yet carried into a longer shrunk pedigree
    origin: list = field(default_factory=list)

    @property
    def id(self) -> tuple:
        return ("R", self.idx)

    @property
    def last_layer(self) -> int:
        return self.stage + 1

    def contains(self, v) -> bool:
        l, e = v
        return 4 <= l <= self.last_layer and self.edges[l - 4] == e

    def nodes(self) -> list:
        return [node(l, e) for l, e in enumerate(self.edges, start=4)]

    def pedigree(self) -> Pedigree:
        return Pedigree(self.edges)


@dataclass
class LayeredState:
    """The network after a given stage: layers 4..stage+1 plus shrunk pedigrees."""

    x: CharVector
    stage: int
    cap: dict = field(default_factory=dict)         # layered node -> residual weight
    arcs: dict = field(default_factory=dict)        # (tail, head) -> capacity
    shrunk: list = field(default_factory=list)      # registry, index = idx
    anomalies: list = field(default_factory=list)

    def layer(self, l: int) -> list:
        return sorted(v for v in self.cap if v[0] == l)

    def rigid_set(self, m: int) -> list:
        """Shrunk pedigrees created at stage m (including fully extended ones)."""
        return [p for p in self.shrunk if p.stage == m]

    def live_shrunk(self, max_stage: int | None = None) -> list:
        return [p for p in self.shrunk
                if p.residual > 0 and (max_stage is None or p.stage <= max_stage)]

    def capacity(self, v) -> Fraction:
        if is_shrunk(v):
            return self.shrunk[v[1]].residual
        return self.cap.get(v, Fraction(0))

    def out_arcs(self, v) -> list:
        return [a for a in self.arcs if a[0] == v]

    def is_empty(self) -> bool:
        return not self.layer(self.stage + 1)

    def clone(self) -> LayeredState:
        return copy.deepcopy(self)

    def add_shrunk(self, edges: tuple, stage: int, weight: Fraction, origin) -> Shrunk:
        """Register a shrunk pedigree, merging with an identical one from the same stage."""
        Pedigree(edges)  # validates
        for p in self.shrunk:
            if p.stage == stage and p.edges == edges:
                p.mu += weight
                p.residual += weight
                p.origin.append(origin)
                return p
        p = Shrunk(len(self.shrunk), edges, stage, weight, weight, [origin])
        self.shrunk.append(p)
        return p

    def prune(self):
        for v, c in list(self.cap.items()):
            if c < 0:
                self.anomalies.append(f"stage {self.stage}: node {v} capacity {c} < 0")
            if c <= 0:
                del self.cap[v]
        for p in self.shrunk:
            if p.residual < 0:
                self.anomalies.append(f"stage {self.stage}: shrunk {p.idx} residual {p.residual} < 0")
        for a, c in list(self.arcs.items()):
            t, h = a
            if c < 0:
                self.anomalies.append(f"stage {self.stage}: arc {a} capacity {c} < 0")
            if c <= 0 or h not in self.cap or self.capacity(t) <= 0:
                del self.arcs[a]


def fmt_node(v) -> str:
    if is_shrunk(v):
        return f"R:{v[1]}"
    l, (i, j) = v
    return f"[{l}:{i},{j}]"


# stage 4

@dataclass
class StageResult:
    stage: int
    fat: FatProblem
    fat_result: FatResult
    rigidity: RigidityReport | None = None
    links: dict = field(default_factory=dict)    # (u, v) -> LinkInfo
    state: LayeredState | None = None            # network after this stage, if feasible


def first_stage(x: CharVector) -> StageResult:
    """Transportation between stage-4 and stage-5 triangles, then the initial network."""
    supply = {node(4, e): x.value(4, e) for e in x.stage_support(4)}
    demand = {node(5, e): x.value(5, e) for e in x.stage_support(5)}
    arcs = {}
    for u in supply:
        for v in demand:
            if extension_error((u[1],), v[1]) is None:
                arcs[(u, v)] = None
    fat = FatProblem(supply, demand, arcs)
    res = solve_fat(fat)
    out = StageResult(4, fat, res)
    if not res.feasible:
        return out
    rig = find_rigid(fat, res.flow)
    out.rigidity = rig
    st = LayeredState(x, 4)
    st.cap = dict(supply) | dict(demand)
    for (u, v), phi in rig.rigid.items():
        st.add_shrunk((u[1], v[1]), 4, phi, ("fat", (u, v)))
        st.cap[u] -= phi
        st.cap[v] -= phi
    for (u, v) in rig.free:
        st.arcs[(u, v)] = st.cap[u]
    st.prune()
    out.state = st
    return out


# restricted networks

@dataclass
class RestrictedNetwork:
    link: tuple
    nodes: set                   # surviving layered nodes
    shrunk: set                  # surviving shrunk ids
    arcs: dict
    deleted: set                 # triangles removed by the deletion rules

    @property
    def sink(self):
        return self.link[0]

    def empty(self) -> bool:
        return self.sink not in self.nodes

    def sources(self) -> list:
        return sorted(v for v in self.nodes if v[0] == 4) + sorted(self.shrunk)

    def flow_network(self, state: LayeredState) -> FlowNetwork:
        caps = {v: state.capacity(v) for v in self.nodes}
        caps.update({s: state.capacity(s) for s in self.shrunk})
        return FlowNetwork(arcs=dict(self.arcs), node_caps=caps,
                           sources={s: None for s in self.sources()},
                           sinks={self.sink: None} if not self.empty() else {})


def deletion_seed(u, v) -> set:
    """Triangles that cannot lie on a pedigree through u then v, before propagation."""
    k, (r, s) = u
    _, (i, j) = v
    dead = set()
    for l in range(max(4, j + 1), k):
        dead.add(node(l, (i, j)))
    for l in range(max(4, s + 1), k):
        dead.add(node(l, (r, s)))
    if s >= 4:
        dead |= {node(s, e) for e in edges_upto(s - 1) if r not in e}
    if j >= 4:
        dead |= {node(j, e) for e in edges_upto(j - 1) if i not in e}
    dead |= {node(k, e) for e in edges_upto(k - 1) if e != (r, s)}
    return dead


def restricted_network(state: LayeredState, u, v) -> RestrictedNetwork:
    """Subnetwork of pedigree paths that can end at u and continue to v."""
    k = u[0]
    dead = deletion_seed(u, v)
    alive = {w for w in state.cap if w[0] <= k and w not in dead}
    shr = {p.idx: p for p in state.live_shrunk(k - 2)}
    changed = True
    while changed:
        changed = False
        for idx, p in list(shr.items()):
            if any(w in dead for w in p.nodes()):
                del shr[idx]
                changed = True
        for w in sorted(alive):
            l, (y, z) = w
            if l < 5 or z <= 3:
                continue
            ok = any(g[0] == z and y in g[1] for g in alive) or \
                any(p.last_layer >= z and y in p.edges[z - 4] for p in shr.values())
            if not ok:
                alive.discard(w)
                dead.add(w)
                changed = True
    shr_ids = {("R", i) for i in shr}
    arcs = {a: c for a, c in state.arcs.items()
            if a[1] in alive and (a[0] in alive or a[0] in shr_ids)}
    return RestrictedNetwork((u, v), alive, shr_ids, arcs, dead)


@dataclass
class LinkInfo:
    capacity: Fraction
    path: list | None            # node sequence when the max flow is one unique path
    network: RestrictedNetwork


def link_capacity(state: LayeredState, u, v) -> LinkInfo:
    rn = restricted_network(state, u, v)
    if rn.empty():
        return LinkInfo(Fraction(0), None, rn)
    res = max_flow(rn.flow_network(state), check_unique=True)
    return LinkInfo(res.value, res.unique_path if res.unique else None, rn)


def link_candidates(state: LayeredState, k: int) -> list:
    """Pairs (u, v) that could be consecutive in a pedigree: distinct edges, generator respected."""
    dests = [node(k + 1, e) for e in state.x.stage_support(k + 1)]
    out = []
    for u in state.layer(k):
        for v in dests:
            i, j = v[1]
            if u[1] == v[1] or (j == k and i not in u[1]):
                continue
            out.append((u, v))
    return out


def build_stage_problem(state: LayeredState, k: int) -> tuple[FatProblem, dict]:
    """Transportation problem from layer k and the newest shrunk pedigrees to layer k+1."""
    x = state.x
    supply = {w: state.cap[w] for w in state.layer(k)}
    newest = [p for p in state.live_shrunk() if p.stage == k - 1]
    for p in newest:
        supply[p.id] = p.residual
    demand = {node(k + 1, e): x.value(k + 1, e) for e in x.stage_support(k + 1)}
    links = {}
    arcs = {}
    for u, v in link_candidates(state, k):
        info = link_capacity(state, u, v)
        links[(u, v)] = info
        if info.capacity > 0:
            arcs[(u, v)] = info.capacity
    for p in newest:
        for v in demand:
            if extension_error(p.edges, v[1]) is None:
                arcs[(p.id, v)] = p.residual
    return FatProblem(supply, demand, arcs), links


def advance(state: LayeredState, k: int, fat: FatProblem, flow: dict,
            rig: RigidityReport, links: dict) -> LayeredState:
    """Network after stage k, given a feasible flow of the stage-k problem."""
    st = state.clone()
    st.stage = k
    for v, d in fat.demand.items():
        st.cap[v] = d
    for a, cap in fat.arcs.items():
        t, h = a
        if a in rig.dummy:
            continue
        if a in rig.free:
            st.arcs[a] = cap
            continue
        phi = rig.rigid[a]
        if is_shrunk(t):
            p = st.shrunk[t[1]]
            st.add_shrunk(p.edges + (h[1],), k, phi, ("shrunk", a))
            p.residual -= phi
            st.cap[h] -= phi
            continue
        path = links[a].path
        if path is None:
            st.arcs[a] = phi
            continue
        head = path[0]
        edges = st.shrunk[head[1]].edges if is_shrunk(head) else (head[1],)
        edges = edges + tuple(w[1] for w in path[1:]) + (h[1],)
        try:
            st.add_shrunk(edges, k, phi, ("path", a, tuple(path)))
        except PedigreeError as exc:
            st.anomalies.append(f"stage {k}: unique path for {a} is not a pedigree: {exc}")
            st.arcs[a] = phi
            continue
        if is_shrunk(head):
            st.shrunk[head[1]].residual -= phi
        else:
            st.cap[head] -= phi
        for w in path[1:]:
            st.cap[w] -= phi
        for b in zip(path, path[1:]):
            st.arcs[b] -= phi
        st.cap[h] -= phi
    st.prune()
    return st


def generator_violations(state: LayeredState, rn: RestrictedNetwork) -> list[str]:
    """Re-check the propagation fixpoint: every surviving node keeps some generator."""
    out = []
    shr = [state.shrunk[s[1]] for s in rn.shrunk]
    for w in rn.nodes:
        l, (y, z) = w
        if l < 5 or z <= 3:
            continue
        if not (any(g[0] == z and y in g[1] for g in rn.nodes)
                or any(p.last_layer >= z and y in p.edges[z - 4] for p in shr)):
            out.append(f"{fmt_node(w)} survives in the network of link "
                       f"{fmt_node(rn.link[0])}->{fmt_node(rn.link[1])} without a generator")
    for p in shr:
        if any(w in rn.deleted for w in p.nodes()):
            out.append(f"shrunk {p.idx} survives although it uses a deleted triangle")
    return out


def invariant_violations(state: LayeredState) -> list[str]:
    """Bookkeeping and structural checks; an empty list means all hold."""
    out = list(state.anomalies)
    x = state.x
    top = state.stage + 1
    for l in range(4, top + 1):
        for e in edges_upto(l - 1):
            w = node(l, e)
            through = sum((p.residual for p in state.shrunk if p.contains(w)), Fraction(0))
            if state.cap.get(w, Fraction(0)) + through != x.value(l, e):
                out.append(f"weight of {fmt_node(w)} not conserved: "
                           f"{state.cap.get(w, 0)} + {through} != {x.value(l, e)}")
    for m in range(4, state.stage + 1):
        bound = coordinate_count(m + 1) - (m + 1) + 4
        if len(state.rigid_set(m)) > bound:
            out.append(f"{len(state.rigid_set(m))} shrunk pedigrees at stage {m} exceed {bound}")
    for (t, h), c in state.arcs.items():
        if c is not None and c <= 0:
            out.append(f"arc {t}->{h} has capacity {c}")
        want = state.shrunk[t[1]].last_layer + 1 if is_shrunk(t) else t[0] + 1
        if h[0] != want:
            out.append(f"arc {t}->{h} skips a layer")
    return out


def to_dot(state: LayeredState, restricted: RestrictedNetwork | None = None) -> str:
    """Graphviz rendering; a restricted network, if given, is drawn instead of the full one."""
    lines = ["digraph layered {", "  rankdir=LR;"]
    if restricted is None:
        nodes = list(state.cap) + [p.id for p in state.live_shrunk()]
        arcs = state.arcs
    else:
        nodes = list(restricted.nodes) + list(restricted.shrunk)
        arcs = restricted.arcs
    for v in sorted(nodes, key=str):
        if is_shrunk(v):
            p = state.shrunk[v[1]]
            label = f"R[{p.stage}]:{p.idx}"
            lines.append(f'  "{label}" [shape=box, label="{label}\\n{p.residual}"];')
        else:
            lines.append(f'  "{fmt_node(v)}" [label="{fmt_node(v)}\\n{state.cap.get(v, 0)}"];')

    def name(v):
        return f"R[{state.shrunk[v[1]].stage}]:{v[1]}" if is_shrunk(v) else fmt_node(v)

    for (t, h), c in sorted(arcs.items(), key=str):
        lines.append(f'  "{name(t)}" -> "{name(h)}" [label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"

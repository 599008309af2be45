"""Exact max-flow and the transportation problem with forbidden arcs.

Max-flow is Edmonds-Karp over Fractions.  Node capacities are handled by
splitting each capacitated node into an entry and an exit copy.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import BACKWARD, BOTH, FORWARD, frozen_elements

SOURCE = ("__source__",)
SINK = ("__sink__",)


class FlowError(ValueError):
    pass


@dataclass
class FlowNetwork:
    """Directed network; a capacity of None means unbounded."""

    arcs: dict = field(default_factory=dict)          # (u, v) -> cap | None
    node_caps: dict = field(default_factory=dict)     # node -> cap
    sources: dict = field(default_factory=dict)       # node -> supply | None
    sinks: dict = field(default_factory=dict)         # node -> demand | None

    def nodes(self) -> set:
        out = set(self.node_caps) | set(self.sources) | set(self.sinks)
        for u, v in self.arcs:
            out.add(u)
            out.add(v)
        return out


@dataclass
class MaxFlowResult:
    value: Fraction
    flow: dict                       # original arc -> flow
    node_flow: dict                  # node -> throughput
    source_side: set                 # original nodes reachable in the final residual graph
    unique: bool | None = None
    unique_path: list | None = None


class _Residual:
    def __init__(self):
        self.cap: dict = {}
        self.adj: dict = {}

    def add(self, u, v, c):
        if (u, v) not in self.cap:
            self.adj.setdefault(u, []).append(v)
            self.adj.setdefault(v, []).append(u)
            self.cap[(u, v)] = Fraction(0)
            self.cap.setdefault((v, u), Fraction(0))
        self.cap[(u, v)] += c

    def bfs(self, s, t):
        prev = {s: None}
        q = deque([s])
        while q:
            u = q.popleft()
            for v in self.adj.get(u, ()):
                if v not in prev and self.cap[(u, v)] > 0:
                    prev[v] = u
                    if v == t:
                        return prev
                    q.append(v)
        return prev


def _entry(v, node_caps):
    return ("in", v) if v in node_caps else v


def _exit(v, node_caps):
    return ("out", v) if v in node_caps else v


def max_flow(net: FlowNetwork, check_unique: bool = False) -> MaxFlowResult:
    """Maximum flow from the super-source to the super-sink."""
    caps = net.node_caps
    finite = [c for c in list(net.arcs.values()) + list(caps.values())
              + list(net.sources.values()) + list(net.sinks.values()) if c is not None]
    big = sum(finite, Fraction(0)) + 1
    r = _Residual()
    # element list for the uniqueness test: (key, tail, head, cap)
    elems: list = []

    def add(key, u, v, c):
        c = big if c is None else Fraction(c)
        if c < 0:
            raise FlowError(f"negative capacity on {key}")
        r.add(u, v, c)
        elems.append((key, u, v, c))

    for v, c in caps.items():
        add(("node", v), ("in", v), ("out", v), c)
    for (u, v), c in net.arcs.items():
        add(("arc", (u, v)), _exit(u, caps), _entry(v, caps), c)
    for v, c in net.sources.items():
        add(("src", v), SOURCE, _entry(v, caps), c)
    for v, c in net.sinks.items():
        add(("snk", v), _exit(v, caps), SINK, c)
    pairs = {(u, v) for _, u, v, _ in elems}
    if len(pairs) != len(elems) or any((v, u) in pairs for u, v in pairs):
        raise FlowError("parallel or antiparallel arcs are not supported")

    value = Fraction(0)
    while True:
        prev = r.bfs(SOURCE, SINK)
        if SINK not in prev:
            break
        path = []
        v = SINK
        while prev[v] is not None:
            path.append((prev[v], v))
            v = prev[v]
        delta = min(r.cap[a] for a in path)
        for u, v in path:
            r.cap[(u, v)] -= delta
            r.cap[(v, u)] += delta
        value += delta

    flows = {key: c - r.cap[(u, v)] for key, u, v, c in elems}
    arc_flow = {key[1]: f for key, f in flows.items() if key[0] == "arc"}
    node_flow: dict = {}
    for (u, v), f in arc_flow.items():
        node_flow[v] = node_flow.get(v, Fraction(0)) + f
    for key, f in flows.items():
        if key[0] == "src":
            node_flow[key[1]] = node_flow.get(key[1], Fraction(0)) + f

    reach = r.bfs(SOURCE, None)
    side = set()
    for x in reach:
        if x in (SOURCE, SINK):
            continue
        side.add(x[1] if isinstance(x, tuple) and len(x) == 2 and x[0] in ("in", "out") and x[1] in caps else x)

    res = MaxFlowResult(value, arc_flow, node_flow, side)
    if check_unique:
        res.unique = flow_is_unique(elems, flows)
        if res.unique and value > 0:
            res.unique_path = _single_path(net, arc_flow)
    return res


def flow_is_unique(elems, flows) -> bool:
    """A max flow is unique iff no element of the residual mixed graph lies on a cycle.

    The source and sink appear as ordinary nodes, so cycles that reroute flow
    between two sources or two sinks are caught as well.
    """
    mixed = []
    for key, u, v, c in elems:
        f = flows[key]
        if f == 0 and c == 0:
            continue
        if f == 0:
            kind = FORWARD
        elif f == c:
            kind = BACKWARD
        else:
            kind = BOTH
        mixed.append((key, u, v, kind))
    return len(frozen_elements(mixed)) == len(mixed)


def _single_path(net: FlowNetwork, arc_flow: dict) -> list | None:
    """The support as a node sequence when it is one source-to-sink path."""
    support = [a for a, f in arc_flow.items() if f > 0]
    succ: dict = {}
    indeg: dict = {}
    for u, v in support:
        if u in succ:
            return None
        succ[u] = v
        indeg[v] = indeg.get(v, 0) + 1
        if indeg[v] > 1:
            return None
    starts = [u for u in succ if u not in indeg]
    if len(starts) > 1:
        return None
    if not starts:
        # the flow enters and leaves at a single node
        return None
    path = [starts[0]]
    while path[-1] in succ:
        path.append(succ[path[-1]])
    if len(path) != len(support) + 1 or path[0] not in net.sources or path[-1] not in net.sinks:
        return None
    return path


# transportation problem with forbidden arcs

@dataclass
class FatProblem:
    """Origins with availabilities, destinations with requirements, allowed arcs.

    arcs maps (origin, destination) to a capacity, or None for uncapacitated.
    """

    supply: dict
    demand: dict
    arcs: dict

    def __post_init__(self):
        for (o, d) in self.arcs:
            if o not in self.supply or d not in self.demand:
                raise FlowError(f"arc {(o, d)} does not join an origin to a destination")
        if set(self.supply) & set(self.demand):
            raise FlowError("origins and destinations must be distinct")
        for c in list(self.supply.values()) + list(self.demand.values()):
            if c < 0:
                raise FlowError("negative availability or requirement")
        if sum(self.supply.values(), Fraction(0)) != sum(self.demand.values(), Fraction(0)):
            raise FlowError("unbalanced: total availability differs from total requirement")

    @property
    def total(self) -> Fraction:
        return sum(self.supply.values(), Fraction(0))

    def network(self) -> FlowNetwork:
        return FlowNetwork(arcs=dict(self.arcs), sources=dict(self.supply), sinks=dict(self.demand))


@dataclass
class FatResult:
    feasible: bool
    value: Fraction
    flow: dict
    # infeasibility witness: destinations whose demand exceeds what their neighbourhood can send
    deficient_destinations: set = field(default_factory=set)
    deficit: Fraction = Fraction(0)


def solve_fat(p: FatProblem) -> FatResult:
    res = max_flow(p.network())
    flow = {a: res.flow.get(a, Fraction(0)) for a in p.arcs}
    if res.value == p.total:
        return FatResult(True, res.value, flow)
    # destinations on the sink side of the min cut form a Hall violator
    bad = {d for d in p.demand if d not in res.source_side}
    return FatResult(False, res.value, flow, bad, p.total - res.value)


def hall_bound(p: FatProblem, dests: set) -> Fraction:
    """Max amount the destinations in dests can receive, computed by a fresh max-flow."""
    net = FlowNetwork(arcs={a: c for a, c in p.arcs.items() if a[1] in dests},
                      sources=dict(p.supply), sinks={d: p.demand[d] for d in dests})
    return max_flow(net).value


def check_fat_flow(p: FatProblem, flow: dict) -> list[str]:
    """Exact feasibility audit of a proposed solution; returns a list of violations."""
    errs = []
    out = {o: Fraction(0) for o in p.supply}
    inn = {d: Fraction(0) for d in p.demand}
    for a, f in flow.items():
        if a not in p.arcs:
            if f != 0:
                errs.append(f"flow {f} on forbidden arc {a}")
            continue
        c = p.arcs[a]
        if f < 0 or (c is not None and f > c):
            errs.append(f"flow {f} on {a} outside [0, {c}]")
        out[a[0]] += f
        inn[a[1]] += f
    for o, v in out.items():
        if v != p.supply[o]:
            errs.append(f"origin {o} ships {v}, availability {p.supply[o]}")
    for d, v in inn.items():
        if v != p.demand[d]:
            errs.append(f"destination {d} receives {v}, requirement {p.demand[d]}")
    return errs

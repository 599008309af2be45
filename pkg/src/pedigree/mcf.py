"""Multicommodity flow check on the layered network.

Every arc that entered the network at a stage l >= 5 is a commodity.  A
commodity designated by the arc (u, v) lives on the restricted network of
that link and must deliver exactly the flow the aggregate puts on (u, v).
Summed over the commodities of one stage, commodity flows reproduce the
aggregate flow on every older arc.  The aggregate can push at most the
weight not already fixed in shrunk pedigrees of the newest stage; reaching
that amount is the membership condition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import CharVector, edges_upto
from .layered import LayeredState, RestrictedNetwork, is_shrunk, node, restricted_network
from .lp import EQ, LE, LinearProgram, solve
from .mi import check_membership


@dataclass
class Commodity:
    arc: tuple
    stage: int
    network: RestrictedNetwork | None        # None when designated by a shrunk arc
    var: dict = field(default_factory=dict)   # arc of the restricted network -> lp column


@dataclass
class McfModel:
    state: LayeredState
    lp: LinearProgram
    agg: dict                                 # network arc -> lp column
    commodities: list
    z_max: Fraction

    @property
    def stage(self) -> int:
        return self.state.stage

    def last_arcs(self) -> list:
        return [a for a in self.agg if a[1][0] == self.stage + 1]


@dataclass
class McfSolution:
    status: str
    z: Fraction | None
    agg: dict
    flows: list                               # per commodity: arc -> flow
    method: str


def head_layer(a) -> int:
    return a[1][0]


def build(state: LayeredState) -> McfModel:
    k = state.stage
    lp = LinearProgram()
    agg = {a: lp.add_var(f"f{a}", c) for a, c in sorted(state.arcs.items(), key=str)}
    comms = []
    for l in range(5, k + 1):
        for a in agg:
            if head_layer(a) != l + 1:
                continue
            t, h = a
            if is_shrunk(t):
                comms.append(Commodity(a, l, None))
                continue
            rn = restricted_network(state, t, h)
            c = Commodity(a, l, rn)
            for b in sorted(rn.arcs, key=str):
                c.var[b] = lp.add_var(f"g{a}{b}", state.arcs[b])
            inflow: dict = {}
            outflow: dict = {}
            for b, j in c.var.items():
                outflow.setdefault(b[0], {})[j] = 1
                inflow.setdefault(b[1], {})[j] = 1
            for w in rn.nodes:
                if w[0] < 5:
                    continue
                row = dict(inflow.get(w, {}))
                for j in outflow.get(w, {}):
                    row[j] = row.get(j, 0) - 1
                if w == t:
                    row[agg[a]] = -1
                if row:
                    lp.add_row(row, EQ, 0)
            if t not in rn.nodes:
                lp.add_row({agg[a]: 1}, EQ, 0)
            comms.append(c)
    # commodities of one stage share out the aggregate flow of every older arc
    for l in range(5, k + 1):
        stage_comms = [c for c in comms if c.stage == l and c.network is not None]
        for b, jb in agg.items():
            if head_layer(b) > l:
                continue
            row = {jb: -1}
            for c in stage_comms:
                if b in c.var:
                    row[c.var[b]] = 1
            lp.add_row(row, EQ, 0)
    # node capacities on the aggregate
    into: dict = {}
    out: dict = {}
    for a, j in agg.items():
        into.setdefault(a[1], []).append(j)
        out.setdefault(a[0], []).append(j)
    for v, c in state.cap.items():
        cols = out.get(v, []) if v[0] == 4 else into.get(v, [])
        if cols:
            lp.add_row({j: 1 for j in cols}, LE, c)
    for p in state.live_shrunk():
        if out.get(p.id):
            lp.add_row({j: 1 for j in out[p.id]}, LE, p.residual)
    lp.set_objective({agg[a]: 1 for a in agg if head_layer(a) == k + 1}, maximize=True)
    newest = sum((p.mu for p in state.rigid_set(k)), Fraction(0))
    return McfModel(state, lp, agg, comms, 1 - newest)


def solve_model(model: McfModel, method: str = "auto") -> McfSolution:
    sol = solve(model.lp, method)
    if sol.status != "optimal":
        # the zero flow is always feasible, so this signals a solver fault
        raise RuntimeError(f"multicommodity LP returned {sol.status}")
    x = sol.x
    agg = {a: x[j] for a, j in model.agg.items()}
    flows = []
    for c in model.commodities:
        f = {b: x[j] for b, j in c.var.items()}
        f[c.arc] = agg[c.arc]
        flows.append(f)
    return McfSolution(sol.status, sol.value, agg, flows, sol.method)


def extension_weights(model: McfModel, sol: McfSolution) -> list[tuple[tuple, Fraction, dict]]:
    """For each newest-stage commodity: (arc, amount, weight on each stage-4..k triangle)."""
    st = model.state
    k = st.stage
    out = []
    for c, f in zip(model.commodities, sol.flows):
        if c.stage != k:
            continue
        y: dict = {}
        for (t, h), v in f.items():
            if not v:
                continue
            if is_shrunk(t):
                for w in st.shrunk[t[1]].nodes():
                    y[w] = y.get(w, Fraction(0)) + v
            else:
                y[t] = y.get(t, Fraction(0)) + v
        out.append((c.arc, f[c.arc], y))
    return out


def _as_vector(y: dict, k: int, scale=Fraction(1)) -> CharVector:
    coords = []
    for l in range(4, k + 1):
        for e in edges_upto(l - 1):
            coords.append(scale * y.get(node(l, e), Fraction(0)))
    return CharVector(k, tuple(coords))


def weight_violations(model: McfModel, sol: McfSolution) -> list[str]:
    """Check that commodity weights add up to the unexplained part of x, each scaling into the relaxation."""
    st = model.state
    k = st.stage
    errs = []
    ws = extension_weights(model, sol)
    total: dict = {}
    for arc, amount, y in ws:
        for w, v in y.items():
            total[w] = total.get(w, Fraction(0)) + v
        if amount > 0:
            chk = check_membership(_as_vector(y, k, 1 / amount))
            if not chk.inside:
                errs.append(f"commodity {arc}: scaled weights leave the relaxation ({chk.reason})")
    newest = st.rigid_set(k)
    for l in range(4, k + 1):
        for e in edges_upto(l - 1):
            w = node(l, e)
            want = st.x.value(l, e) - sum((p.mu for p in newest if p.contains(w)), Fraction(0))
            if total.get(w, Fraction(0)) != want:
                errs.append(f"weights through {w} sum to {total.get(w, 0)}, expected {want}")
    return errs


def size(model: McfModel) -> tuple[int, int]:
    return model.lp.n_vars, len(model.lp.rows)

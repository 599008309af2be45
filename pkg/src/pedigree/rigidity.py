"""Which arcs of a feasible transportation problem carry a fixed flow.

An arc is rigid when every feasible solution sends the same amount along
it; a rigid arc fixed at zero is a dummy.  Given one feasible flow, the
answer comes from the mixed graph of that flow (see graphs.frozen_elements).
The LP-based oracle below answers the same question by brute force.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .flows import FatProblem, FlowError, check_fat_flow
from .graphs import BACKWARD, BOTH, FORWARD, frozen_elements
from .lp import EQ, LinearProgram, solve


@dataclass
class RigidityReport:
    rigid: dict = field(default_factory=dict)     # arc -> frozen flow, positive
    dummy: set = field(default_factory=set)       # rigid arcs frozen at zero
    free: set = field(default_factory=set)        # arcs whose flow can vary

    def is_rigid(self, arc) -> bool:
        return arc in self.rigid or arc in self.dummy


def flow_graph(p: FatProblem, flow: dict) -> list:
    """Mixed-graph elements of a flow: direction shows how the arc's flow may change."""
    elems = []
    for a, c in p.arcs.items():
        f = flow.get(a, Fraction(0))
        o, d = a
        full = c is not None and f == c
        if f == 0 and full:
            continue  # zero-capacity arc, nothing can move
        if f == 0:
            kind = FORWARD
        elif full:
            kind = BACKWARD
        else:
            kind = BOTH
        elems.append((a, ("o", o), ("d", d), kind))
    return elems


def find_rigid(p: FatProblem, flow: dict) -> RigidityReport:
    errs = check_fat_flow(p, flow)
    if errs:
        raise FlowError("rigidity needs a feasible flow: " + "; ".join(errs[:3]))
    frozen = frozen_elements(flow_graph(p, flow))
    rep = RigidityReport()
    for a in p.arcs:
        f = flow.get(a, Fraction(0))
        if a in frozen or (f == 0 and p.arcs[a] == 0):
            if f > 0:
                rep.rigid[a] = f
            else:
                rep.dummy.add(a)
        else:
            rep.free.add(a)
    return rep


def _fat_lp(p: FatProblem):
    lp = LinearProgram()
    idx = {a: lp.add_var(str(a), c) for a, c in p.arcs.items()}
    for o, s in p.supply.items():
        lp.add_row({idx[a]: 1 for a in p.arcs if a[0] == o}, EQ, s)
    for d, s in p.demand.items():
        lp.add_row({idx[a]: 1 for a in p.arcs if a[1] == d}, EQ, s)
    return lp, idx


def rigidity_oracle(p: FatProblem, method: str = "auto") -> RigidityReport | None:
    """Minimise and maximise every arc flow by LP; None if infeasible."""
    lp, idx = _fat_lp(p)
    rep = RigidityReport()
    for a, j in idx.items():
        lp.set_objective({j: 1}, maximize=True)
        hi = solve(lp, method)
        if hi.status != "optimal":
            return None
        lp.set_objective({j: 1}, maximize=False)
        lo = solve(lp, method)
        if hi.value == lo.value:
            if hi.value > 0:
                rep.rigid[a] = hi.value
            else:
                rep.dummy.add(a)
        else:
            rep.free.add(a)
    return rep


def fat_feasible_lp(p: FatProblem, method: str = "auto") -> bool:
    lp, _ = _fat_lp(p)
    lp.set_objective({}, maximize=True)
    return solve(lp, method).status == "optimal"

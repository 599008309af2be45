"""Stage-by-stage membership decision for the pedigree polytope.

The point is first checked against the insertion relaxation.  Then the
stage-4 transportation problem builds the layered network, and each later
stage adds one layer: a transportation problem over link capacities,
rigid-arc extraction, and a multicommodity LP whose optimum tells whether
the restriction to one more city is still a convex combination of
pedigrees.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import mcf
from .core import CharVector, Pedigree, combine
from .flows import FatProblem, hall_bound, solve_fat
from .layered import (LayeredState, advance, build_stage_problem, first_stage, fmt_node,
                      generator_violations, invariant_violations)
from .mi import check_membership
from .rigidity import find_rigid

log = logging.getLogger(__name__)

MEMBER, NOT_MEMBER = "member", "not_member"


@dataclass
class StageTrace:
    stage: int
    origins: int = 0
    destinations: int = 0
    arcs: int = 0
    rigid: int = 0
    dummy: int = 0
    feasible: bool = True
    shrunk_total: int = 0
    new_shrunk: int = 0
    z_star: Fraction | None = None
    z_max: Fraction | None = None
    lp_size: tuple | None = None
    lp_method: str | None = None
    shortcut: str | None = None
    invariant_violations: list = field(default_factory=list)
    weight_violations: list = field(default_factory=list)
    # bookkeeping problems of a state that was then rejected; not invariant failures
    diagnostics: list = field(default_factory=list)


@dataclass
class Verdict:
    result: str
    reason: str | None = None      # pmi | fat4 | fk_infeasible | mcf_short when rejected
    stage: int | None = None
    witness: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    states: list = field(default_factory=list)
    stage_problems: dict = field(default_factory=dict)    # stage -> (FatProblem, links)
    decomposition: dict | None = None

    @property
    def member(self) -> bool:
        return self.result == MEMBER

    def violations(self) -> list[str]:
        out = []
        for t in self.trace:
            out += [f"stage {t.stage}: {v}" for v in t.invariant_violations + t.weight_violations]
        return out


def _infeasible_witness(fat: FatProblem, res) -> dict:
    dests = res.deficient_destinations
    return {
        "destinations": sorted(fmt_node(d) for d in dests),
        "requirement": sum((fat.demand[d] for d in dests), Fraction(0)),
        "deliverable": hall_bound(fat, dests),
        "max_flow": res.value,
        "total": fat.total,
    }


def _stage_trace(k, fat, res, rig, state: LayeredState | None, links=None) -> StageTrace:
    t = StageTrace(k, len(fat.supply), len(fat.demand), len(fat.arcs), feasible=res.feasible)
    if rig is not None:
        t.rigid = len(rig.rigid)
        t.dummy = len(rig.dummy)
    if state is not None:
        t.shrunk_total = len(state.shrunk)
        t.new_shrunk = len(state.rigid_set(k))
        t.invariant_violations = invariant_violations(state)
        for info in (links or {}).values():
            t.invariant_violations += generator_violations(state, info.network)
    return t


def _shortcut(x: CharVector, k: int) -> str | None:
    blk = dict(zip(x.stage_support(k + 1), (x.value(k + 1, e) for e in x.stage_support(k + 1))))
    if any(v == 1 for v in blk.values()):
        return "single edge carries the whole next stage"
    if sum((v for (i, j), v in blk.items() if j == k), Fraction(0)) == 1:
        return "next stage inserts only into edges of the newest city"
    return None


def decide(x: CharVector, shortcuts: bool = False, method: str = "auto",
           keep_states: bool = False) -> Verdict:
    """Decide whether x is a convex combination of pedigree characteristic vectors."""
    n = x.n
    chk = check_membership(x)
    if not chk.inside:
        return Verdict(NOT_MEMBER, "pmi", chk.stage,
                       {"constraint": chk.reason, "stage": chk.stage, "edge": chk.edge})
    if n == 4:
        weights = {Pedigree((e,)): x.value(4, e) for e in x.stage_support(4)}
        return Verdict(MEMBER, decomposition=weights)

    first = first_stage(x)
    v = Verdict(MEMBER)
    v.stage_problems[4] = (first.fat, {})
    v.trace.append(_stage_trace(4, first.fat, first.fat_result, first.rigidity, first.state))
    if not first.fat_result.feasible:
        v.result, v.reason, v.stage = NOT_MEMBER, "fat4", 4
        v.witness = _infeasible_witness(first.fat, first.fat_result)
        return v
    if n == 5:
        v.decomposition = {Pedigree((a[0][1], a[1][1])): f
                           for a, f in first.fat_result.flow.items() if f > 0}
    state = first.state
    if keep_states:
        v.states.append(state)

    for k in range(5, n):
        fat, links = build_stage_problem(state, k)
        v.stage_problems[k] = (fat, links)
        res = solve_fat(fat)
        if not res.feasible:
            v.trace.append(_stage_trace(k, fat, res, None, None))
            v.result, v.reason, v.stage = NOT_MEMBER, "fk_infeasible", k
            v.witness = _infeasible_witness(fat, res)
            return v
        rig = find_rigid(fat, res.flow)
        state = advance(state, k, fat, res.flow, rig, links)
        if keep_states:
            v.states.append(state)
        tr = _stage_trace(k, fat, res, rig, state, links)
        v.trace.append(tr)
        if shortcuts:
            tr.shortcut = _shortcut(x, k)
            if tr.shortcut:
                continue
        model = mcf.build(state)
        tr.z_max = model.z_max
        tr.lp_size = mcf.size(model)
        if state.is_empty():
            tr.z_star = Fraction(0)
        else:
            sol = mcf.solve_model(model, method)
            tr.z_star = sol.z
            tr.lp_method = sol.method
            if sol.z < model.z_max:
                # the rejected state is not a certified one, so its bookkeeping is only diagnostic
                tr.diagnostics, tr.invariant_violations = tr.invariant_violations, []
                v.result, v.reason, v.stage = NOT_MEMBER, "mcf_short", k
                v.witness = {"z_star": sol.z, "z_max": model.z_max, "gap": model.z_max - sol.z,
                             "certificate": sol.method}
                return v
            tr.weight_violations = mcf.weight_violations(model, sol)
        log.debug("stage %d: z*=%s z_max=%s", k, tr.z_star, tr.z_max)
    if state.stage == n - 1 and state.is_empty():
        v.decomposition = decompose_if_trivial(state)
    return v


class DecompositionError(AssertionError):
    pass


def decompose_if_trivial(state: LayeredState) -> dict | None:
    """When the newest layer is fully explained by shrunk pedigrees, they are the decomposition."""
    if not state.is_empty():
        return None
    k = state.stage
    weights = {p.pedigree(): p.mu for p in state.rigid_set(k)}
    if sum(weights.values(), Fraction(0)) != 1:
        raise DecompositionError(f"shrunk weights sum to {sum(weights.values())}")
    if combine(weights, k + 1) != state.x.restrict(k + 1):
        raise DecompositionError("shrunk pedigrees do not reproduce the point")
    return weights

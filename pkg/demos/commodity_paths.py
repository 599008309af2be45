"""Optimal multicommodity flows need not route each commodity along pedigrees.

At eight cities the restricted network of a link removes conflicts with the
link's own two triangles, but a path may still repeat an edge between two
interior layers (for instance [4:2,3] ... [6:2,3]).  This script builds the
final-stage LP for a point of the pedigree polytope, fixes the objective at
its maximum, and then pushes one commodity as hard as possible through such
a pair.  The resulting optimal solution is exact and certified; the scaled
weights of that commodity fall outside the insertion relaxation, while the
commodity weights still add up to the point.  Verdicts are unaffected: the
point is a member and the driver says so.

Run:  python demos/commodity_paths.py
"""
import sys
from fractions import Fraction

from pedigree import mcf
from pedigree.core import CharVector
from pedigree.layered import fmt_node, node
from pedigree.lp import EQ, solve
from pedigree.membership import decide
from pedigree.oracle import membership

POINT = ("10/17 6/17 1/17 | 0 10/17 0 0 1/17 6/17 | 1/17 0 10/17 0 0 0 0 0 6/17 0 | "
         "6/17 0 0 10/17 0 0 0 0 0 0 0 1/17 0 0 0 | "
         "0 0 0 0 0 0 10/17 0 0 0 0 0 6/17 0 0 0 1/17 0 0 0 0")

TARGET = (node(7, (1, 2)), node(8, (1, 5)))
VIA = (node(5, (1, 3)), node(6, (2, 3)))    # together with [4:2,3] this repeats edge (2,3)


def pushed_solution(model, commodity, arc):
    """An optimal solution of the model that maximises one commodity arc."""
    lp = model.lp
    saved = (dict(lp.objective), lp.maximize, len(lp.rows))
    lp.add_row(dict(saved[0]), EQ, model.z_max)
    lp.set_objective({commodity.var[arc]: 1}, maximize=True)
    sol = solve(lp)
    lp.rows = lp.rows[: saved[2]]
    lp.set_objective(saved[0], saved[1])
    return sol


def as_model_solution(model, sol):
    x = sol.x
    agg = {a: x[j] for a, j in model.agg.items()}
    flows = []
    for c in model.commodities:
        f = {b: x[j] for b, j in c.var.items()}
        f[c.arc] = agg[c.arc]
        flows.append(f)
    return mcf.McfSolution(sol.status, model.lp.value(x), agg, flows, sol.method)


def main() -> int:
    x = CharVector.from_blocks([b.split() for b in POINT.split("|")])
    print("point:", x)
    print("oracle:", "member" if membership(x).member else "not member")
    v = decide(x, keep_states=True)
    print("driver:", v.result)
    state = v.states[-1]
    model = mcf.build(state)
    com = next(c for c in model.commodities if c.arc == TARGET)
    print(f"commodity {fmt_node(TARGET[0])} -> {fmt_node(TARGET[1])}; z_max = {model.z_max}")

    sol = pushed_solution(model, com, VIA)
    full = as_model_solution(model, sol)
    assert not model.lp.violations(sol.x)
    assert full.z == model.z_max
    flow = full.flows[model.commodities.index(com)]
    print(f"optimal solution ({sol.method}) with {flow.get(VIA, Fraction(0))} of the commodity on "
          f"{fmt_node(VIA[0])} -> {fmt_node(VIA[1])}:")
    for (a, b), f in sorted(flow.items()):
        if f:
            print(f"  {fmt_node(a)} -> {fmt_node(b)}: {f}")
    print("weight checks:")
    for err in mcf.weight_violations(model, full) or ["all pass"]:
        print("  " + err)
    return 0


if __name__ == "__main__":
    sys.exit(main())

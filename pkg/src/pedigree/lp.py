"""Exact linear programming over the rationals.

Two routes are available.  ``simplex`` is a dense two-phase tableau method
with Bland's rule, carried out entirely in Fractions.  ``auto`` asks HiGHS
(through scipy) for a vertex, rounds its primal and dual values to nearby
rationals and then proves optimality in exact arithmetic: the rounded
primal must satisfy every constraint and the Lagrangian bound built from
the rounded duals must equal its objective.  Whenever that proof cannot be
completed the exact simplex takes over, so every answer is exact.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

log = logging.getLogger(__name__)

LE, GE, EQ = "<=", ">=", "=="

# how often each route produced the final answer; read by tests and the CLI
STATS: Counter = Counter()


class LpError(RuntimeError):
    pass


@dataclass
class LinearProgram:
    """max or min c.x subject to sparse rows, 0 <= x <= upper."""

    names: list = field(default_factory=list)
    upper: list = field(default_factory=list)
    objective: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    maximize: bool = True

    @property
    def n_vars(self) -> int:
        return len(self.names)

    def add_var(self, name=None, upper=None) -> int:
        self.names.append(name if name is not None else f"x{len(self.names)}")
        self.upper.append(None if upper is None else Fraction(upper))
        return len(self.names) - 1

    def add_row(self, coeffs: dict, sense: str, rhs) -> int:
        if sense not in (LE, GE, EQ):
            raise LpError(f"unknown sense {sense}")
        coeffs = {j: Fraction(c) for j, c in coeffs.items() if c != 0}
        self.rows.append((coeffs, sense, Fraction(rhs)))
        return len(self.rows) - 1

    def set_objective(self, coeffs: dict, maximize: bool = True):
        self.objective = {j: Fraction(c) for j, c in coeffs.items() if c != 0}
        self.maximize = maximize

    def value(self, x) -> Fraction:
        return sum((c * x[j] for j, c in self.objective.items()), Fraction(0))

    def violations(self, x) -> list[str]:
        """Exact feasibility audit of x."""
        out = []
        for j, v in enumerate(x):
            if v < 0 or (self.upper[j] is not None and v > self.upper[j]):
                out.append(f"{self.names[j]} = {v} outside [0, {self.upper[j]}]")
        for r, (coeffs, sense, rhs) in enumerate(self.rows):
            lhs = sum((c * x[j] for j, c in coeffs.items()), Fraction(0))
            if (sense == LE and lhs > rhs) or (sense == GE and lhs < rhs) or (sense == EQ and lhs != rhs):
                out.append(f"row {r}: {lhs} {sense} {rhs} fails")
        return out


@dataclass
class LpSolution:
    status: str                 # optimal | infeasible | unbounded
    value: Fraction | None
    x: list | None
    method: str
    bound: Fraction | None = None   # proven dual bound when certified


# exact simplex

def _standard_form(lp: LinearProgram):
    """Rows as (coeff dict, sense, rhs) with explicit upper-bound rows, all over x >= 0."""
    rows = list(lp.rows)
    for j, u in enumerate(lp.upper):
        if u is not None:
            rows.append(({j: Fraction(1)}, LE, u))
    cost = {j: (-c if lp.maximize else c) for j, c in lp.objective.items()}
    return rows, cost


def _pivot(tab, basis, r, c):
    prow = tab[r]
    pv = prow[c]
    if pv != 1:
        inv = 1 / pv
        for j, v in enumerate(prow):
            if v:
                prow[j] = v * inv
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    basis[r] = c


def _run(tab, basis, allowed) -> str:
    """Minimise the last row of tab; Bland's rule.  Returns 'optimal' or 'unbounded'."""
    obj = tab[-1]
    m = len(tab) - 1
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], enter)


def solve_simplex(lp: LinearProgram) -> LpSolution:
    rows, cost = _standard_form(lp)
    n = lp.n_vars
    m = len(rows)
    # column layout: originals, one slack/surplus per inequality, artificials
    slack_of = {}
    ncols = n
    for i, (_, sense, _) in enumerate(rows):
        if sense != EQ:
            slack_of[i] = ncols
            ncols += 1
    art_start = ncols
    tab = []
    basis = []
    arts = []
    for i, (coeffs, sense, rhs) in enumerate(rows):
        sign = -1 if rhs < 0 else 1
        row = [Fraction(0)] * ncols
        for j, c in coeffs.items():
            row[j] = sign * c
        if sense != EQ:
            row[slack_of[i]] = Fraction(sign if sense == LE else -sign)
        row.append(sign * rhs)
        tab.append(row)
        if sense != EQ and row[slack_of[i]] == 1:
            basis.append(slack_of[i])
        else:
            basis.append(None)
            arts.append(i)
    total = ncols + len(arts)
    for row in tab:
        rhs = row.pop()
        row.extend([Fraction(0)] * len(arts))
        row.append(rhs)
    for a, i in enumerate(arts):
        tab[i][art_start + a] = Fraction(1)
        basis[i] = art_start + a
    # phase 1
    obj = [Fraction(0)] * (total + 1)
    for i in arts:
        for j, v in enumerate(tab[i]):
            if v and j < art_start or j == total:
                obj[j] -= v
    tab.append(obj)
    _run(tab, basis, range(total))
    if tab[-1][-1] != 0:
        STATS["simplex"] += 1
        return LpSolution("infeasible", None, None, "simplex")
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tab) - 1:
        if basis[i] >= art_start:
            col = next((j for j in range(art_start) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, col)
        i += 1
    for row in tab:
        del row[art_start:total]
    # phase 2
    obj = [Fraction(0)] * (art_start + 1)
    for j, c in cost.items():
        obj[j] = c
    for i, b in enumerate(basis):
        f = obj[b]
        if f:
            for j, v in enumerate(tab[i]):
                if v:
                    obj[j] -= f * v
    tab[-1] = obj
    status = _run(tab, basis, range(art_start))
    STATS["simplex"] += 1
    if status == "unbounded":
        return LpSolution("unbounded", None, None, "simplex")
    x = [Fraction(0)] * art_start
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    x = x[:n]
    return LpSolution("optimal", lp.value(x), x, "simplex")


# HiGHS-guided route with exact certificates

def _denominator_scale(lp: LinearProgram) -> int:
    d = 1
    for coeffs, _, rhs in lp.rows:
        d = lcm(d, rhs.denominator, *(c.denominator for c in coeffs.values()))
    for u in lp.upper:
        if u is not None:
            d = lcm(d, u.denominator)
    return min(d, 10 ** 6)


def _rationalise(values, limit: int) -> list[Fraction]:
    out = []
    for v in values:
        v = float(v)
        out.append(Fraction(0) if abs(v) < 1e-12 else Fraction(v).limit_denominator(limit))
    return out


def _limits(lp: LinearProgram) -> list[int]:
    d = _denominator_scale(lp)
    return sorted({d, 2 * d, 6 * d, 24 * d, 720 * d, 10 ** 6})


def _matrices(lp: LinearProgram):
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for coeffs, sense, rhs in lp.rows:
        if sense == EQ:
            eq_rows.append(coeffs)
            eq_rhs.append(rhs)
        elif sense == LE:
            ub_rows.append(coeffs)
            ub_rhs.append(rhs)
        else:
            ub_rows.append({j: -c for j, c in coeffs.items()})
            ub_rhs.append(-rhs)

    def sparse(rows):
        if not rows:
            return None
        data, ri, ci = [], [], []
        for r, coeffs in enumerate(rows):
            for j, c in coeffs.items():
                data.append(float(c))
                ri.append(r)
                ci.append(j)
        return csr_matrix((data, (ri, ci)), shape=(len(rows), lp.n_vars))

    return ub_rows, ub_rhs, eq_rows, eq_rhs, sparse(ub_rows), sparse(eq_rows)


def lagrangian_bound(lp: LinearProgram, ub_rows, ub_rhs, eq_rows, eq_rhs, y_ub, y_eq) -> Fraction | None:
    """Exact lower bound on min c.x from multipliers y_ub <= 0 and free y_eq.

    Returns None when an unbounded variable has a negative reduced cost,
    in which case the multipliers prove nothing.
    """
    sgn = -1 if lp.maximize else 1
    red = [Fraction(0)] * lp.n_vars
    for j, c in lp.objective.items():
        red[j] = sgn * c
    bound = Fraction(0)
    for coeffs, rhs, y in zip(ub_rows, ub_rhs, y_ub):
        if y > 0:
            y = Fraction(0)
        if y:
            bound += y * rhs
            for j, c in coeffs.items():
                red[j] -= y * c
    for coeffs, rhs, y in zip(eq_rows, eq_rhs, y_eq):
        if y:
            bound += y * rhs
            for j, c in coeffs.items():
                red[j] -= y * c
    for j, r in enumerate(red):
        if r < 0:
            if lp.upper[j] is None:
                return None
            bound += r * lp.upper[j]
    return bound


def _certify(lp: LinearProgram, res, mats) -> LpSolution | None:
    ub_rows, ub_rhs, eq_rows, eq_rhs, _, _ = mats
    x = None
    for lim in _limits(lp):
        cand = _rationalise(res.x, lim)
        if not lp.violations(cand):
            x = cand
            break
    if x is None:
        return None
    value = lp.value(x)
    target = -value if lp.maximize else value
    y_ub_f = res.ineqlin.marginals if ub_rows else []
    y_eq_f = res.eqlin.marginals if eq_rows else []
    for lim in _limits(lp):
        b = lagrangian_bound(lp, ub_rows, ub_rhs, eq_rows, eq_rhs,
                             _rationalise(y_ub_f, lim), _rationalise(y_eq_f, lim))
        if b is not None and b == target:
            return LpSolution("optimal", value, x, "certified", value)
    return None


def _highs(lp: LinearProgram, mats):
    _, ub_rhs, _, eq_rhs, a_ub, a_eq = mats
    sgn = -1.0 if lp.maximize else 1.0
    c = np.zeros(lp.n_vars)
    for j, v in lp.objective.items():
        c[j] = sgn * float(v)
    bounds = [(0, None if u is None else float(u)) for u in lp.upper]
    return linprog(c, A_ub=a_ub, b_ub=[float(v) for v in ub_rhs] if a_ub is not None else None,
                   A_eq=a_eq, b_eq=[float(v) for v in eq_rhs] if a_eq is not None else None,
                   bounds=bounds, method="highs-ds")


def _phase_one(lp: LinearProgram) -> LinearProgram:
    """Minimise total violation; zero optimum iff lp is feasible."""
    aux = LinearProgram(list(lp.names), list(lp.upper), {}, [], maximize=False)
    obj = {}
    for coeffs, sense, rhs in lp.rows:
        coeffs = dict(coeffs)
        if sense in (LE, EQ):
            t = aux.add_var(upper=None)
            coeffs[t] = Fraction(-1)
            obj[t] = 1
        if sense in (GE, EQ):
            t = aux.add_var(upper=None)
            coeffs[t] = Fraction(1)
            obj[t] = 1
        aux.add_row(coeffs, sense, rhs)
    aux.set_objective(obj, maximize=False)
    return aux


def _certify_infeasible(lp: LinearProgram) -> bool:
    aux = _phase_one(lp)
    mats = _matrices(aux)
    res = _highs(aux, mats)
    if res.status != 0:
        return False
    ub_rows, ub_rhs, eq_rows, eq_rhs, _, _ = mats
    for lim in _limits(aux):
        # violation columns cap the useful multipliers at one in absolute value
        y_ub = [max(Fraction(-1), y) for y in _rationalise(res.ineqlin.marginals if ub_rows else [], lim)]
        y_eq = [min(Fraction(1), max(Fraction(-1), y))
                for y in _rationalise(res.eqlin.marginals if eq_rows else [], lim)]
        b = lagrangian_bound(aux, ub_rows, ub_rhs, eq_rows, eq_rhs, y_ub, y_eq)
        if b is not None and b > 0:
            return True
    return False


def solve(lp: LinearProgram, method: str = "auto") -> LpSolution:
    """Solve exactly.  method is 'auto' (certified HiGHS, simplex fallback) or 'simplex'."""
    if method == "simplex":
        return solve_simplex(lp)
    if method != "auto":
        raise LpError(f"unknown method {method}")
    if lp.n_vars == 0:
        return solve_simplex(lp)
    mats = _matrices(lp)
    res = _highs(lp, mats)
    if res.status == 0:
        sol = _certify(lp, res, mats)
        if sol is not None:
            STATS["certified"] += 1
            return sol
    elif res.status == 2 and _certify_infeasible(lp):
        STATS["certified"] += 1
        return LpSolution("infeasible", None, None, "certified")
    log.debug("certificate not found (HiGHS status %s); falling back to exact simplex", res.status)
    STATS["fallback"] += 1
    return solve_simplex(lp)

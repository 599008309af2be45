"""Brute-force reference: membership via the explicit list of pedigrees.

Only practical for n <= 8, which is the point: it shares nothing with the
layered-network machinery beyond pedigree enumeration and exact LP.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import CharVector, Pedigree, all_pedigrees, coord_index, coordinate_count
from .lp import EQ, LinearProgram, solve


@dataclass
class OracleResult:
    member: bool
    weights: dict | None          # pedigree -> weight, a certificate when member


@lru_cache(maxsize=None)
def _supports(n: int) -> tuple:
    return tuple(frozenset(coord_index(k, e) for k, e in enumerate(p.edges, start=4))
                 for p in all_pedigrees(n))


def candidates(x: CharVector) -> list[Pedigree]:
    """Pedigrees whose triangles all carry positive weight in x; nothing else can be active."""
    pos = {i for i, v in enumerate(x.coords) if v > 0}
    return [p for p, s in zip(all_pedigrees(x.n), _supports(x.n)) if s <= pos]


def _hull_lp(x: CharVector, peds: list) -> LinearProgram:
    lp = LinearProgram()
    cols = [lp.add_var(str(p), 1) for p in peds]
    rows: dict = {}
    for j, p in zip(cols, peds):
        for k, e in enumerate(p.edges, start=4):
            rows.setdefault(coord_index(k, e), {})[j] = 1
    for i, v in enumerate(x.coords):
        if v > 0:
            lp.add_row(rows.get(i, {}), EQ, v)
    lp.add_row({j: 1 for j in cols}, EQ, 1)
    return lp


def membership(x: CharVector, method: str = "auto") -> OracleResult:
    if any(v < 0 for v in x.coords):
        return OracleResult(False, None)
    peds = candidates(x)
    if not peds:
        return OracleResult(False, None)
    lp = _hull_lp(x, peds)
    lp.set_objective({}, maximize=True)
    sol = solve(lp, method)
    if sol.status != "optimal":
        return OracleResult(False, None)
    weights = {p: w for p, w in zip(peds, sol.x) if w > 0}
    return OracleResult(True, weights)


def active_pedigrees(x: CharVector, method: str = "auto") -> list[Pedigree]:
    """Pedigrees with positive weight in at least one convex representation of x."""
    peds = candidates(x)
    lp = _hull_lp(x, peds)
    out = []
    for j, p in enumerate(peds):
        lp.set_objective({j: 1}, maximize=True)
        sol = solve(lp, method)
        if sol.status != "optimal":
            return []
        if sol.value > 0:
            out.append(p)
    return out


def affine_rank(vectors: list) -> int:
    """Rank of the differences from the first vector, in exact arithmetic."""
    if not vectors:
        return -1
    base = vectors[0]
    basis: dict = {}     # pivot column -> reduced row
    for v in vectors[1:]:
        row = [Fraction(a - b) for a, b in zip(v, base)]
        for piv, brow in basis.items():
            f = row[piv]
            if f:
                row = [a - f * b for a, b in zip(row, brow)]
        piv = next((i for i, a in enumerate(row) if a), None)
        if piv is None:
            continue
        inv = 1 / row[piv]
        row = [a * inv for a in row]
        for p2, brow in basis.items():
            f = brow[piv]
            if f:
                basis[p2] = [a - f * b for a, b in zip(brow, row)]
        basis[piv] = row
    return len(basis)


def dimension(n: int) -> int:
    """Dimension of the hull of all pedigrees on n cities."""
    return affine_rank([CharVector.from_pedigree(p).coords for p in all_pedigrees(n)])


def representation_dimension(x: CharVector, method: str = "auto") -> int | None:
    """Dimension of the set of convex weightings of pedigrees that produce x; None if x is outside."""
    act = active_pedigrees(x, method)
    if not act:
        return None
    vecs = [CharVector.from_pedigree(p).coords + (1,) for p in act]
    rank = affine_rank([(0,) * len(vecs[0])] + vecs)
    return len(act) - rank


def midpoint_adjacent(p: Pedigree, q: Pedigree) -> bool:
    """Adjacency test for a combinatorial polytope: no other pair shares the midpoint."""
    mid = CharVector.from_pedigree(p) + CharVector.from_pedigree(q)
    sup = {i for i, v in enumerate(mid.coords) if v > 0}
    inside = [r for r, s in zip(all_pedigrees(p.n), _supports(p.n)) if s <= sup and r not in (p, q)]
    vecs = {r: CharVector.from_pedigree(r).coords for r in inside}
    target = mid.coords
    for a in inside:
        need = tuple(t - v for t, v in zip(target, vecs[a]))
        if any(c < 0 for c in need):
            continue
        for b in inside:
            if b != a and vecs[b] == need:
                return False
    return True


def full_dimension_expected(n: int) -> int:
    return coordinate_count(n) - (n - 3)

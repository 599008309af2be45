"""Multistage insertion relaxation: constraint matrices and slack recursion.

The relaxation asks for nonnegative stage blocks x_4..x_n, each summing to
one, such that every slack vector stays nonnegative.  Slacks start at the
base triangle (1 on edges 12, 13, 23) and each stage consumes the slack of
the edges it inserts into while creating slack on the two new edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import CharVector, Edge, Tour, coordinate_count, edge_count, edges_upto


def stage_matrix(l: int) -> np.ndarray:
    """Stage-l column block: identity over old edges stacked on minus the incidence of K_{l-1}."""
    old = edges_upto(l - 1)
    top = np.eye(len(old), dtype=np.int64)
    incidence = np.zeros((l - 1, len(old)), dtype=np.int64)
    for c, (i, j) in enumerate(old):
        incidence[i - 1, c] = 1
        incidence[j - 1, c] = 1
    return np.vstack([top, -incidence])


def insertion_matrix(n: int) -> np.ndarray:
    """Slack-consumption matrix with p_n rows and one column per coordinate."""
    mat = np.zeros((edge_count(n), coordinate_count(n)), dtype=np.int64)
    col = 0
    for l in range(4, n + 1):
        blk = stage_matrix(l)
        mat[: blk.shape[0], col: col + blk.shape[1]] = blk
        col += blk.shape[1]
    return mat


def assignment_matrix(n: int) -> np.ndarray:
    """One row of ones per stage block."""
    mat = np.zeros((n - 3, coordinate_count(n)), dtype=np.int64)
    col = 0
    for r, l in enumerate(range(4, n + 1)):
        w = edge_count(l - 1)
        mat[r, col: col + w] = 1
        col += w
    return mat


@dataclass
class MiSystem:
    n: int
    assignment: np.ndarray
    insertion: np.ndarray

    @property
    def initial_slack(self) -> np.ndarray:
        u = np.zeros(edge_count(self.n), dtype=np.int64)
        u[:3] = 1
        return u


def build_system(n: int) -> MiSystem:
    if n < 4:
        raise ValueError("the relaxation is defined for n >= 4")
    return MiSystem(n, assignment_matrix(n), insertion_matrix(n))


def slack_sequence(x: CharVector) -> list[tuple[Fraction, ...]]:
    """Slack vectors after stages 3, 4, ..., n, each over the edges of K_stage."""
    u = [Fraction(1)] * 3
    out = [tuple(u)]
    for l in range(4, x.n + 1):
        blk = x.block(l)
        nxt = [a - b for a, b in zip(u, blk)]
        for i in range(1, l):
            nxt.append(sum((v for (a, b), v in zip(edges_upto(l - 1), blk) if i in (a, b)), Fraction(0)))
        u = nxt
        out.append(tuple(u))
    return out


@dataclass
class MiCheck:
    inside: bool
    reason: str | None = None
    stage: int | None = None
    edge: Edge | None = None
    slacks: list = field(default_factory=list)


def check_membership(x: CharVector) -> MiCheck:
    """Exact test of x against the relaxation, naming the first violated constraint."""
    for l in range(4, x.n + 1):
        blk = x.block(l)
        for e, v in zip(edges_upto(l - 1), blk):
            if v < 0:
                return MiCheck(False, f"negative coordinate x_{l}{e} = {v}", l, e)
        if sum(blk) != 1:
            return MiCheck(False, f"stage {l} block sums to {sum(blk)}, not 1", l)
    slacks = slack_sequence(x)
    for l, u in zip(range(3, x.n + 1), slacks):
        for e, v in zip(edges_upto(l), u):
            if v < 0:
                return MiCheck(False, f"slack of edge {e} after stage {l} is {v} < 0", l, e, slacks)
    return MiCheck(True, None, None, None, slacks)


def final_slack(x: CharVector) -> tuple[Fraction, ...]:
    return slack_sequence(x)[-1]


def slack_tour(x: CharVector) -> Tour | None:
    """For an integral point, the edges with unit slack form the tour."""
    if any(v.denominator != 1 for v in x.coords):
        return None
    u = final_slack(x)
    return Tour(x.n, frozenset(e for e, v in zip(edges_upto(x.n), u) if v == 1))

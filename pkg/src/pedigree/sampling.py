"""Random rational test points."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import CharVector, all_pedigrees, combine, coord_index, edges_upto
from .mi import check_membership, slack_sequence

MODES = ("hull", "perturbed", "pmi")


def hull_point(rng: random.Random, n: int, max_terms: int = 5, denom: int = 12) -> CharVector:
    """Convex combination of a few random pedigrees with small-denominator weights."""
    peds = all_pedigrees(n)
    m = rng.randint(1, max_terms)
    chosen = rng.sample(peds, min(m, len(peds)))
    raw = [rng.randint(1, denom) for _ in chosen]
    tot = sum(raw)
    return combine([(p, Fraction(r, tot)) for p, r in zip(chosen, raw)], n)


def perturbed_point(rng: random.Random, n: int, tries: int = 50) -> CharVector:
    """A hull point nudged within one stage block, kept inside the relaxation."""
    base = hull_point(rng, n)
    for _ in range(tries):
        k = rng.randint(4, n)
        edges = edges_upto(k - 1)
        donors = [e for e in edges if base.value(k, e) > 0]
        a = rng.choice(donors)
        b = rng.choice([e for e in edges if e != a])
        delta = base.value(k, a) * Fraction(rng.randint(1, 4), 4)
        coords = list(base.coords)
        coords[coord_index(k, a)] -= delta
        coords[coord_index(k, b)] += delta
        cand = CharVector(n, tuple(coords))
        if check_membership(cand).inside:
            return cand
    return base


def relaxation_point(rng: random.Random, n: int, denom: int = 8, tries: int = 200) -> CharVector:
    """Stage-by-stage rejection sampling of a point of the insertion relaxation."""
    while True:
        blocks: list = []
        slack = (Fraction(1),) * 3
        for k in range(4, n + 1):
            edges = edges_upto(k - 1)
            room = [e for e, s in zip(edges, slack) if s > 0]
            for _ in range(tries):
                sup = rng.sample(room, rng.randint(1, min(4, len(room))))
                raw = [rng.randint(1, denom) for _ in sup]
                blk = {e: Fraction(r, sum(raw)) for e, r in zip(sup, raw)}
                if all(blk.get(e, 0) <= s for e, s in zip(edges, slack)):
                    blocks.append([blk.get(e, Fraction(0)) for e in edges])
                    break
            else:
                break
            slack = slack_sequence(CharVector.from_blocks(blocks))[-1]
        if len(blocks) == n - 3:
            pt = CharVector.from_blocks(blocks)
            if check_membership(pt).inside:
                return pt


def sample(rng: random.Random, n: int, mode: str) -> CharVector:
    if mode == "hull":
        return hull_point(rng, n)
    if mode == "perturbed":
        return perturbed_point(rng, n)
    if mode == "pmi":
        return relaxation_point(rng, n)
    raise ValueError(f"unknown mode {mode}; choose from {', '.join(MODES)}")


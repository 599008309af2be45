"""Pedigrees, tours and characteristic vectors.

A pedigree on n cities is stored as its sequence of common edges
(e_4, ..., e_n): the triangle at stage k is e_k + {k}.  Stage 3 always
carries the base triangle (1, 2, 3), which is implicit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator

Edge = tuple[int, int]
Triangle = tuple[int, int, int]

BASE_TRIANGLE: Triangle = (1, 2, 3)


class PedigreeError(ValueError):
    """Raised for structurally invalid edges, triangles or pedigrees."""


def edge(i: int, j: int) -> Edge:
    if i == j or i < 1 or j < 1:
        raise PedigreeError(f"bad edge ({i},{j})")
    return (i, j) if i < j else (j, i)


def edge_label(e: Edge) -> int:
    i, j = e
    return i + (j - 1) * (j - 2) // 2


def edge_count(n: int) -> int:
    """Number of edges of the complete graph on n cities."""
    return n * (n - 1) // 2


def coordinate_count(n: int) -> int:
    """Length of a characteristic vector with the fixed base coordinate dropped."""
    return comb(n, 3) - 1


@lru_cache(maxsize=None)
def edges_upto(m: int) -> tuple[Edge, ...]:
    """All edges of K_m in label order."""
    return tuple((i, j) for j in range(2, m + 1) for i in range(1, j))


def triangle(e: Edge, k: int) -> Triangle:
    return (e[0], e[1], k)


def generators(t: Triangle) -> frozenset[Triangle]:
    """Triangles that may precede t in a pedigree.

    For t = {i, j, k} with i < j < k the generators are all stage-j triangles
    containing i; when j <= 3 the only generator is the base triangle.
    """
    i, j, k = t
    if k <= 3:
        raise PedigreeError("the base triangle has no generator")
    if j <= 3:
        return frozenset([BASE_TRIANGLE])
    return frozenset((a, b, j) for (a, b) in edges_upto(j - 1) if i in (a, b))


def has_generator(prefix_edges: Iterable[Edge], e: Edge) -> bool:
    """True if the stage-j triangle of the prefix contains i, for e = (i, j)."""
    i, j = e
    if j <= 3:
        return True
    edges = tuple(prefix_edges)
    if len(edges) < j - 3:
        return False
    return i in edges[j - 4]


def extension_error(prefix_edges: tuple[Edge, ...], e: Edge) -> str | None:
    """Reason why e cannot be the next common edge, or None if it can."""
    k = len(prefix_edges) + 4
    i, j = e
    if not (1 <= i < j <= k - 1):
        return f"edge ({i},{j}) is not an edge of K_{k - 1}"
    if e in prefix_edges:
        return f"insert {k} in ({i},{j}) not possible: edge already used as a common edge"
    if not has_generator(prefix_edges, e):
        return f"insert {k} in ({i},{j}) not possible: no generator for {{{i},{j},{k}}}"
    return None


@dataclass(frozen=True)
class Pedigree:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for pos, e in enumerate(edges):
            msg = extension_error(edges[:pos], e)
            if msg:
                raise PedigreeError(msg)

    @property
    def n(self) -> int:
        return len(self.edges) + 3

    def triangles(self) -> tuple[Triangle, ...]:
        return (BASE_TRIANGLE,) + tuple(triangle(e, k) for k, e in enumerate(self.edges, start=4))

    def common_edge(self, k: int) -> Edge:
        return self.edges[k - 4]

    def prefix(self, k: int) -> Pedigree:
        """Restriction to the first k cities."""
        if not 3 <= k <= self.n:
            raise PedigreeError(f"cannot restrict an n={self.n} pedigree to {k}")
        return Pedigree(self.edges[: k - 3])

    def extend(self, e: Edge) -> Pedigree:
        return Pedigree(self.edges + (edge(*e),))

    def can_extend(self, e: Edge) -> bool:
        return extension_error(self.edges, edge(*e)) is None

    def characteristic_vector(self) -> CharVector:
        return CharVector.from_pedigree(self)

    def __str__(self):
        return " ".join(f"({i},{j})" for i, j in self.edges)


def check_triangles(tris: Iterable[Triangle]) -> tuple[bool, str | None]:
    """Validate a triangle sequence as a pedigree; returns (ok, reason)."""
    tris = [tuple(sorted(t)) for t in tris]
    if not tris or tris[0] != BASE_TRIANGLE:
        return False, "sequence must start with the base triangle (1,2,3)"
    edges: list[Edge] = []
    for k, t in enumerate(tris[1:], start=4):
        if t[2] != k:
            return False, f"triangle {t} at position {k} does not contain city {k} as its largest city"
        msg = extension_error(tuple(edges), (t[0], t[1]))
        if msg:
            return False, msg
        edges.append((t[0], t[1]))
    return True, None


def extensions(prefix_edges: tuple[Edge, ...]) -> list[Edge]:
    k = len(prefix_edges) + 4
    return [e for e in edges_upto(k - 1) if extension_error(prefix_edges, e) is None]


def iter_pedigrees(n: int) -> Iterator[Pedigree]:
    """All pedigrees on n cities, lexicographic in the common-edge labels."""
    if n < 3:
        raise PedigreeError("pedigrees need at least 3 cities")

    def walk(prefix):
        if len(prefix) == n - 3:
            yield prefix
            return
        for e in extensions(prefix):
            yield from walk(prefix + (e,))

    for edges in walk(()):
        yield Pedigree(edges)


@lru_cache(maxsize=None)
def all_pedigrees(n: int) -> tuple[Pedigree, ...]:
    if n > 9:
        raise PedigreeError("enumeration is limited to n <= 9")
    return tuple(iter_pedigrees(n))


@dataclass(frozen=True)
class Tour:
    """Hamiltonian cycle on cities 1..n as an undirected edge set."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset(edge(*e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) != self.n:
            raise PedigreeError(f"a tour on {self.n} cities has {self.n} edges, got {len(edges)}")
        deg = {v: 0 for v in range(1, self.n + 1)}
        for i, j in edges:
            if j > self.n:
                raise PedigreeError(f"city {j} out of range")
            deg[i] += 1
            deg[j] += 1
        if any(d != 2 for d in deg.values()):
            raise PedigreeError("every city must have degree 2")
        if len(self.cycle()) != self.n:
            raise PedigreeError("edge set is not a single cycle")

    @classmethod
    def from_sequence(cls, seq: Iterable[int]) -> Tour:
        seq = list(seq)
        if sorted(seq) != list(range(1, len(seq) + 1)):
            raise PedigreeError(f"sequence must be a permutation of 1..{len(seq)}")
        if len(seq) < 3:
            raise PedigreeError("a tour needs at least 3 cities")
        return cls(len(seq), frozenset(edge(seq[i], seq[(i + 1) % len(seq)]) for i in range(len(seq))))

    def cycle(self) -> list[int]:
        """City sequence starting at 1, heading towards the smaller neighbour."""
        adj: dict[int, list[int]] = {}
        for i, j in self.edges:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        seq = [1]
        prev, cur = 1, min(adj[1])
        while cur != 1:
            seq.append(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        return seq


def pedigree_to_tour(p: Pedigree) -> Tour:
    """Insert cities 4..n one by one into the common edge of their triangle."""
    edges = {(1, 2), (1, 3), (2, 3)}
    for k, (i, j) in enumerate(p.edges, start=4):
        if (i, j) not in edges:
            raise PedigreeError(f"insert {k} in ({i},{j}) not possible")
        edges.remove((i, j))
        edges.add((i, k))
        edges.add((j, k))
    return Tour(p.n, frozenset(edges))


def tour_to_pedigree(t: Tour) -> Pedigree:
    """Shrink the tour city by city, recording the edge that closes each gap."""
    adj: dict[int, set[int]] = {}
    for i, j in t.edges:
        adj.setdefault(i, set()).add(j)
        adj.setdefault(j, set()).add(i)
    rev: list[Edge] = []
    for k in range(t.n, 3, -1):
        a, b = sorted(adj.pop(k))
        adj[a].discard(k)
        adj[b].discard(k)
        adj[a].add(b)
        adj[b].add(a)
        rev.append((a, b))
    return Pedigree(tuple(reversed(rev)))


def block_offset(k: int) -> int:
    """Index of the first coordinate of stage k in a characteristic vector."""
    return coordinate_count(k - 1) if k > 4 else 0


def coord_index(k: int, e: Edge) -> int:
    return block_offset(k) + edge_label(e) - 1


def parse_fraction(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, float):
        raise PedigreeError("floats are not accepted; use 'p/q' strings")
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise PedigreeError(f"cannot parse {s!r} as a rational") from exc


@dataclass(frozen=True)
class CharVector:
    """A point in the stacked stage blocks x_4 | x_5 | ... | x_n."""

    n: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if self.n < 4:
            raise PedigreeError("n must be at least 4")
        coords = tuple(parse_fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != coordinate_count(self.n):
            raise PedigreeError(
                f"expected {coordinate_count(self.n)} coordinates for n={self.n}, got {len(coords)}")

    @classmethod
    def from_blocks(cls, blocks) -> CharVector:
        blocks = [tuple(parse_fraction(c) for c in b) for b in blocks]
        n = len(blocks) + 3
        for k, b in enumerate(blocks, start=4):
            if len(b) != edge_count(k - 1):
                raise PedigreeError(f"block for stage {k} must have {edge_count(k - 1)} entries, got {len(b)}")
        return cls(n, tuple(c for b in blocks for c in b))

    @classmethod
    def from_pedigree(cls, p: Pedigree) -> CharVector:
        coords = [Fraction(0)] * coordinate_count(p.n)
        for k, e in enumerate(p.edges, start=4):
            coords[coord_index(k, e)] = Fraction(1)
        return cls(p.n, tuple(coords))

    def block(self, k: int) -> tuple[Fraction, ...]:
        lo = block_offset(k)
        return self.coords[lo: lo + edge_count(k - 1)]

    def blocks(self) -> list[tuple[Fraction, ...]]:
        return [self.block(k) for k in range(4, self.n + 1)]

    def value(self, k: int, e: Edge) -> Fraction:
        return self.coords[coord_index(k, e)]

    def stage_support(self, k: int) -> list[Edge]:
        return [e for e, v in zip(edges_upto(k - 1), self.block(k)) if v > 0]

    def restrict(self, k: int) -> CharVector:
        return CharVector(k, self.coords[: coordinate_count(k)])

    def scaled(self, c) -> CharVector:
        return CharVector(self.n, tuple(c * v for v in self.coords))

    def __add__(self, other: CharVector) -> CharVector:
        if other.n != self.n:
            raise PedigreeError("dimension mismatch")
        return CharVector(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __str__(self):
        return " | ".join(" ".join(str(v) for v in b) for b in self.blocks())


def combine(weights: dict[Pedigree, Fraction] | Iterable[tuple[Pedigree, Fraction]], n: int) -> CharVector:
    """Weighted sum of characteristic vectors."""
    items = weights.items() if isinstance(weights, dict) else weights
    coords = [Fraction(0)] * coordinate_count(n)
    for p, w in items:
        for k, e in enumerate(p.edges, start=4):
            coords[coord_index(k, e)] += w
    return CharVector(n, tuple(coords))

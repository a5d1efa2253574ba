"""Chord-diagram pairings of {1,..,2n} and the directed multigraphs they induce.

A pairing is a perfect matching on the points 1..2n.  Scanning the points
left to right and closing a vertex at every right endpoint merges the points
into n vertex groups; every chord then becomes a directed edge from the
vertex of its right endpoint to the vertex of its left endpoint.  Loops and
multiple edges are kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError

ENUMERATION_CAP = 8  # 15!! = 2,027,025 pairings at n=8


def pairing_count(n: int) -> int:
    """Number of pairings of 2n points: (2n-1)!! = 1*3*...*(2n-1)."""
    out = 1
    for x in range(2 * n - 1, 0, -2):
        out *= x
    return out


@dataclass(frozen=True)
class Pairing:
    """A perfect matching on {1,..,2n}, stored as a partner lookup.

    ``partner[i]`` is the point paired with i; index 0 is unused.
    """

    n: int
    partner: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("pairing size must be >= 1")
        if len(self.partner) != 2 * self.n + 1:
            raise DomainError("partner table has wrong length")
        for x in range(1, 2 * self.n + 1):
            p = self.partner[x]
            if not 1 <= p <= 2 * self.n or p == x or self.partner[p] != x:
                raise DomainError("partner table is not a fixed-point-free involution")

    def pairs(self):
        """The n pairs as (left, right) tuples, sorted by left endpoint."""
        return [(x, self.partner[x]) for x in range(1, 2 * self.n + 1) if x < self.partner[x]]

    @classmethod
    def from_pairs(cls, pairs) -> "Pairing":
        n = len(pairs)
        partner = [0] * (2 * n + 1)
        for a, b in pairs:
            partner[a] = b
            partner[b] = a
        return cls(n, tuple(partner))


def enumerate_pairings(n: int, cap: int = ENUMERATION_CAP):
    """All pairings of {1,..,2n}, exactly once each, in a fixed order.

    Order is lexicographic in the partner of the smallest unpaired point.
    Yields ``pairing_count(n)`` pairings.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if n > cap:
        raise CapacityError(f"n={n} exceeds the enumeration cap {cap}")

    partner = [0] * (2 * n + 1)

    def rec(unpaired):
        if not unpaired:
            yield Pairing(n, tuple(partner))
            return
        a = unpaired[0]
        for i in range(1, len(unpaired)):
            b = unpaired[i]
            partner[a], partner[b] = b, a
            yield from rec(unpaired[1:i] + unpaired[i + 1 :])
            partner[a] = partner[b] = 0

    yield from rec(list(range(1, 2 * n + 1)))


def sample_pairing(n: int, rng: np.random.Generator) -> Pairing:
    """Uniform random pairing: repeatedly match an open point with a uniform
    choice among the remaining ones.  Every pairing has probability
    1/(2n-1)!!; O(n) time.  Deterministic given the generator state."""
    partner = sample_partner_array(n, rng)
    return Pairing(n, tuple(partner.tolist()))


def sample_partner_array(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform pairing as a partner array (index 0 unused)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    pool = np.arange(1, 2 * n + 1, dtype=np.int64)
    partner = np.zeros(2 * n + 1, dtype=np.int64)
    # one vectorized draw for all n choices; pool sizes are 2n, 2n-2, ..., 2
    picks = rng.integers(1, np.arange(2 * n, 1, -2))
    size = 2 * n
    for j in range(n):
        a = int(pool[0])
        i = int(picks[j])
        b = int(pool[i])
        partner[a], partner[b] = b, a
        # swap-remove both chosen points in O(1)
        pool[i] = pool[size - 1]
        pool[0] = pool[size - 2]
        size -= 2
    return partner


@dataclass
class LcdGraph:
    """Directed multigraph with loops on vertices 1..n_vertices.

    Edges are an ordered list so multiplicities survive; ``src[i] -> tgt[i]``.
    """

    n_vertices: int
    src: np.ndarray
    tgt: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.src = np.asarray(self.src, dtype=np.int64)
        self.tgt = np.asarray(self.tgt, dtype=np.int64)
        if self.src.shape != self.tgt.shape:
            raise DomainError("edge arrays must have equal length")

    @property
    def n_edges(self) -> int:
        return int(self.src.size)

    @cached_property
    def in_degrees(self) -> np.ndarray:
        """in_degrees[v-1] is the in-degree of vertex v; a loop adds 1."""
        return np.bincount(self.tgt, minlength=self.n_vertices + 1)[1:]

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n_vertices + 1)[1:]

    @cached_property
    def total_degrees(self) -> np.ndarray:
        return self.in_degrees + self.out_degrees

    def degrees_of(self, mode: str) -> np.ndarray:
        if mode == "in_degree":
            return self.in_degrees
        if mode == "out_degree":
            return self.out_degrees
        if mode == "total_degree":
            return self.total_degrees
        raise DomainError(f"unknown degree mode {mode!r}")

    def edge_list(self):
        return list(zip(self.src.tolist(), self.tgt.tolist()))


def graph_from_partner_array(partner: np.ndarray, meta: dict | None = None) -> LcdGraph:
    """Build the merged directed graph from a partner array (1-indexed,
    index 0 unused).  Vectorized; used for large sampled pairings too."""
    two_n = partner.size - 1
    n = two_n // 2
    idx = np.arange(1, two_n + 1)
    is_right = partner[1:] < idx
    if int(is_right.sum()) != n:
        raise DomainError("partner array is not a valid pairing")
    # vertex of point i: 1 + number of right endpoints strictly before i
    vertex = np.empty(two_n + 1, dtype=np.int64)
    vertex[1:] = np.cumsum(is_right) - is_right + 1
    # by involution, every left endpoint's partner lies to its right, so the
    # scan must close exactly n vertices; assert rather than assume
    if vertex[two_n] != n or not is_right[-1]:
        raise DomainError("scan did not close the final vertex at point 2n")
    left = idx[~is_right]
    right = partner[left]
    order = np.argsort(right)  # edges in right-endpoint (creation) order
    left, right = left[order], right[order]
    return LcdGraph(n, vertex[right], vertex[left], meta or {})


def pairing_to_graph(p: Pairing) -> LcdGraph:
    """The merged directed multigraph of a pairing: n vertices, n edges."""
    return graph_from_partner_array(np.array(p.partner, dtype=np.int64))


def degree_prefix_sum(g: LcdGraph, k: int) -> int:
    """Sum of total degrees of vertices 1..k."""
    if not 1 <= k <= g.n_vertices:
        raise DomainError(f"k={k} outside 1..{g.n_vertices}")
    return int(g.total_degrees[:k].sum())

"""Generators for the preferential-attachment graph process.

Three constructions of the same target family are provided:

* ``sequential`` -- grow the graph one edge at a time; vertex t attaches to
  vertex s with probability deg(s)/(2t-1) and to itself with 1/(2t-1).
  For m > 1 the process runs on m*n primed vertices and consecutive blocks
  of m are identified.
* ``pairing`` -- sample a uniform perfect matching on 2mn points, merge it
  into a directed multigraph, identify blocks of m.
* ``urn`` -- stick-breaking weights from Beta draws; each vertex k >= 2
  attaches its m edges among vertices 1..k-1 by inverting the cumulative
  stick lengths.  Vertex 1 keeps m loops.  Note: this construction never
  self-loops at k >= 2, so its finite-size law is close to, but not
  identical with, the other two (they agree asymptotically).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import fill_endpoints
from .errors import CapacityError, DomainError
from .lcd import LcdGraph, graph_from_partner_array, sample_partner_array

VARIANTS = ("sequential", "urn", "pairing")

PAIRING_POINT_CAP = 50_000_000  # 2mn points materialized by the pairing route


@dataclass(frozen=True)
class ProcessParams:
    """One generation run: n vertices, m edges per vertex, construction
    variant and the 64-bit master seed."""

    n: int
    m: int
    variant: str = "sequential"
    master_seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError("n and m must be >= 1")
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")

    def meta(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "variant": self.variant,
            "seed": self.master_seed,
        }


def replicate_rng(master_seed: int, replicate: int = 0) -> np.random.Generator:
    """Independent stream keyed by (master_seed, replicate); order-free."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, replicate]))


def _collapse(primed_src, primed_tgt, n: int, m: int, meta: dict) -> LcdGraph:
    """Identify primed vertices (1..mn) in consecutive blocks of m."""
    if m == 1:
        return LcdGraph(n, primed_src, primed_tgt, meta)
    return LcdGraph(n, (primed_src - 1) // m + 1, (primed_tgt - 1) // m + 1, meta)


def generate_sequential(params: ProcessParams, rng: np.random.Generator) -> LcdGraph:
    """The sequential process; O(1) amortized work per edge."""
    big_n = params.n * params.m
    highs = 2 * np.arange(1, big_n + 1, dtype=np.int64) - 1
    choices = rng.integers(0, highs)  # choices[t-1] uniform on [0, 2t-2]
    endpoints = np.zeros(2 * big_n, dtype=np.int64)
    fill_endpoints(endpoints, choices)
    src = np.arange(1, big_n + 1, dtype=np.int64)
    tgt = endpoints[1::2].copy()
    return _collapse(src, tgt, params.n, params.m, params.meta())


def generate_one_connection(params: ProcessParams, rng: np.random.Generator) -> LcdGraph:
    """The m = 1 sequential process."""
    if params.m != 1:
        raise DomainError("one-connection process requires m = 1")
    return generate_sequential(params, rng)


def generate_multi(params: ProcessParams, rng: np.random.Generator) -> LcdGraph:
    """Sequential process for any m; identical to generate_one_connection
    seed-for-seed when m = 1."""
    return generate_sequential(params, rng)


@dataclass
class UrnWeights:
    """Stick-breaking weights.

    ``alpha[0] = 1``; ``alpha[k-1] ~ Beta(m, (2k-3)m)`` for k >= 2.
    ``phi`` holds alpha_k * prod_{j>k}(1 - alpha_j), computed via a backward
    log-product and normalized so that sum(phi) = 1 (the attachment rule is
    invariant under this common rescaling); ``l`` is its running sum.
    """

    alpha: np.ndarray
    phi: np.ndarray
    l: np.ndarray

    @property
    def n(self) -> int:
        return int(self.alpha.size)


def build_urn_weights(n: int, m: int, rng: np.random.Generator) -> UrnWeights:
    if n < 1 or m < 1:
        raise DomainError("n and m must be >= 1")
    alpha = np.empty(n, dtype=np.float64)
    alpha[0] = 1.0
    if n > 1:
        ks = np.arange(2, n + 1, dtype=np.float64)
        alpha[1:] = rng.beta(m, (2.0 * ks - 3.0) * m)
    # log phi_k = log alpha_k + sum_{j>k} log(1 - alpha_j); linear-space
    # products underflow past n ~ 1e5
    log1m = np.log1p(-alpha[1:]) if n > 1 else np.empty(0)
    suffix = np.zeros(n, dtype=np.float64)
    if n > 1:
        suffix[:-1] = np.cumsum(log1m[::-1])[::-1]
    logphi = np.log(alpha) + suffix
    phi = np.exp(logphi - logphi.max())
    phi /= phi.sum()
    l = np.cumsum(phi)
    l[-1] = 1.0
    return UrnWeights(alpha, phi, l)


def kappa(w: UrnWeights, a: float) -> int:
    """Smallest vertex index k with l_k >= a (binary search, 1-indexed)."""
    if a < 0.0 or a > w.l[-1]:
        raise DomainError(f"a={a} outside [0, {w.l[-1]}]")
    return int(np.searchsorted(w.l, a, side="left")) + 1


def generate_urn(params: ProcessParams, rng: np.random.Generator) -> LcdGraph:
    n, m = params.n, params.m
    w = build_urn_weights(n, m, rng)
    src_parts = [np.ones(m, dtype=np.int64)]
    tgt_parts = [np.ones(m, dtype=np.int64)]  # alpha_1 = 1: vertex 1 loops
    if n > 1:
        u = rng.random((n - 1, m))
        a = u * w.l[: n - 1, None]  # vertex k scales by l_{k-1}
        tgt = np.searchsorted(w.l, a.ravel(), side="left").astype(np.int64) + 1
        src = np.repeat(np.arange(2, n + 1, dtype=np.int64), m)
        src_parts.append(src)
        tgt_parts.append(tgt)
    return LcdGraph(n, np.concatenate(src_parts), np.concatenate(tgt_parts), params.meta())


def generate_via_pairing(
    params: ProcessParams,
    rng: np.random.Generator,
    point_cap: int = PAIRING_POINT_CAP,
) -> LcdGraph:
    big_n = params.n * params.m
    if 2 * big_n > point_cap:
        raise CapacityError(f"2mn = {2 * big_n} points exceed the cap {point_cap}")
    partner = sample_partner_array(big_n, rng)
    g1 = graph_from_partner_array(partner)
    return _collapse(g1.src, g1.tgt, params.n, params.m, params.meta())


_GENERATORS = {
    "sequential": generate_sequential,
    "urn": generate_urn,
    "pairing": generate_via_pairing,
}


def generate(params: ProcessParams, replicate: int = 0) -> LcdGraph:
    """Generate one graph; replicates with distinct indices are independent."""
    rng = replicate_rng(params.master_seed, replicate)
    g = _GENERATORS[params.variant](params, rng)
    g.meta = dict(params.meta(), replicate=replicate)
    return g


# ---------------------------------------------------------------------------
# vectorized small-graph batches, used for distribution comparisons


def batch_total_degrees(
    variant: str, n: int, m: int, samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Total-degree sequences of many independent small graphs, one row per
    sample.  Intended for n*m small (distribution tests); memory is
    O(samples * n * m)."""
    if variant == "sequential":
        return _batch_sequential(n, m, samples, rng)
    if variant == "pairing":
        return _batch_pairing(n, m, samples, rng)
    if variant == "urn":
        return _batch_urn(n, m, samples, rng)
    raise DomainError(f"unknown variant {variant!r}")


def _primed_degrees_to_total(vertex_of_position: np.ndarray, n: int, m: int) -> np.ndarray:
    """Collapse per-position primed-vertex ids to total-degree sequences."""
    samples = vertex_of_position.shape[0]
    out = np.zeros((samples, n), dtype=np.int64)
    for v in range(1, n + 1):
        lo, hi = (v - 1) * m + 1, v * m
        out[:, v - 1] = ((vertex_of_position >= lo) & (vertex_of_position <= hi)).sum(axis=1)
    return out


def _batch_sequential(n, m, samples, rng):
    big_n = n * m
    endpoints = np.zeros((samples, 2 * big_n), dtype=np.int64)
    rows = np.arange(samples)
    for t in range(1, big_n + 1):
        endpoints[:, 2 * t - 2] = t
        r = rng.integers(0, 2 * t - 1, size=samples)
        endpoints[:, 2 * t - 1] = endpoints[rows, r]
    return _primed_degrees_to_total(endpoints, n, m)


def _batch_pairing(n, m, samples, rng):
    big_n = n * m
    two_n = 2 * big_n
    perm = rng.permuted(np.tile(np.arange(1, two_n + 1), (samples, 1)), axis=1)
    rows = np.arange(samples)[:, None]
    partner = np.zeros((samples, two_n + 1), dtype=np.int64)
    partner[rows, perm[:, 0::2]] = perm[:, 1::2]
    partner[rows, perm[:, 1::2]] = perm[:, 0::2]
    is_right = partner[:, 1:] < np.arange(1, two_n + 1)
    vertex = np.cumsum(is_right, axis=1) - is_right + 1
    return _primed_degrees_to_total(vertex, n, m)


def _batch_urn(n, m, samples, rng):
    alpha = np.empty((samples, n), dtype=np.float64)
    alpha[:, 0] = 1.0
    for k in range(2, n + 1):
        alpha[:, k - 1] = rng.beta(m, (2 * k - 3) * m, size=samples)
    log1m = np.log1p(-alpha[:, 1:])
    suffix = np.zeros((samples, n), dtype=np.float64)
    if n > 1:
        suffix[:, :-1] = np.cumsum(log1m[:, ::-1], axis=1)[:, ::-1]
    logphi = np.log(alpha) + suffix
    phi = np.exp(logphi - logphi.max(axis=1, keepdims=True))
    phi /= phi.sum(axis=1, keepdims=True)
    l = np.cumsum(phi, axis=1)
    indeg = np.zeros((samples, n), dtype=np.int64)
    indeg[:, 0] += m  # vertex 1's loops
    rows = np.arange(samples)
    for k in range(2, n + 1):
        u = rng.random((samples, m))
        a = u * l[:, k - 2 : k - 1]
        # kappa(a) = #{k': l_k' < a} + 1
        j = (l[:, None, : k - 1] < a[:, :, None]).sum(axis=2) + 1
        for i in range(m):
            np.add.at(indeg, (rows, j[:, i] - 1), 1)
    return indeg + m  # every vertex has out-degree m

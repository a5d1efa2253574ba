"""Desk-scale experiments: degree statistics, exponent fits, concentration,
asymptotic-sum surrogates and exact tiny-n law comparisons."""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DomainError, InsufficientDataError
from .lcd import enumerate_pairings, pairing_to_graph
from .oracles import cond_prob_degree
from .processes import ProcessParams, generate

DEGREE_MODES = ("in_degree", "out_degree", "total_degree")


@dataclass
class DegreeHistogram:
    """Degree -> vertex count for one graph, with run provenance."""

    mode: str
    counts: dict
    n: int
    m: int
    variant: str
    seed: int

    def total_vertices(self) -> int:
        return sum(self.counts.values())

    def fraction_at(self, degree: int) -> float:
        return self.counts.get(degree, 0) / self.n


def degree_histogram(g, mode: str) -> DegreeHistogram:
    if mode not in DEGREE_MODES:
        raise DomainError(f"unknown degree mode {mode!r}")
    degs = g.degrees_of(mode)
    values, counts = np.unique(degs, return_counts=True)
    meta = g.meta
    return DegreeHistogram(
        mode=mode,
        counts={int(v): int(c) for v, c in zip(values, counts)},
        n=g.n_vertices,
        m=meta.get("m", 0),
        variant=meta.get("variant", ""),
        seed=meta.get("seed", 0),
    )


@dataclass
class FractionResult:
    """Replicate-level fractions of vertices at one exact degree."""

    params: ProcessParams
    degree: int
    mode: str
    fractions: list
    mean: float
    std: float


def _replicate_fraction(params: ProcessParams, replicate: int, degree: int, mode: str) -> float:
    g = generate(params, replicate)
    return float(np.count_nonzero(g.degrees_of(mode) == degree)) / params.n


def empirical_fraction(
    params: ProcessParams,
    degree: int,
    mode: str = "total_degree",
    replicates: int = 50,
    threads: int = 1,
) -> FractionResult:
    """Mean and std over independent replicates of N(degree)/n."""
    if replicates < 2:
        raise DomainError("need at least 2 replicates")
    if mode not in DEGREE_MODES:
        raise DomainError(f"unknown degree mode {mode!r}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fracs = list(
                pool.map(
                    lambda r: _replicate_fraction(params, r, degree, mode),
                    range(replicates),
                )
            )
    else:
        fracs = [_replicate_fraction(params, r, degree, mode) for r in range(replicates)]
    arr = np.array(fracs)
    return FractionResult(
        params=params,
        degree=degree,
        mode=mode,
        fractions=fracs,
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)),
    )


@dataclass
class ExponentFit:
    gamma: float
    stderr: float
    n_bins: int
    window: tuple


def power_law_exponent(h: DegreeHistogram, d_lo: int, d_hi: int) -> ExponentFit:
    """Least-squares slope of log(count) vs log(degree) over [d_lo, d_hi],
    negated; zero-count bins are excluded."""
    ds = [d for d in range(d_lo, d_hi + 1) if h.counts.get(d, 0) > 0]
    if len(ds) < 5:
        raise InsufficientDataError(f"only {len(ds)} nonzero bins in [{d_lo}, {d_hi}]")
    x = np.log(np.array(ds, dtype=float))
    y = np.log(np.array([h.counts[d] for d in ds], dtype=float))
    (slope, intercept), cov = np.polyfit(x, y, 1, cov=True)
    return ExponentFit(
        gamma=float(-slope),
        stderr=float(math.sqrt(cov[0, 0])),
        n_bins=len(ds),
        window=(d_lo, d_hi),
    )


def hill_exponent(h: DegreeHistogram, d_min: int) -> float:
    """Hill-style maximum-likelihood tail exponent over degrees >= d_min,
    using the discrete-data continuity correction d_min - 1/2."""
    total = 0
    log_sum = 0.0
    for d, c in h.counts.items():
        if d >= d_min:
            total += c
            log_sum += c * math.log(d / (d_min - 0.5))
    if total < 5:
        raise InsufficientDataError(f"only {total} vertices with degree >= {d_min}")
    return 1.0 + total / log_sum


@dataclass
class ConcentrationResult:
    params: ProcessParams
    degree: int
    mode: str
    replicates: int
    threshold: float
    mean_count: float
    std_count: float
    exceedance_rate: float


def concentration_experiment(
    params: ProcessParams,
    d: int,
    replicates: int = 200,
    mode: str = "in_degree",
    threads: int = 1,
) -> ConcentrationResult:
    """Fraction of replicates whose vertex count at degree d deviates from
    the replicate grand mean by at least sqrt(n log n).

    The grand mean stands in for the unobservable expectation; documented
    in the report this feeds.
    """
    if replicates < 100:
        raise DomainError("need at least 100 replicates")

    def one(r: int) -> int:
        g = generate(params, r)
        return int(np.count_nonzero(g.degrees_of(mode) == d))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = np.array(list(pool.map(one, range(replicates))), dtype=float)
    else:
        counts = np.array([one(r) for r in range(replicates)], dtype=float)
    threshold = math.sqrt(params.n * math.log(params.n)) if params.n > 1 else 0.0
    mean = counts.mean()
    exceed = float(np.mean(np.abs(counts - mean) >= threshold)) if params.n > 1 else 0.0
    return ConcentrationResult(
        params=params,
        degree=d,
        mode=mode,
        replicates=replicates,
        threshold=threshold,
        mean_count=float(mean),
        std_count=float(counts.std(ddof=1)),
        exceedance_rate=exceed,
    )


@dataclass
class SumS1Result:
    value: float
    case: int
    claimed_order: float
    ratio: float
    k_lo: int
    k_hi: int
    alpha_eff: float


def sum_s1(n: int, d: int, beta: float, alpha: float | None = None) -> SumS1Result:
    """Direct evaluation of sum_{k=ceil(log^2 n)}^{M} sqrt(k/n)(1-sqrt(k/n))^d
    with M = floor(n^beta / log n), plus its asymptotic classification.

    Case 1 (beta <= 1-2a) and case 2 (beta > 1-2a, d < n^((1-beta)/2)) claim
    order n^(3b/2-1/2)/log^(3/2) n; case 3 (d >= n^((1-beta)/2)) claims
    O(n/d^3).  ``alpha`` defaults to log_n(d).
    """
    if n < 3 or d < 0 or not 0 < beta <= 1:
        raise DomainError("need n >= 3, d >= 0, beta in (0, 1]")
    log_n = math.log(n)
    k_lo = math.ceil(log_n**2)
    k_hi = math.floor(n**beta / log_n)
    if k_hi <= k_lo:
        raise DomainError(f"M = {k_hi} must exceed log^2 n = {k_lo}")
    alpha_eff = alpha if alpha is not None else (math.log(d) / log_n if d >= 2 else 0.0)
    k = np.arange(k_lo, k_hi + 1, dtype=np.float64)
    root = np.sqrt(k / n)
    value = float(np.sum(root * np.exp(d * np.log1p(-root))))
    d_split = n ** ((1.0 - beta) / 2.0)
    if beta <= 1.0 - 2.0 * alpha_eff:
        case = 1
    elif d < d_split:
        case = 2
    else:
        case = 3
    if case in (1, 2):
        claimed = n ** (1.5 * beta - 0.5) / log_n**1.5
    else:
        claimed = n / max(d, 1) ** 3
    return SumS1Result(
        value=value,
        case=case,
        claimed_order=claimed,
        ratio=value / claimed,
        k_lo=k_lo,
        k_hi=k_hi,
        alpha_eff=alpha_eff,
    )


@dataclass
class SumS2Result:
    m_threshold: int  # M = floor(n^beta / log n)
    bound_primary: float  # M^(d+1) / (2^d n^d)
    bound_final: float  # 2n / d^3


def sum_s2_bound(n: int, m: int, d: int, beta: float) -> SumS2Result:
    """The late-vertex tail bound chain: S2 <= M^(d+1)/(2^d n^d) <= 2n/d^3;
    both bounds are 0 when d > M (no vertex can accumulate d late links)."""
    if n < 3 or m < 1 or d < 1 or not 0 < beta <= 1:
        raise DomainError("need n >= 3, m >= 1, d >= 1, beta in (0, 1]")
    m_thr = math.floor(n**beta / math.log(n))
    if d > m_thr:
        return SumS2Result(m_thr, 0.0, 0.0)
    log_primary = (d + 1) * math.log(m_thr) - d * math.log(2.0) - d * math.log(n)
    return SumS2Result(m_thr, math.exp(log_primary), 2.0 * n / d**3)


@dataclass
class CorollaryResult:
    exponent: float
    m: int
    n_grid: list
    d_values: list
    fractions: list
    decreasing: bool


def corollary_experiment(
    n_grid,
    m: int,
    exponent: float,
    replicates: int = 8,
    master_seed: int = 0,
    mode: str = "in_degree",
) -> CorollaryResult:
    """Fraction of vertices at degree d = ceil(n^exponent) for each n in the
    grid, averaged over replicates; reports whether the sequence decreases."""
    n_grid = list(n_grid)
    if any(n < 10**3 for n in n_grid):
        raise DomainError("every n in the grid must be >= 10^3")
    d_values, fracs = [], []
    for n in n_grid:
        d = math.ceil(n**exponent)
        d_values.append(d)
        params = ProcessParams(n=n, m=m, variant="sequential", master_seed=master_seed)
        if d >= 2 * m * n:
            fracs.append(0.0)
            continue
        per = [
            float(np.count_nonzero(generate(params, r).degrees_of(mode) == d)) / n
            for r in range(replicates)
        ]
        fracs.append(float(np.mean(per)))
    decreasing = all(a > b for a, b in zip(fracs, fracs[1:]))
    return CorollaryResult(
        exponent=exponent,
        m=m,
        n_grid=n_grid,
        d_values=d_values,
        fractions=fracs,
        decreasing=decreasing,
    )


# ---------------------------------------------------------------------------
# exact tiny-n laws and distribution distances


def exact_sequential_law(n: int) -> dict:
    """Probability of every total-degree sequence under the one-edge-per-step
    process, by exhaustive branching with exact rational weights."""
    if n < 1:
        raise DomainError("n must be >= 1")
    law: dict = {}

    def rec(t: int, endpoints: tuple, weight: Fraction):
        if t > n:
            degs = [0] * n
            for e in endpoints:
                degs[e - 1] += 1
            key = tuple(degs)
            law[key] = law.get(key, Fraction(0)) + weight
            return
        base = endpoints + (t,)
        for r in range(2 * t - 1):
            rec(t + 1, base + (base[r],), weight / (2 * t - 1))

    rec(1, (), Fraction(1))
    return law


def exact_pairing_law(n: int) -> dict:
    """Probability of every total-degree sequence under uniform pairings."""
    law: dict = {}
    total = 0
    for p in enumerate_pairings(n):
        g = pairing_to_graph(p)
        key = tuple(int(x) for x in g.total_degrees)
        law[key] = law.get(key, 0) + 1
        total += 1
    return {k: Fraction(v, total) for k, v in law.items()}


def tv_distance(p: dict, q: dict) -> float:
    """Total-variation distance between two distributions over hashable
    outcomes given as outcome -> probability (or frequency) maps."""
    keys = set(p) | set(q)
    return 0.5 * float(sum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys))


def degree_rows_to_distribution(rows: np.ndarray) -> dict:
    """Empirical distribution of degree-sequence rows (samples, n)."""
    seqs, counts = np.unique(rows, axis=0, return_counts=True)
    total = rows.shape[0]
    return {tuple(int(x) for x in s): c / total for s, c in zip(seqs, counts)}


def cond_prob_discrepancy_table(n_max: int = 6) -> list:
    """Compare the closed-form conditional-degree expression against
    exhaustive enumeration for every feasible (n, k, s, d) cell.

    Each row: dict with the cell, the enumerated conditional probability of
    total degree d+1 for vertex k+1 given D_k = 2k+s, the formula value, and
    whether they agree exactly.  The formula is known to disagree on
    low-mass cells (chiefly d = 0) at small n.
    """
    rows = []
    for n in range(2, n_max + 1):
        by_cell: dict = {}
        by_cond: dict = {}
        for p in enumerate_pairings(n):
            g = pairing_to_graph(p)
            degs = g.total_degrees
            partial = 0
            for k in range(1, n):
                partial += int(degs[k - 1])
                s = partial - 2 * k
                d = int(degs[k]) - 1
                by_cond[(k, s)] = by_cond.get((k, s), 0) + 1
                by_cell[(k, s, d)] = by_cell.get((k, s, d), 0) + 1
        for k in range(1, n):
            for s in range(0, n - k + 1):
                denom = by_cond.get((k, s), 0)
                for d in range(0, n - k - s + 1):
                    if 2 * n - 2 * k - s - d - 1 < 0:
                        continue
                    formula = cond_prob_degree(n, k, s, d).value
                    enum = Fraction(by_cell.get((k, s, d), 0), denom) if denom else None
                    rows.append(
                        {
                            "n": n,
                            "k": k,
                            "s": s,
                            "d": d,
                            "enumerated": enum,
                            "formula": formula,
                            "match": enum is not None and enum == formula,
                        }
                    )
    return rows


# ---------------------------------------------------------------------------
# experiment reports


@dataclass
class ExperimentReport:
    """Serializable record of one experiment run."""

    name: str
    parameters: dict
    replicates: list = field(default_factory=list)  # list of flat dicts
    aggregates: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)  # {"name", "passed", "detail"}
    wall_clock_seconds: float = 0.0
    started_at: str = ""

    def add_verdict(self, name: str, passed: bool, detail: str = ""):
        self.verdicts.append({"name": name, "passed": bool(passed), "detail": detail})

    @property
    def all_passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_json(self, include_timing: bool = False) -> str:
        """Serialize the report.  Timing is excluded by default so that a
        replay with the same seed produces byte-identical files; the wall
        clock lives in the run manifest instead."""
        payload = {
            "name": self.name,
            "parameters": self.parameters,
            "replicates": self.replicates,
            "aggregates": self.aggregates,
            "verdicts": self.verdicts,
        }
        if include_timing:
            payload["wall_clock_seconds"] = self.wall_clock_seconds
            payload["started_at"] = self.started_at
        return json.dumps(payload, indent=2, sort_keys=True, default=str)

    def write_json(self, path, include_timing: bool = False) -> Path:
        path = Path(path)
        path.write_text(self.to_json(include_timing) + "\n")
        return path

    def write_csv(self, path) -> Path:
        """Flat per-replicate rows with a header row, for plotting."""
        path = Path(path)
        rows = self.replicates or [self.aggregates]
        fieldnames = sorted({k for row in rows for k in row})
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        return path


def timed_report(name: str, parameters: dict) -> ExperimentReport:
    return ExperimentReport(
        name=name,
        parameters=parameters,
        started_at=time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    )


def write_region_csv(vertices, path) -> Path:
    """Region corner points as an (alpha, beta) CSV for plotting."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "beta"])
        for a, b in vertices:
            writer.writerow([str(a), str(b)])
    return path

"""Exact feasibility analysis of linear inequality systems over (alpha, beta).

All arithmetic is over ``fractions.Fraction``; results such as sup alpha are
exact rationals, never floats.  Strict inequalities are closed when taking
the supremum and the result is flagged "not attained" when the optimum sits
on a strict boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DomainError, InfeasibleSystemError

_OPS = ("<", "<=", ">", ">=")


@dataclass(frozen=True)
class Inequality:
    """a*alpha + b*beta  op  c with rational coefficients."""

    a: Fraction
    b: Fraction
    op: str
    c: Fraction

    def __post_init__(self):
        if self.op not in _OPS:
            raise DomainError(f"unknown comparison {self.op!r}")

    @classmethod
    def make(cls, a, b, op, c) -> "Inequality":
        return cls(Fraction(a), Fraction(b), op, Fraction(c))

    def normalized(self) -> "Inequality":
        """Equivalent form with op in {<, <=}."""
        if self.op in ("<", "<="):
            return self
        return Inequality(-self.a, -self.b, "<" if self.op == ">" else "<=", -self.c)

    def closure(self) -> "Inequality":
        op = {"<": "<=", ">": ">="}.get(self.op, self.op)
        return Inequality(self.a, self.b, op, self.c)

    @property
    def strict(self) -> bool:
        return self.op in ("<", ">")

    def holds(self, alpha: Fraction, beta: Fraction) -> bool:
        lhs = self.a * alpha + self.b * beta
        if self.op == "<":
            return lhs < self.c
        if self.op == "<=":
            return lhs <= self.c
        if self.op == ">":
            return lhs > self.c
        return lhs >= self.c

    def __str__(self):
        return f"{self.a}*alpha + {self.b}*beta {self.op} {self.c}"


def parse_inequality(line: str) -> Inequality:
    """Parse "a b cmp c" meaning a*alpha + b*beta cmp c; a, b, c rational."""
    parts = line.split()
    if len(parts) != 4:
        raise DomainError(f"expected 'a b cmp c', got {line!r}")
    a, b, op, c = parts
    return Inequality.make(Fraction(a), Fraction(b), op, Fraction(c))


@dataclass(frozen=True)
class RegionSystem:
    """A conjunction of linear inequalities over (alpha, beta)."""

    inequalities: tuple
    label: str = ""

    def __post_init__(self):
        if not self.inequalities:
            raise DomainError("a region system needs at least one inequality")

    @classmethod
    def from_lines(cls, lines, label: str = "") -> "RegionSystem":
        ineqs = tuple(parse_inequality(ln) for ln in lines if ln.strip())
        return cls(ineqs, label)

    def closure(self) -> "RegionSystem":
        return RegionSystem(tuple(q.closure() for q in self.inequalities), self.label)

    def holds(self, alpha, beta) -> bool:
        alpha, beta = Fraction(alpha), Fraction(beta)
        return all(q.holds(alpha, beta) for q in self.inequalities)


@dataclass(frozen=True)
class RegionResult:
    """Outcome of the sup-alpha computation for one system."""

    label: str
    sup_alpha: Fraction
    attained: bool
    beta_interval: tuple  # (lo, hi) of feasible beta at alpha = sup (closure)
    witness_beta: Fraction
    vertices: tuple  # corner points of the closed region, CCW


def _interval_1d(bounds):
    """Intersect one-variable bounds given as normalized (coef, strict, c):
    coef*x (<|<=) c.  Returns (lo, lo_strict, hi, hi_strict) with None for
    an absent bound, or raises InfeasibleSystemError."""
    lo = hi = None
    lo_strict = hi_strict = False
    for coef, strict, c in bounds:
        if coef == 0:
            if c < 0 or (strict and c == 0):
                raise InfeasibleSystemError("constant inequality is false")
            continue
        val = c / coef
        if coef > 0:  # x <(=) val
            if hi is None or val < hi or (val == hi and strict):
                hi, hi_strict = val, strict
        else:  # x >(=) val
            if lo is None or val > lo or (val == lo and strict):
                lo, lo_strict = val, strict
    if lo is not None and hi is not None:
        if lo > hi or (lo == hi and (lo_strict or hi_strict)):
            raise InfeasibleSystemError("empty one-variable interval")
    return lo, lo_strict, hi, hi_strict


def _eliminate_beta(ineqs):
    """Fourier-Motzkin step: project the system onto alpha.

    Input inequalities are normalized to a*alpha + b*beta (<|<=) c.  Returns
    bounds on alpha as (coef, strict, c) triples meaning coef*alpha (<|<=) c.
    """
    uppers, lowers, pure = [], [], []
    for q in ineqs:
        q = q.normalized()
        if q.b == 0:
            pure.append((q.a, q.strict, q.c))
        elif q.b > 0:  # beta <=(<) (c - a*alpha)/b
            uppers.append(q)
        else:  # beta >=(>) (c - a*alpha)/b
            lowers.append(q)
    for lo in lowers:
        for up in uppers:
            # (c_lo - a_lo*alpha)/b_lo <= beta <= (c_up - a_up*alpha)/b_up
            # with b_lo < 0 < b_up; cross-multiplying by -b_lo*b_up > 0:
            a = up.a * (-lo.b) + lo.a * up.b
            c = up.c * (-lo.b) + lo.c * up.b
            pure.append((a, lo.strict or up.strict, c))
    return pure


def _beta_interval_at(ineqs, alpha: Fraction):
    """Feasible beta interval at a fixed alpha (normalized inequalities)."""
    bounds = []
    for q in ineqs:
        q = q.normalized()
        bounds.append((q.b, q.strict, q.c - q.a * alpha))
    return _interval_1d(bounds)


def region_max_alpha(sys: RegionSystem) -> RegionResult:
    """Exact sup of alpha over the region, with a witnessing beta.

    Strict inequalities are closed for the supremum; ``attained`` reports
    whether the original system reaches it.  Raises InfeasibleSystemError
    when even the closure is empty.
    """
    closed = [q.closure() for q in sys.inequalities]
    alpha_bounds = _eliminate_beta(closed)
    lo, _, hi, _ = _interval_1d(alpha_bounds)
    if hi is None:
        raise DomainError("alpha is unbounded above; no finite supremum")
    sup = hi
    if lo is not None and lo > sup:  # pragma: no cover - caught in _interval_1d
        raise InfeasibleSystemError("empty alpha interval")
    b_lo, _, b_hi, _ = _beta_interval_at(closed, sup)
    # pick a witnessing beta inside the closed interval at the supremum
    if b_lo is None and b_hi is None:
        witness = Fraction(0)
        interval = (None, None)
    else:
        lo_v = b_lo if b_lo is not None else b_hi
        hi_v = b_hi if b_hi is not None else b_lo
        witness = (lo_v + hi_v) / 2
        interval = (lo_v, hi_v)
    attained = sys.holds(sup, witness) or any(
        sys.holds(sup, b) for b in _candidate_betas(interval)
    )
    return RegionResult(
        label=sys.label,
        sup_alpha=sup,
        attained=attained,
        beta_interval=interval,
        witness_beta=witness,
        vertices=region_vertices(sys),
    )


def _candidate_betas(interval):
    lo, hi = interval
    if lo is None or hi is None:
        return []
    return [lo, hi, lo + (hi - lo) / 4, hi - (hi - lo) / 4]


def region_vertices(sys: RegionSystem) -> tuple:
    """Corner points of the closed region: pairwise boundary intersections
    that satisfy the closure, ordered counter-clockwise for plotting."""
    closed = [q.closure().normalized() for q in sys.inequalities]
    pts = set()
    for q1, q2 in combinations(closed, 2):
        det = q1.a * q2.b - q2.a * q1.b
        if det == 0:
            continue
        alpha = (q1.c * q2.b - q2.c * q1.b) / det
        beta = (q1.a * q2.c - q2.a * q1.c) / det
        if all(q.a * alpha + q.b * beta <= q.c for q in closed):
            pts.add((alpha, beta))
    if not pts:
        return ()
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return tuple(sorted(pts, key=lambda p: math.atan2(p[1] - cy, p[0] - cx)))


def feasible_along(sys: RegionSystem, point, direction) -> bool:
    """True when point + eps*direction satisfies every inequality (including
    strict ones) for all small enough eps > 0.  Exact arithmetic."""
    px, py = Fraction(point[0]), Fraction(point[1])
    dx, dy = Fraction(direction[0]), Fraction(direction[1])
    for q in sys.inequalities:
        qn = q.normalized()
        g0 = qn.a * px + qn.b * py - qn.c
        g1 = qn.a * dx + qn.b * dy
        # need g0 + eps*g1 < 0 (or <= 0) for small eps > 0
        if g0 < 0:
            continue
        if g0 == 0:
            if g1 < 0 or (g1 == 0 and not qn.strict):
                continue
        return False
    return True


# ---------------------------------------------------------------------------
# built-in systems

_BOX = [
    "1 0 >= 0",  # alpha >= 0
    "1 0 <= 1/3",  # alpha <= 1/3
    "0 1 >= 0",  # beta >= 0
    "0 1 <= 1",  # beta <= 1
]
_AZUMA = ["3 0 < 1/2"]  # 1 - 3*alpha > 1/2
_SHARED = [
    "-1 2 > 3/2",  # 2*beta - alpha > 3/2
    "-1 1 > 1/2",  # beta - alpha > 1/2
]


def _sys(label, extra):
    return RegionSystem.from_lines(_SHARED + extra + _BOX + _AZUMA, label)


BUILTIN_SYSTEMS = {
    # first theorem: shared pair, 3*alpha + beta <= 1, box, concentration cut
    "theorem1": _sys("theorem1", ["3 1 <= 1"]),
    # second theorem, early-vertex sum case splits
    "theorem2-case1": _sys("theorem2-case1", ["2 1 <= 1", "3 3/2 <= 3/2"]),
    "theorem2-case2": _sys("theorem2-case2", ["2 1 > 1", "3 3/2 <= 3/2"]),
    "theorem2-case3": _sys("theorem2-case3", ["2 1 > 1"]),
}

COMBINED_CASES = ("theorem2-case1", "theorem2-case2", "theorem2-case3")


def combined_max_alpha() -> RegionResult:
    """Sup alpha over the union of the three second-theorem case regions.

    The union is not convex, so each case is solved separately and the best
    achievable supremum is returned.  Cases whose closure is empty are
    skipped; strict-infeasible cases cannot attain their closure supremum.
    """
    best = None
    for name in COMBINED_CASES:
        try:
            res = region_max_alpha(BUILTIN_SYSTEMS[name])
        except InfeasibleSystemError:
            continue
        if best is None or res.sup_alpha > best.sup_alpha:
            best = res
    if best is None:
        raise InfeasibleSystemError("all case regions are empty")
    return RegionResult(
        label="combined",
        sup_alpha=best.sup_alpha,
        attained=best.attained,
        beta_interval=best.beta_interval,
        witness_beta=best.witness_beta,
        vertices=best.vertices,
    )


def resolve_system(name: str) -> RegionSystem:
    if name not in BUILTIN_SYSTEMS:
        raise DomainError(
            f"unknown system {name!r}; choose from {sorted(BUILTIN_SYSTEMS)} or 'combined'"
        )
    return BUILTIN_SYSTEMS[name]

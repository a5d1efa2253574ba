"""Closed-form combinatorial quantities for the m = 1 attachment process.

Every probability-valued operation runs in one of two numeric regimes:
exact arbitrary-precision rationals when the point count 2n is at most
``EXACT_CAP``, and log-gamma evaluation above it.  Exact results are
``fractions.Fraction``; log results carry log(p) as a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

EXACT_CAP = 4096  # threshold on 2n for the exact-rational regime


@lru_cache(maxsize=None)
def _fact(x: int) -> int:
    return math.factorial(x)


def double_factorial(x: int) -> int:
    """x!! over odd or even x, with the empty-product values (-1)!! = 0!! = 1."""
    if x < -1:
        raise DomainError(f"double factorial undefined for {x}")
    out = 1
    while x > 1:
        out *= x
        x -= 2
    return out


@dataclass(frozen=True)
class ExactProb:
    """A probability, either exact rational or as log(p).

    ``tag`` is "exact" (value is a non-negative Fraction) or "log" (value is
    a float holding the natural log).  Probability-law oracles keep values in
    [0,1]; the verbatim conditional-degree expression can exceed 1 at small
    n (a documented discrepancy), so only non-negativity is enforced here.
    """

    value: Fraction | float
    tag: str

    def __post_init__(self):
        if self.tag not in ("exact", "log"):
            raise DomainError(f"unknown representation tag {self.tag!r}")
        if self.tag == "exact" and self.value < 0:
            raise DomainError("exact probability must be non-negative")

    def as_float(self) -> float:
        return float(self.value) if self.tag == "exact" else math.exp(self.value)

    def format(self, digits: int = 15) -> str:
        if self.tag == "exact":
            return f"{self.value.numerator}/{self.value.denominator} (exact)"
        return f"exp({self.value:.{digits}g}) (log)"


@dataclass(frozen=True)
class DkQuery:
    """Ask for Pr[D_k = 2k+s]: degree sum of the first k vertices overshoots
    its 2k minimum by s."""

    n: int
    k: int
    s: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise DomainError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if not 0 <= self.s <= self.n - self.k:
            raise DomainError(f"need 0 <= s <= n-k = {self.n - self.k}, got s={self.s}")


def prob_dk(q: DkQuery) -> ExactProb:
    """Pr[D_k = 2k+s] for the m = 1 process on n vertices.

    Closed form: (2k+s-1)! (2n-2k-s)! n! 2^(s+1) /
    (s! (k-1)! (n-k-s)! (2n)!).
    """
    n, k, s = q.n, q.k, q.s
    if 2 * n <= EXACT_CAP:
        num = _fact(2 * k + s - 1) * _fact(2 * n - 2 * k - s) * _fact(n) * 2 ** (s + 1)
        den = _fact(s) * _fact(k - 1) * _fact(n - k - s) * _fact(2 * n)
        return ExactProb(Fraction(num, den), "exact")
    lg = math.lgamma
    logp = (
        lg(2 * k + s)
        + lg(2 * n - 2 * k - s + 1)
        + lg(n + 1)
        + (s + 1) * math.log(2.0)
        - lg(s + 1)
        - lg(k)
        - lg(n - k - s + 1)
        - lg(2 * n + 1)
    )
    return ExactProb(min(logp, 0.0), "log")


def count_ns(q: DkQuery) -> int:
    """N(s): the number of pairings of 2n points with D_k = 2k+s.

    Product of matching counts: s! choices interleaving the s extra chords,
    (2k+s-1)*C(2k+s-2, s) placements on the left block, (2k-3)!! matchings
    of the remaining left points, C(2n-2k-s, s) right attachment points and
    (2n-2k-2s-1)!! matchings of the remaining right points.  Satisfies
    prob_dk = N(s)/(2n-1)!! exactly.
    """
    n, k, s = q.n, q.k, q.s
    return (
        _fact(s)
        * (2 * k + s - 1)
        * math.comb(2 * k + s - 2, s)
        * double_factorial(2 * k - 3)
        * math.comb(2 * n - 2 * k - s, s)
        * double_factorial(2 * n - 2 * k - 2 * s - 1)
    )


def ratio_f(n: int, k: int, s: int) -> Fraction:
    """f(s) = Pr[D_k = 2k+s+1] / Pr[D_k = 2k+s], exactly.

    Equals 2(2k+s)(n-k-s) / ((s+1)(2n-2k-s)); strictly decreasing in s.
    """
    DkQuery(n, k, s)
    if s >= n - k:
        raise DomainError(f"ratio undefined at s = n-k = {n - k}")
    return Fraction(2 * (2 * k + s) * (n - k - s), (s + 1) * (2 * n - 2 * k - s))


def _root_terms(n: int, k: int):
    disc4 = 16 * k * n - 8 * n + 1  # 4 * (4kn - 2n + 1/4)
    if disc4 < 0:
        raise DomainError("negative discriminant")
    r = math.isqrt(disc4)
    return disc4, r


def mode_s01(n: int, k: int) -> int:
    """The s maximizing Pr[D_k = 2k+s], via the positive root of f(s) = 1:
    ceil(-2k + sqrt(4kn - 2n + 1/4) + 1/2), clamped to [0, n-k].

    Exact integer arithmetic (isqrt); the true argmax lies in
    {s01 - 1, s01} because of the ceiling.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    disc4, r = _root_terms(n, k)
    c = 1 - 4 * k
    # s01 = ceil((c + sqrt(disc4)) / 2) with sqrt irrational unless disc4 = r^2
    raw = (c + r + 1) // 2 if r * r == disc4 else (c + r) // 2 + 1
    return max(0, min(raw, n - k))


def mode_s02(n: int, k: int) -> int:
    """The negative root of f(s) = 1: ceil(-2k - sqrt(4kn - 2n + 1/4) + 1/2).

    Always indexes an infeasible s < 0 for valid inputs; returned unclamped.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    disc4, r = _root_terms(n, k)
    c = 1 - 4 * k
    return (c - r + 1) // 2 if r * r == disc4 else (c - r - 1) // 2 + 1


def tail_bound(n: int, l: int) -> float:
    """exp(-l(l-1)/(4n)): upper bound on Pr[D_k = 2k + s01 +/- l]."""
    if l < 0 or n < 1:
        raise DomainError("need l >= 0 and n >= 1")
    return math.exp(-l * (l - 1) / (4.0 * n))


def cond_prob_degree(n: int, k: int, s: int, d: int) -> ExactProb:
    """The closed-form expression for Pr[total degree of v_{k+1} is d+1
    given D_k = 2k+s]:

        2^d (s+d)! (n-k-s)! (2n-2k-s-d-1)! / ((n-k-s-d)! (2n-2k-s)!)

    Evaluated verbatim and NOT renormalized.  For d = 0 cells at small n it
    disagrees with exhaustive enumeration (and the sum over d can exceed 1);
    the comparison table lives in the analysis layer.
    """
    if not (1 <= k <= n and 0 <= s <= n - k):
        raise DomainError(f"invalid (n, k, s) = ({n}, {k}, {s})")
    if not 0 <= d <= n - k - s:
        raise DomainError(f"need 0 <= d <= n-k-s = {n - k - s}, got d={d}")
    if 2 * n - 2 * k - s - d - 1 < 0:
        raise DomainError("negative factorial argument")
    if 2 * n <= EXACT_CAP:
        num = 2**d * _fact(s + d) * _fact(n - k - s) * _fact(2 * n - 2 * k - s - d - 1)
        den = _fact(n - k - s - d) * _fact(2 * n - 2 * k - s)
        return ExactProb(Fraction(num, den), "exact")
    lg = math.lgamma
    logp = (
        d * math.log(2.0)
        + lg(s + d + 1)
        + lg(n - k - s + 1)
        + lg(2 * n - 2 * k - s - d)
        - lg(n - k - s - d + 1)
        - lg(2 * n - 2 * k - s + 1)
    )
    return ExactProb(logp, "log")


def expected_count(n: int, m: int, d: int) -> float:
    """Leading-term approximation to E[#vertices of total degree d+m]:
    2m(m+1)n / ((d+m)(d+m+1)(d+m+2)).  At m=1 this is 4n/((d+1)(d+2)(d+3))."""
    if n < 1 or m < 1 or d < 1:
        raise DomainError("need n, m, d >= 1")
    return 2.0 * m * (m + 1) * n / ((d + m) * (d + m + 1) * (d + m + 2))


def lemma2_approx(n: int, k: int, d: int) -> float:
    """Asymptotic Pr[total degree of v_{k+1} is d+1]:
    sqrt(k/n) * (1 - sqrt(k/n))^d.  Sums to 1 over d (geometric series)."""
    if not 1 <= k < n or d < 0:
        raise DomainError("need 1 <= k < n and d >= 0")
    q = math.sqrt(k / n)
    return q * (1.0 - q) ** d

"""Evaluation metrics and the two significance tests used to compare runs.

Accuracy and F1 follow the usual confusion-matrix definitions, with
zero-denominator precision/recall defined as 0 so a degenerate all-cover
classifier still yields a value. The Welch t-test computes its p-value
through an own regularized incomplete beta (Lentz continued fraction), and
the Mann-Whitney U test enumerates rank subsets exactly for small samples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

EXACT_LIMIT = 20  # full enumeration up to C(20, 10) subsets
_BETA_TOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_predictions(cls, predicted: list[bool], actual: list[bool]) -> "Confusion":
        tp = fp = tn = fn = 0
        for p, a in zip(predicted, actual, strict=True):
            if p and a:
                tp += 1
            elif p and not a:
                fp += 1
            elif not p and not a:
                tn += 1
            else:
                fn += 1
        return cls(tp=tp, fp=fp, tn=tn, fn=fn)


def acc_f1(c: Confusion) -> tuple[float, float]:
    """(accuracy, F1) with precision/recall falling back to 0 on empty cells."""
    if c.total == 0:
        raise ValueError("confusion matrix is empty")
    acc = (c.tp + c.tn) / c.total
    precision = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    recall = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return acc, f1


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_TOL:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def welch_t(a: list[float], b: list[float]) -> tuple[float, float]:
    """Two-sided Welch t-test; returns (t statistic, p-value)."""
    if len(a) < 2 or len(b) < 2:
        raise ValueError("welch_t requires at least 2 samples per group")
    na, nb = len(a), len(b)
    ma, mb = sum(a) / na, sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    sa, sb = va / na, vb / nb
    if sa + sb == 0.0:
        return 0.0, 1.0 if ma == mb else 0.0
    t = (ma - mb) / math.sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa**2 / (na - 1) + sb**2 / (nb - 1))
    p = betainc_regularized(df / 2.0, 0.5, df / (df + t * t))
    return t, min(1.0, max(0.0, p))


def _ranks(values: list[float]) -> list[float]:
    """Fractional ranks (ties get the mean of their rank span)."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for idx in order[i : j + 1]:
            ranks[idx] = mean_rank
        i = j + 1
    return ranks


def _u_min(rank_sum: float, n1: int, n2: int) -> float:
    u1 = rank_sum - n1 * (n1 + 1) / 2.0
    return min(u1, n1 * n2 - u1)


def mann_whitney_u(a: list[float], b: list[float]) -> tuple[float, float]:
    """Two-sided Mann-Whitney U; returns (U statistic, p-value).

    Exact by full enumeration of rank subsets when len(a)+len(b) <= 20
    (handles ties through averaged ranks), otherwise the tie-corrected
    normal approximation with continuity correction.
    """
    if not a or not b:
        raise ValueError("mann_whitney_u requires non-empty samples")
    n1, n2 = len(a), len(b)
    pooled = list(a) + list(b)
    ranks = _ranks(pooled)
    rank_sum_a = sum(ranks[:n1])
    u_obs = _u_min(rank_sum_a, n1, n2)

    if n1 + n2 <= EXACT_LIMIT:
        total = 0
        extreme = 0
        for subset in itertools.combinations(range(n1 + n2), n1):
            total += 1
            if _u_min(sum(ranks[i] for i in subset), n1, n2) <= u_obs + 1e-12:
                extreme += 1
        return u_obs, extreme / total

    n = n1 + n2
    tie_counts: dict[float, int] = {}
    for v in pooled:
        tie_counts[v] = tie_counts.get(v, 0) + 1
    tie_term = sum(t**3 - t for t in tie_counts.values())
    mu = n1 * n2 / 2.0
    sigma_sq = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if sigma_sq <= 0.0:
        return u_obs, 1.0
    z = (u_obs - mu + 0.5) / math.sqrt(sigma_sq)
    p = 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)) if z < 0 else 1.0
    return u_obs, min(1.0, p)


def aggregate(values: list[float]) -> tuple[float, float]:
    """(mean, sample standard deviation); std is 0 for a single value."""
    if not values:
        raise ValueError("aggregate requires at least one value")
    n = len(values)
    mean = sum(values) / n
    if n == 1:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)

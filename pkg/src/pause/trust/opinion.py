"""Subjective-logic opinions and their fusion operators.

An opinion generalizes a probability with explicit uncertainty:
    (b, d, u, a) with b + d + u = 1, all in [0, 1]
    expected probability E = b + a * u

Three operators:

    discount(X, t):  b' = t*b, d' = t*d, u' = 1 - t*(b + d), a' = a
        Lower trust pushes an opinion toward vacuous.

    cumulative fusion (independent evidence; uncertainty decreases):
        k = uA + uB - uA*uB
        b = (bA*uB + bB*uA) / k,  d likewise,  u = uA*uB / k
        Vacuous is the identity; dogmatic corner falls back to the mean.

    averaging fusion (dependent or duplicated evidence; idempotent):
        b = (bA*uB + bB*uA) / (uA + uB),  u = 2*uA*uB / (uA + uB)

Both fusions are the image of Beta-evidence arithmetic: with evidence
(r, s) = (2b/u, 2d/u), cumulative fusion adds evidence and averaging fusion
averages it. The n-ary helpers below work in that evidence space directly so
folding order cannot matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from pause.errors import BaseRateMismatch, DomainError, InvariantViolation

TOLERANCE = 1e-9


@dataclass(frozen=True)
class Opinion:
    """A (belief, disbelief, uncertainty, base-rate) tuple."""

    b: float
    d: float
    u: float
    a: float = 0.5

    def __post_init__(self):
        for name, value in (("b", self.b), ("d", self.d), ("u", self.u), ("a", self.a)):
            if not (-TOLERANCE <= value <= 1.0 + TOLERANCE) or math.isnan(value):
                raise InvariantViolation(name, f"{value!r} outside [0, 1]")
        total = self.b + self.d + self.u
        if abs(total - 1.0) > TOLERANCE:
            raise InvariantViolation("b+d+u", f"sums to {total!r}, expected 1")

    @classmethod
    def vacuous(cls, a: float = 0.5) -> "Opinion":
        return cls(0.0, 0.0, 1.0, a)

    @classmethod
    def assertion(cls, a: float = 0.5) -> "Opinion":
        """Full-belief assertion: the opinion a report states on its own."""
        return cls(1.0, 0.0, 0.0, a)

    @classmethod
    def from_evidence(cls, r: float, s: float, a: float = 0.5) -> "Opinion":
        """Map Beta evidence counts (r correct, s incorrect) to an opinion."""
        if r < 0 or s < 0:
            raise DomainError(f"evidence counts must be non-negative, got ({r}, {s})")
        w = r + s + 2.0
        return cls(r / w, s / w, 2.0 / w, a)

    @property
    def expectation(self) -> float:
        """E = b + a*u, the projected probability."""
        return self.b + self.a * self.u

    def approx_equals(self, other: "Opinion", tol: float = TOLERANCE) -> bool:
        return (
            abs(self.b - other.b) <= tol
            and abs(self.d - other.d) <= tol
            and abs(self.u - other.u) <= tol
            and abs(self.a - other.a) <= tol
        )


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


def discount(opinion: Opinion, trust: float) -> Opinion:
    """Weaken an opinion by the trust placed in its source.

    trust 1 is the identity; trust 0 yields the vacuous opinion.
    """
    if not 0.0 <= trust <= 1.0:
        raise DomainError(f"trust must be in [0, 1], got {trust!r}")
    if trust == 1.0:
        return opinion
    if trust == 0.0:
        return Opinion.vacuous(opinion.a)
    b = trust * opinion.b
    d = trust * opinion.d
    return Opinion(b=b, d=d, u=_clamp(1.0 - b - d), a=opinion.a)


def _check_base_rates(opinions: Sequence[Opinion]) -> float:
    base = opinions[0].a
    for other in opinions[1:]:
        if abs(other.a - base) > TOLERANCE:
            raise BaseRateMismatch(
                f"opinions on one hypothesis must share a base rate: {base} vs {other.a}"
            )
    return base


def _mean(opinions: Sequence[Opinion], a: float) -> Opinion:
    n = len(opinions)
    return Opinion(
        b=_clamp(sum(o.b for o in opinions) / n),
        d=_clamp(sum(o.d for o in opinions) / n),
        u=_clamp(sum(o.u for o in opinions) / n),
        a=a,
    )


def fuse_cumulative(first: Opinion, second: Opinion) -> Opinion:
    """Fuse two independent opinions; corroboration reduces uncertainty."""
    a = _check_base_rates((first, second))
    k = first.u + second.u - first.u * second.u
    if k == 0.0:  # both dogmatic
        return _mean((first, second), a)
    b = (first.b * second.u + second.b * first.u) / k
    d = (first.d * second.u + second.d * first.u) / k
    u = first.u * second.u / k
    return Opinion(b=_clamp(b), d=_clamp(d), u=_clamp(u), a=a)


def fuse_averaging(first: Opinion, second: Opinion) -> Opinion:
    """Fuse two dependent opinions; idempotent, so duplicates add nothing."""
    a = _check_base_rates((first, second))
    denominator = first.u + second.u
    if denominator == 0.0:
        return _mean((first, second), a)
    b = (first.b * second.u + second.b * first.u) / denominator
    d = (first.d * second.u + second.d * first.u) / denominator
    u = 2.0 * first.u * second.u / denominator
    return Opinion(b=_clamp(b), d=_clamp(d), u=_clamp(u), a=a)


def fuse_averaging_many(opinions: Sequence[Opinion]) -> Opinion:
    """n-ary averaging fusion, order-free.

    Computed with 1/u weights (evidence-space mean):
        b = sum(b_i/u_i) / sum(1/u_i),  u = n / sum(1/u_i)
    Dogmatic inputs dominate in the limit, so if any are present the result
    is their component-wise mean.
    """
    if not opinions:
        raise DomainError("cannot fuse an empty set of opinions")
    a = _check_base_rates(opinions)
    if len(opinions) == 1:
        return opinions[0]
    dogmatic = [o for o in opinions if o.u == 0.0]
    if dogmatic:
        return _mean(dogmatic, a)
    weights = [1.0 / o.u for o in opinions]
    total = sum(weights)
    b = sum(w * o.b for w, o in zip(weights, opinions)) / total
    d = sum(w * o.d for w, o in zip(weights, opinions)) / total
    u = len(opinions) / total
    return Opinion(b=_clamp(b), d=_clamp(d), u=_clamp(u), a=a)


def fuse_cumulative_many(opinions: Sequence[Opinion]) -> Opinion:
    """n-ary cumulative fusion by left fold; associative, so order is moot."""
    if not opinions:
        raise DomainError("cannot fuse an empty set of opinions")
    fused = opinions[0]
    for other in opinions[1:]:
        fused = fuse_cumulative(fused, other)
    return fused

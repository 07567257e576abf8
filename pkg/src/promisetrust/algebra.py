"""Trust as the expectation that a promise is kept, and its composition over
bundles of parallel promises.

Composition follows fault-tree gate rules: AND multiplies, OR is
inclusion-exclusion, XOR and RANKED are convex combinations, NOT
complements.  AND over incompatible bodies is zero by definition; OR is
undefined for them.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import AllWeightsZero, IncompatibleOr, NotInScope, OutOfRange, WeightsNotConvex
from .expectation import CONVEX_TOL
from .promises import IncompatibilitySet, Promise, PromiseBody, BundleBody, is_incompatible


def _check_unit(value: float, what: str = "value") -> float:
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{what} {value} outside [0, 1]")
    return float(value)


@dataclass(frozen=True)
class TrustEdge:
    """``truster[truster_subject] -tau:body-> trustee[trustee_subject] = value``.

    For the usual case ``R -tau:b-> S`` the subjects equal the agents.
    """

    truster: str
    trustee: str
    body: PromiseBody | BundleBody
    value: float
    truster_subject: str | None = None
    trustee_subject: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", _check_unit(self.value, "trust"))
        if self.truster_subject is None:
            object.__setattr__(self, "truster_subject", self.truster)
        if self.trustee_subject is None:
            object.__setattr__(self, "trustee_subject", self.trustee)

    @property
    def ptype(self) -> str:
        return self.body.ptype


def trust_from_expectation(
    promise: Promise,
    expectation: float,
    truster: str | None = None,
    inferred: bool = False,
) -> TrustEdge:
    """Trust edge valuing ``promise`` at ``expectation``.

    By default the receiver values the sender's promise to it.  A truster
    outside the promise's scope must set ``inferred`` to claim indirect
    knowledge of it.
    """
    expectation = _check_unit(expectation, "expectation")
    truster = promise.receiver if truster is None else truster
    if not promise.knows(truster) and not inferred:
        raise NotInScope(f"{truster} has no knowledge of {promise}")
    subject = promise.receiver_subject if truster == promise.receiver else promise.receiver
    return TrustEdge(
        truster=truster,
        truster_subject=promise.sender_subject,
        trustee=promise.sender,
        trustee_subject=subject,
        body=promise.body,
        value=expectation,
    )


def compose_and(values: Sequence[float]) -> float:
    return math.prod(_check_unit(v) for v in values)


def compose_or(values: Sequence[float]) -> float:
    """Exact ``1 - prod(1 - E_i)``, folded as a probabilistic sum so that a
    single value passes through unchanged."""
    vals = [_check_unit(v) for v in values]
    if not vals:
        return 0.0
    acc = vals[0]
    for v in vals[1:]:
        acc = acc + v - acc * v
    return min(1.0, max(acc, max(vals)))


def compose_xor_weighted(pairs: Sequence[tuple[float, float]]) -> float:
    """``sum(e_i E_i) / sum(e_i)`` over alternatives with belief weights ``e_i``."""
    pairs = [(_check_unit(v), float(w)) for v, w in pairs]
    if any(w < 0 for _, w in pairs):
        raise WeightsNotConvex("XOR weights must be non-negative")
    total = math.fsum(w for _, w in pairs)
    if total <= 0:
        raise AllWeightsZero("XOR weights sum to zero")
    return _clamp(math.fsum(w * v for v, w in pairs) / total, pairs)


def compose_xor(values: Sequence[float], weights: Sequence[float] | None = None) -> float:
    """Weighted XOR; with no weights each alternative is weighted by its own
    expectation, giving ``sum(E_i**2) / sum(E_i)``."""
    if weights is None:
        weights = values
    if len(weights) != len(values):
        raise ValueError("one weight per value")
    return compose_xor_weighted(list(zip(values, weights)))


def compose_ranked(values: Sequence[float], weights: Sequence[float]) -> float:
    if len(weights) != len(values):
        raise ValueError("one weight per value")
    if not values:
        raise WeightsNotConvex("empty ranking")
    if any(w < 0 for w in weights) or abs(math.fsum(weights) - 1.0) > CONVEX_TOL:
        raise WeightsNotConvex(f"ranking weights {list(weights)} are not convex")
    vals = [_check_unit(v) for v in values]
    return _clamp(math.fsum(w * v for v, w in zip(vals, weights)), [(v, 0) for v in vals])


class Complement(float):
    """``1 - x`` that remembers ``x``, so negating twice gives ``x`` back
    exactly (plain float subtraction loses low bits for small ``x``)."""

    def __new__(cls, operand: float):
        obj = super().__new__(cls, 1.0 - operand)
        obj.operand = operand
        return obj

    def __repr__(self):
        return repr(float(self))


def compose_not(value: float) -> float:
    if isinstance(value, Complement):
        return value.operand
    return Complement(_check_unit(value))


def _clamp(x: float, pairs) -> float:
    # a convex combination cannot leave [min, max]; guard against rounding
    lo = min(v for v, _ in pairs)
    hi = max(v for v, _ in pairs)
    return min(hi, max(lo, x))


class Mode(enum.Enum):
    AND = "and"
    OR = "or"
    XOR = "xor"
    RANKED = "ranked"
    NOT = "not"


@dataclass(frozen=True)
class CompositionMode:
    """Gate plus optional weights (RANKED: convex; XOR: belief weights,
    default self-weights)."""

    mode: Mode
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if not isinstance(self.mode, Mode):
            object.__setattr__(self, "mode", Mode(self.mode))
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.mode is Mode.RANKED:
            w = self.weights
            if w is None or any(x < 0 for x in w) or abs(math.fsum(w) - 1.0) > CONVEX_TOL:
                raise WeightsNotConvex("RANKED needs convex weights")


def has_incompatible_pair(bodies: Sequence[PromiseBody], inc: IncompatibilitySet | None) -> bool:
    return any(
        is_incompatible(a, b, inc) for i, a in enumerate(bodies) for b in bodies[i + 1:]
    )


def compose(
    bundle: Sequence[tuple[PromiseBody, float]],
    mode: CompositionMode,
    inc: IncompatibilitySet | None = None,
) -> float:
    """Expectation of a bundle of parallel promises under ``mode``."""
    bodies = [b for b, _ in bundle]
    values = [_check_unit(v) for _, v in bundle]
    if not values:
        raise ValueError("empty bundle")
    m = mode.mode
    if m is Mode.NOT:
        if len(values) != 1:
            raise ValueError("NOT applies to a single promise")
        return compose_not(values[0])
    if m is Mode.AND:
        if has_incompatible_pair(bodies, inc):
            return 0.0
        return compose_and(values)
    if m is Mode.OR:
        if has_incompatible_pair(bodies, inc):
            raise IncompatibleOr("OR cannot combine incompatible promises")
        return compose_or(values)
    if m is Mode.XOR:
        return compose_xor(values, mode.weights)
    return compose_ranked(values, mode.weights)


def compose_report(
    bundle: Sequence[tuple[PromiseBody, float]],
    mode: CompositionMode,
    inc: IncompatibilitySet | None = None,
) -> dict:
    """Bundle expectation alongside the individual ones; whether to act on
    the bundle value is left to the caller's policy."""
    return {
        "bundle": compose(bundle, mode, inc),
        "individual": [v for _, v in bundle],
    }

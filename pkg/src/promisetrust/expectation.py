"""Expectation functions over kept / not-kept promise outcomes.

Covers frequentist estimates from an evidence ledger, pooling of ensembles
of different sizes, iterative Bayesian belief updates, policy priors for
agents without a track record and transference of evidence between promise
types.  Only binary outcomes are modelled.
"""

from __future__ import annotations

import math
from fractions import Fraction
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DegenerateLikelihoods,
    EmptyEnsemble,
    NoDonorEvidence,
    NoEvidence,
    WeightsNotConvex,
)

CONVEX_TOL = 1e-9


class EvidenceKey(NamedTuple):
    observer: str
    sender: str
    receiver: str
    ptype: str


@dataclass(frozen=True)
class Counts:
    kept: int = 0
    broken: int = 0

    def __post_init__(self):
        if self.kept < 0 or self.broken < 0:
            raise ValueError("outcome counts must be non-negative")

    @property
    def total(self) -> int:
        return self.kept + self.broken


class EvidenceLedger:
    """Per (observer, sender, receiver, type) counts of kept and broken promises.

    Single writer; hand readers a :meth:`snapshot`.
    """

    def __init__(self, entries: Mapping[EvidenceKey, Counts] | None = None):
        self._entries: dict[EvidenceKey, Counts] = {}
        for key, counts in (entries or {}).items():
            self._entries[EvidenceKey(*key)] = counts

    def __getitem__(self, key) -> Counts:
        return self._entries.get(EvidenceKey(*key), Counts())

    def __contains__(self, key) -> bool:
        return EvidenceKey(*key) in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def items(self):
        return self._entries.items()

    def __eq__(self, other):
        if not isinstance(other, EvidenceLedger):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return f"EvidenceLedger({self._entries!r})"

    def set(self, key, counts: Counts) -> "EvidenceLedger":
        self._entries[EvidenceKey(*key)] = counts
        return self

    def record(self, key, kept: bool) -> "EvidenceLedger":
        c = self[key]
        if kept:
            c = Counts(c.kept + 1, c.broken)
        else:
            c = Counts(c.kept, c.broken + 1)
        self._entries[EvidenceKey(*key)] = c
        return self

    def snapshot(self) -> "EvidenceLedger":
        return EvidenceLedger(dict(self._entries))

    def types_for(self, observer: str, sender: str, receiver: str) -> list[str]:
        return [k.ptype for k in self._entries if k[:3] == (observer, sender, receiver)]


def record_outcome(ledger: EvidenceLedger, key, kept: bool) -> EvidenceLedger:
    return ledger.record(key, kept)


@dataclass(frozen=True)
class BeliefState:
    probability: float
    weight: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"probability {self.probability} outside [0, 1]")
        if not self.weight > 0:
            raise ValueError("belief weight must be positive")


class PolicyPrior:
    """Initial trust in an agent with no record: trusting, neutral, untrusting
    or a custom probability."""

    _NAMED = {"trusting": 1.0, "neutral": 0.5, "untrusting": 0.0}

    def __init__(self, stance: str = "neutral", p: float | None = None):
        if stance == "custom":
            if p is None or not 0.0 <= p <= 1.0:
                raise ValueError("custom prior needs p in [0, 1]")
            self.value = float(p)
        elif stance in self._NAMED:
            self.value = self._NAMED[stance]
        else:
            raise ValueError(f"unknown prior stance {stance!r}")
        self.stance = stance

    @classmethod
    def custom(cls, p: float) -> "PolicyPrior":
        return cls("custom", p)

    @classmethod
    def parse(cls, text: str) -> "PolicyPrior":
        """``trusting``, ``neutral``, ``untrusting`` or a number in [0, 1]."""
        if text in cls._NAMED:
            return cls(text)
        return cls.custom(float(text))

    def __eq__(self, other):
        return isinstance(other, PolicyPrior) and (self.stance, self.value) == (other.stance, other.value)

    def __repr__(self):
        if self.stance == "custom":
            return f"PolicyPrior.custom({self.value})"
        return f"PolicyPrior({self.stance!r})"


TRUSTING = PolicyPrior("trusting")
NEUTRAL = PolicyPrior("neutral")
UNTRUSTING = PolicyPrior("untrusting")


def initialize_prior(policy: PolicyPrior) -> BeliefState:
    return BeliefState(policy.value, 1.0)


def frequentist_estimate(entry) -> float:
    """Fraction of observed promises that were kept."""
    n1, n0 = _counts(entry)
    if n1 + n0 == 0:
        raise NoEvidence("no outcomes recorded")
    return n1 / (n1 + n0)


def _counts(entry) -> tuple[int, int]:
    if isinstance(entry, Counts):
        return entry.kept, entry.broken
    n1, n0 = entry
    if n1 < 0 or n0 < 0:
        raise ValueError("outcome counts must be non-negative")
    return n1, n0


def damnation_policy(entry, prior: PolicyPrior = NEUTRAL) -> float:
    """Zero after a single broken promise, otherwise the usual estimate."""
    n1, n0 = _counts(entry)
    if n0 > 0:
        return 0.0
    if n1 == 0:
        return prior.value
    return 1.0


def combine_weighted(trials: Iterable[tuple[float, float]]) -> float:
    """Convex combination ``sum(alpha_i * p_i)``; weights must sum to one."""
    trials = list(trials)
    if not trials:
        raise EmptyEnsemble("nothing to combine")
    if any(a < 0 for _, a in trials):
        raise WeightsNotConvex("negative weight")
    if abs(math.fsum(a for _, a in trials) - 1.0) > CONVEX_TOL:
        raise WeightsNotConvex(f"weights sum to {math.fsum(a for _, a in trials)}, not 1")
    for p, _ in trials:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} outside [0, 1]")
    total = math.fsum(a * p for p, a in trials)
    return min(1.0, max(0.0, total))


def combine_ensembles(trials: Sequence[tuple[float, int]]) -> float:
    """Pool estimates from trials of known sizes, weighting by size.

    Equals the frequency over the pooled raw counts.
    """
    if not trials:
        raise EmptyEnsemble("no trials")
    if any(size <= 0 for _, size in trials):
        raise ValueError("trial sizes must be positive")
    total = math.fsum(size for _, size in trials)
    return combine_weighted([(p, size / total) for p, size in trials])


@dataclass(frozen=True)
class BayesHypothesis:
    """Belief ``p_h`` in trustworthiness with the test's two likelihoods:
    ``p_e_given_h`` (test positive because the agent is trustworthy) and
    ``p_e_given_not_h`` (positive for other reasons, e.g. trickery)."""

    p_h: float
    p_e_given_h: float
    p_e_given_not_h: float

    def __post_init__(self):
        for name in ("p_h", "p_e_given_h", "p_e_given_not_h"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")


def bayes_update(h: BayesHypothesis, positive: bool) -> BayesHypothesis:
    """One Bayes step; the posterior is fed back as the next prior.

    Negative evidence uses the complementary likelihoods.  If the evidence
    has zero probability under both hypotheses the input is returned
    unchanged with a :class:`DegenerateLikelihoods` warning.
    """
    if positive:
        like_h, like_not = h.p_e_given_h, h.p_e_given_not_h
    else:
        like_h, like_not = 1.0 - h.p_e_given_h, 1.0 - h.p_e_given_not_h
    # exact rational arithmetic, rounded once: no underflow, and the rounded
    # posterior is monotone in every input
    p = Fraction(h.p_h)
    for_h = Fraction(like_h) * p
    against = Fraction(like_not) * (1 - p)
    if for_h + against == 0:
        warnings.warn(DegenerateLikelihoods("evidence impossible under both hypotheses"), stacklevel=2)
        return h
    posterior = float(for_h / (for_h + against))
    return BayesHypothesis(posterior, h.p_e_given_h, h.p_e_given_not_h)


def bayes_replay(h: BayesHypothesis, outcomes: Iterable[bool]) -> BayesHypothesis:
    for positive in outcomes:
        h = bayes_update(h, positive)
    return h


def transfer_evidence(
    ledger: EvidenceLedger,
    observer: str,
    sender: str,
    receiver: str,
    target_type: str,
    mixture: Mapping[str, float],
) -> float:
    """Estimate an unobserved promise type from a weighted mix of other types.

    Donor types without evidence are dropped and the remaining weights
    renormalised.
    """
    if ledger[(observer, sender, receiver, target_type)].total > 0:
        raise ValueError(f"{target_type!r} has direct evidence; nothing to transfer")
    donors = []
    for ptype, w in mixture.items():
        if w < 0:
            raise WeightsNotConvex(f"negative mixture weight for {ptype!r}")
        counts = ledger[(observer, sender, receiver, ptype)]
        if counts.total > 0 and w > 0:
            donors.append((frequentist_estimate(counts), w))
    if not donors:
        raise NoDonorEvidence(f"no evidence for any of {sorted(mixture)}")
    total = math.fsum(w for _, w in donors)
    return combine_weighted([(p, w / total) for p, w in donors])


FALLBACK_ORDER = ("prior", "transfer", "neutral")


def estimate(
    ledger: EvidenceLedger,
    key,
    *,
    prior: PolicyPrior | None = None,
    mixture: Mapping[str, float] | None = None,
    damnation: bool = False,
    order: Sequence[str] = FALLBACK_ORDER,
) -> tuple[float, str]:
    """Expectation for ``key`` and the name of the rule that produced it.

    Direct evidence wins; otherwise the fallbacks are tried in ``order``.
    """
    key = EvidenceKey(*key)
    counts = ledger[key]
    if counts.total > 0:
        if damnation:
            return damnation_policy(counts), "damnation"
        return frequentist_estimate(counts), "evidence"
    for rule in order:
        if rule == "prior" and prior is not None:
            return prior.value, "prior"
        if rule == "transfer" and mixture:
            try:
                return transfer_evidence(ledger, *key[:3], key.ptype, mixture), "transfer"
            except NoDonorEvidence:
                continue
        if rule == "neutral":
            return NEUTRAL.value, "neutral"
        if rule not in FALLBACK_ORDER:
            raise ValueError(f"unknown fallback rule {rule!r}")
    raise NoEvidence(f"no evidence and no applicable fallback for {key}")


def pooled_estimate(ledger: EvidenceLedger, sender: str, receiver: str, ptype: str) -> float:
    """Pool every observer's record of one promise into a single estimate."""
    trials = [
        (frequentist_estimate(c), c.total)
        for k, c in ledger.items()
        if (k.sender, k.receiver, k.ptype) == (sender, receiver, ptype) and c.total > 0
    ]
    return combine_ensembles(trials)

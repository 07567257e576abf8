"""Trusted Third Party and Web of Trust expressed as promise graphs.

Each builder returns a :class:`Scenario`: the promises of the architecture
plus one trust edge per promise, in which the promise's receiver values it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import TrustEdge, compose_ranked, trust_from_expectation
from .errors import EmptyUserSet, EmptyValuations, SelfSigning
from .expectation import NEUTRAL, PolicyPrior, initialize_prior
from .promises import Polarity, Promise, PromiseBody

LEGITIMATE = "Legitimate"
VERIFICATION = "Verification"
IDENTITY = "Identity"
SIGNATURE = "Signature"


def _give(ptype: str) -> PromiseBody:
    return PromiseBody(ptype)


def _use(ptype: str) -> PromiseBody:
    return PromiseBody(ptype, polarity=Polarity.USE)


@dataclass(frozen=True)
class Scenario:
    name: str
    promises: tuple[Promise, ...]
    trust_edges: tuple[TrustEdge, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "promises", tuple(self.promises))
        object.__setattr__(self, "trust_edges", tuple(self.trust_edges))
        known = {(p.sender, p.receiver, p.body) for p in self.promises}
        for e in self.trust_edges:
            if (e.trustee, e.truster, e.body) not in known:
                raise ValueError(f"trust edge {e.truster} -> {e.trustee} values no promise in the scenario")

    @property
    def agents(self) -> tuple[str, ...]:
        seen = {}
        for p in self.promises:
            seen.setdefault(p.sender, None)
            seen.setdefault(p.receiver, None)
        return tuple(seen)

    def __add__(self, other: "Scenario") -> "Scenario":
        return Scenario(
            f"{self.name}+{other.name}",
            self.promises + other.promises,
            self.trust_edges + other.trust_edges,
        )


def build_ttp_scenario(
    users: Sequence[str],
    authority: str,
    registered: Iterable[str] | None = None,
    user_trust: float = 0.9,
    authority_trust: float = 0.5,
) -> Scenario:
    """Star of promises around a certificate authority.

    Every user receives legitimacy and verification from the authority and
    promises to use the verification.  Registered users (all, by default)
    also promise their identity, which the authority promises to use.
    ``user_trust`` is how far users trust the authority's promises and
    ``authority_trust`` how far the authority trusts the users'.
    """
    users = list(users)
    if not users:
        raise EmptyUserSet("a trusted third party needs users")
    if authority in users:
        raise ValueError("the authority cannot also be a user")
    registered = set(users if registered is None else registered)
    if not registered <= set(users):
        raise ValueError("registered users must be users")
    promises, edges = [], []

    def add(sender, receiver, body, value):
        p = Promise(sender, receiver, body)
        promises.append(p)
        edges.append(trust_from_expectation(p, value))

    for u in users:
        add(authority, u, _give(LEGITIMATE), user_trust)
        add(authority, u, _give(VERIFICATION), user_trust)
        add(u, authority, _use(VERIFICATION), authority_trust)
        if u in registered:
            add(u, authority, _give(IDENTITY), authority_trust)
            add(authority, u, _use(IDENTITY), user_trust)
    return Scenario(f"ttp:{authority}", tuple(promises), tuple(edges))


class WotCategory(enum.Enum):
    DEFINITELY = "definitely"
    SOMEWHAT = "somewhat"
    UNTRUSTWORTHY = "untrustworthy"
    UNKNOWN = "unknown"


CATEGORY_VALUES = {
    WotCategory.DEFINITELY: 1.0,
    WotCategory.SOMEWHAT: 0.6,
    WotCategory.UNTRUSTWORTHY: 0.0,
}


def wot_category_value(category: WotCategory | str, prior: PolicyPrior = NEUTRAL) -> float:
    """Numeric trust for a key-signing judgement; "unknown" falls back on the
    prior."""
    category = WotCategory(category)
    if category is WotCategory.UNKNOWN:
        return initialize_prior(prior).probability
    return CATEGORY_VALUES[category]


def build_wot_signing(
    owner: str,
    agent: str,
    agent_judgement: WotCategory | str = WotCategory.SOMEWHAT,
    owner_judgement: WotCategory | str = WotCategory.SOMEWHAT,
    prior: PolicyPrior = NEUTRAL,
) -> Scenario:
    """The four promises of one key signing between a credential's owner and
    another agent.

    The agent values the owner's identity promise by ``agent_judgement``;
    the owner values the agent's signature by ``owner_judgement``.
    """
    if owner == agent:
        raise SelfSigning(f"{owner} cannot sign its own credential")
    identity = Promise(owner, agent, _give(IDENTITY))
    use_identity = Promise(agent, owner, _use(IDENTITY))
    signature = Promise(agent, owner, _give(SIGNATURE))
    use_signature = Promise(owner, agent, _use(SIGNATURE))
    edges = (
        trust_from_expectation(identity, wot_category_value(agent_judgement, prior)),
        trust_from_expectation(signature, wot_category_value(owner_judgement, prior)),
    )
    return Scenario(
        f"wot:{owner}:{agent}", (identity, use_identity, signature, use_signature), edges
    )


def compose_wot(
    pairs: Sequence[tuple[str, str]],
    judgement: WotCategory | str = WotCategory.SOMEWHAT,
    prior: PolicyPrior = NEUTRAL,
) -> Scenario:
    """Union of several signings, one per ``(owner, agent)`` pair."""
    if not pairs:
        raise EmptyUserSet("no signings given")
    scenario = None
    for owner, agent in pairs:
        s = build_wot_signing(owner, agent, judgement, judgement, prior)
        scenario = s if scenario is None else scenario + s
    return Scenario("wot", scenario.promises, scenario.trust_edges)


def threshold_accept(values: Sequence[float], threshold: float) -> bool:
    """Accept a credential when the mean of the received valuations reaches
    the threshold (inclusive)."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must lie in [0, 1]")
    if not values:
        raise EmptyValuations("no valuations received")
    n = len(values)
    return compose_ranked(values, [1.0 / n] * n) >= threshold

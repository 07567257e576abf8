"""Reputation: trust valuations passed from agent to agent.

A relayed value is discounted by the recipient's trust in whoever relayed
it (the product policy).  No agent is obliged to adopt that policy, and the
value depends on the route it travelled, so nothing here pretends to be a
canonical recursive trust.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .algebra import _check_unit
from .errors import MissingRelayEdge, PathRepeat
from .expectation import BeliefState
from .promises import Promise, PromiseBody, check_agent_id


@dataclass(frozen=True)
class ReputationMessage:
    """``source`` tells ``recipient`` its value for ``about_sender -body->
    about_receiver``.  ``path`` runs from the original valuator to ``source``."""

    source: str
    recipient: str
    about_sender: str
    about_receiver: str
    body: PromiseBody
    value: float
    path: tuple[str, ...] = ()

    def __post_init__(self):
        for a in (self.source, self.recipient, self.about_sender, self.about_receiver):
            check_agent_id(a)
        object.__setattr__(self, "value", _check_unit(self.value, "reputation"))
        path = tuple(self.path) or (self.source,)
        if path[-1] != self.source:
            raise ValueError("reputation path must end at its source")
        if len(set(path)) != len(path):
            raise PathRepeat(f"path {path} visits an agent twice")
        if self.recipient in path:
            raise PathRepeat(f"{self.recipient} already relayed this reputation")
        object.__setattr__(self, "path", path)

    @property
    def origin(self) -> str:
        return self.path[0]

    @property
    def key(self) -> tuple:
        """Rumours are told apart by who first valued the promise."""
        return (self.origin, self.about_sender, self.about_receiver, self.body)


@dataclass(frozen=True)
class ReputationPolicy:
    w_new: float = 1.0
    w_old: float = 1.0

    def __post_init__(self):
        if not (self.w_new > 0 and self.w_old > 0):
            raise ValueError("reputation weights must be positive")


@dataclass(frozen=True)
class TrustPromiseRecord:
    """``promiser`` promises ``promisee`` to trust ``about`` at a declared level.

    Kept for the record only: no computation consumes these.
    """

    promiser: str
    promisee: str
    about: str
    declared_value: float

    def __post_init__(self):
        object.__setattr__(self, "declared_value", _check_unit(self.declared_value, "declared trust"))

    def as_promise(self) -> Promise:
        return Promise(
            self.promiser,
            self.promisee,
            PromiseBody("trust", repr(self.declared_value)),
            receiver_subject=self.about,
        )


def borrowed_trust(trust_in_source: float, msg: ReputationMessage | float) -> float:
    """Recipient's expectation of the original promise under the product policy."""
    value = msg.value if isinstance(msg, ReputationMessage) else msg
    return _check_unit(trust_in_source, "trust in source") * _check_unit(value)


def update_trust_with_reputation(
    current: BeliefState, reputation: float, policy: ReputationPolicy
) -> BeliefState:
    """Blend the old trust with reputation data, weighting each side."""
    reputation = _check_unit(reputation, "reputation")
    total = policy.w_new + policy.w_old
    p = (policy.w_new * reputation + policy.w_old * current.probability) / total
    lo, hi = sorted((reputation, current.probability))
    return BeliefState(min(hi, max(lo, p)), total)


def relay_chain(initial: float, chain_trusts: Sequence[float]) -> tuple[float, int]:
    """Discount ``initial`` once per hop; returns the value and the hop count."""
    v = _check_unit(initial)
    for t in chain_trusts:
        v = borrowed_trust(t, v)
    return v, len(chain_trusts)


def forward(msg: ReputationMessage, trust_in_source: float, next_recipient: str) -> ReputationMessage:
    """The recipient adopts the borrowed value and passes it on."""
    return ReputationMessage(
        source=msg.recipient,
        recipient=next_recipient,
        about_sender=msg.about_sender,
        about_receiver=msg.about_receiver,
        body=msg.body,
        value=borrowed_trust(trust_in_source, msg),
        path=msg.path + (msg.recipient,),
    )


def relay_along(
    relays: Mapping[tuple[str, str], float],
    path: Sequence[str],
    initial: float,
) -> tuple[float, int]:
    """Relay a value along ``path`` (valuator first).

    ``relays[(listener, teller)]`` is the listener's trust in the teller's
    relay promise; a hop without such an edge does not transmit anything.
    """
    if len(set(path)) != len(path):
        raise PathRepeat(f"path {list(path)} visits an agent twice")
    trusts = []
    for teller, listener in zip(path, path[1:]):
        try:
            trusts.append(relays[(listener, teller)])
        except KeyError:
            raise MissingRelayEdge(f"{teller} has no relay promise to {listener}") from None
    return relay_chain(initial, trusts)


def apply_distortion(msg: ReputationMessage, distortion: Mapping[str, float]) -> ReputationMessage:
    """Scale the value by the relayer's distortion factor (simulates lying),
    clamped to [0, 1]."""
    factor = distortion.get(msg.source, 1.0)
    if factor < 0:
        raise ValueError("distortion factors must be non-negative")
    return replace(msg, value=min(1.0, max(0.0, msg.value * factor)))


class ReputationInbox:
    """Messages received by one agent, kept apart by originating valuator."""

    def __init__(self, owner: str, messages: Iterable[ReputationMessage] = ()):
        self.owner = owner
        self._arrivals: list[ReputationMessage] = []
        self._by_key: dict[tuple, list[ReputationMessage]] = {}
        for m in messages:
            self.receive(m)

    def receive(self, msg: ReputationMessage) -> None:
        if msg.recipient != self.owner:
            raise ValueError(f"message for {msg.recipient} delivered to {self.owner}")
        self._arrivals.append(msg)
        self._by_key.setdefault(msg.key, []).append(msg)

    def keys(self) -> list[tuple]:
        return list(self._by_key)

    def messages(self, key=None) -> list[ReputationMessage]:
        if key is None:
            return list(self._arrivals)
        return list(self._by_key.get(key, ()))

    def fold(
        self,
        prior: BeliefState,
        policy: ReputationPolicy,
        trust_in: Mapping[str, float],
        about: tuple[str, str, PromiseBody] | None = None,
    ) -> BeliefState:
        """Fold messages into ``prior`` in arrival order.

        Each message is first discounted by the owner's trust in its source
        (sources missing from ``trust_in`` are ignored).  ``about`` restricts
        to one (sender, receiver, body).
        """
        belief = prior
        for m in self.messages():
            if about is not None and (m.about_sender, m.about_receiver, m.body) != about:
                continue
            if m.source not in trust_in:
                continue
            belief = update_trust_with_reputation(belief, borrowed_trust(trust_in[m.source], m), policy)
        return belief

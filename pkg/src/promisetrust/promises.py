"""Agents, typed promise bodies, scoped promises and their basic algebra.

A promise ``S[T] -b-> R[U]`` is sent by ``S`` (acting for subject ``T``) to
``R`` (on behalf of beneficiary ``U``).  When the subjects are omitted they
default to the sender and receiver, which gives the ordinary local promise
``S -b-> R``.

Bodies are typed: the label ``ptype`` is what trust is measured against, the
optional ``constraint`` is an opaque quantitative attribute compared by
equality only.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from .errors import (
    ConditionalInBundle,
    EmptyBundle,
    MixedEndpoints,
    NoMatchingAssurance,
)

__all__ = [
    "Polarity",
    "PromiseBody",
    "BundleBody",
    "Promise",
    "IncompatibilitySet",
    "ValidationReport",
    "ASSERT_PREFIX",
    "check_agent_id",
    "negate_body",
    "assurance_body",
    "is_incompatible",
    "detect_conflicts",
    "compose_bundle",
    "discharge_conditional",
    "add_condition",
    "validate_promise",
    "influential",
    "format_body",
    "parse_body",
]

ASSERT_PREFIX = "assert:"

AGENT_RE = re.compile(r"[^\s\[\],={}|]+")
_TYPE_RE = re.compile(r"[^\s()\[\]{},|=!+\-#][^\s()\[\]{},|=#]*")
_CONSTRAINT_RE = re.compile(r"[^\s()\[\]{},|=#]*")
_BODY_RE = re.compile(
    r"(?P<neg>!?)(?P<pol>[+-]?)(?P<type>[^\s()\[\]{},|=#]+?)"
    r"(?:\((?P<con>[^\s()\[\]{},|=#]*)\))?"
)


def check_agent_id(name: str) -> str:
    if not isinstance(name, str) or not AGENT_RE.fullmatch(name):
        raise ValueError(f"invalid agent id {name!r}")
    return name


class Polarity(enum.Enum):
    """Give (+s, a service) or use (-s, written U(s)) or unmarked."""

    PLAIN = ""
    GIVE = "+"
    USE = "-"


_POLARITY_ORDER = {Polarity.PLAIN: 0, Polarity.GIVE: 1, Polarity.USE: 2}


@dataclass(frozen=True)
class PromiseBody:
    ptype: str
    constraint: str | None = None
    negated: bool = False
    polarity: Polarity = Polarity.PLAIN

    def __post_init__(self):
        if not isinstance(self.polarity, Polarity):
            object.__setattr__(self, "polarity", Polarity(self.polarity))
        if self.ptype.startswith(ASSERT_PREFIX):
            if self.constraint is not None:
                raise ValueError("assurance bodies carry no constraint")
            parse_body(self.ptype[len(ASSERT_PREFIX):])
        elif not _TYPE_RE.fullmatch(self.ptype):
            raise ValueError(f"invalid promise type {self.ptype!r}")
        if self.constraint is not None and not _CONSTRAINT_RE.fullmatch(self.constraint):
            raise ValueError(f"invalid constraint {self.constraint!r}")

    def sort_key(self):
        return (self.ptype, self.constraint or "", _POLARITY_ORDER[self.polarity], self.negated)

    def __str__(self):
        return format_body(self)


@dataclass(frozen=True)
class BundleBody:
    """Union of several bodies promised in parallel, kept in canonical order."""

    bodies: tuple[PromiseBody, ...]

    def __post_init__(self):
        if not self.bodies:
            raise EmptyBundle("a bundle needs at least one body")
        canon = tuple(sorted(set(self.bodies), key=PromiseBody.sort_key))
        object.__setattr__(self, "bodies", canon)

    def __iter__(self):
        return iter(self.bodies)

    def __len__(self):
        return len(self.bodies)

    def __str__(self):
        return format_body(self)


Body = Union[PromiseBody, BundleBody]


@dataclass(frozen=True)
class Promise:
    """``sender[sender_subject] -body|condition-> receiver[receiver_subject]``."""

    sender: str
    receiver: str
    body: Body
    sender_subject: str | None = None
    receiver_subject: str | None = None
    condition: PromiseBody | None = None
    scope: frozenset[str] | None = None

    def __post_init__(self):
        for name in (self.sender, self.receiver):
            check_agent_id(name)
        if self.sender_subject is None:
            object.__setattr__(self, "sender_subject", self.sender)
        if self.receiver_subject is None:
            object.__setattr__(self, "receiver_subject", self.receiver)
        check_agent_id(self.sender_subject)
        check_agent_id(self.receiver_subject)
        scope = frozenset(self.scope or ()) | {self.sender, self.receiver}
        for name in scope:
            check_agent_id(name)
        object.__setattr__(self, "scope", scope)

    @property
    def kind(self) -> int:
        """Notation kind 1..4: plain, obligation, indirection, general."""
        obliges = self.sender_subject != self.sender
        indirect = self.receiver_subject != self.receiver
        return {(False, False): 1, (True, False): 2, (False, True): 3, (True, True): 4}[
            (obliges, indirect)
        ]

    @property
    def endpoints(self) -> tuple[str, str, str, str]:
        return (self.sender, self.sender_subject, self.receiver, self.receiver_subject)

    @property
    def default_scope(self) -> bool:
        return self.scope == {self.sender, self.receiver}

    def knows(self, agent: str) -> bool:
        return agent in self.scope

    def __str__(self):
        s = self.sender if self.kind in (1, 3) else f"{self.sender}[{self.sender_subject}]"
        r = self.receiver if self.kind in (1, 2) else f"{self.receiver}[{self.receiver_subject}]"
        cond = f"|{format_body(self.condition)}" if self.condition is not None else ""
        return f"{s} -{format_body(self.body)}{cond}-> {r}"


class IncompatibilitySet:
    """Symmetric set of body pairs that cannot be realized together.

    ``b`` and its negation are always incompatible and need not be declared.
    """

    def __init__(self, pairs: Iterable[tuple[PromiseBody, PromiseBody]] = ()):
        found = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"a body cannot be incompatible with itself: {a}")
            found.add(frozenset((a, b)))
        self._pairs = frozenset(found)

    def __contains__(self, pair) -> bool:
        a, b = pair
        return frozenset((a, b)) in self._pairs

    def __iter__(self):
        for pair in sorted(self._pairs, key=lambda p: sorted(b.sort_key() for b in p)):
            yield tuple(sorted(pair, key=PromiseBody.sort_key))

    def __len__(self):
        return len(self._pairs)

    def __eq__(self, other):
        if not isinstance(other, IncompatibilitySet):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self):
        return hash(self._pairs)

    def __repr__(self):
        return f"IncompatibilitySet({list(self)!r})"

    def with_pair(self, a: PromiseBody, b: PromiseBody) -> "IncompatibilitySet":
        return IncompatibilitySet([*self, (a, b)])


def negate_body(b: PromiseBody) -> PromiseBody:
    return replace(b, negated=not b.negated)


def assurance_body(condition: PromiseBody) -> PromiseBody:
    """Body of the promise ``T(C)`` that condition ``C`` holds."""
    return PromiseBody(ASSERT_PREFIX + format_body(condition))


def _components(body: Body) -> tuple[PromiseBody, ...]:
    return body.bodies if isinstance(body, BundleBody) else (body,)


def is_incompatible(b1: PromiseBody, b2: PromiseBody, inc: IncompatibilitySet | None = None) -> bool:
    if b2 == negate_body(b1):
        return True
    return inc is not None and (b1, b2) in inc


def _bodies_conflict(x: Body, y: Body, inc) -> bool:
    return any(is_incompatible(a, b, inc) for a in _components(x) for b in _components(y))


def detect_conflicts(
    promises: Sequence[Promise], inc: IncompatibilitySet | None = None
) -> list[tuple[Promise, Promise]]:
    """Pairs of promises from the same sender to the same receiver with
    incompatible bodies, in input order."""
    conflicts = []
    for i, p in enumerate(promises):
        for q in promises[i + 1:]:
            if (p.sender, p.receiver) != (q.sender, q.receiver):
                continue
            if _bodies_conflict(p.body, q.body, inc):
                conflicts.append((p, q))
    return conflicts


def compose_bundle(promises: Sequence[Promise]) -> Promise:
    if not promises:
        raise EmptyBundle("cannot bundle an empty promise sequence")
    first = promises[0]
    bodies = []
    scope = set()
    for p in promises:
        if p.endpoints != first.endpoints:
            raise MixedEndpoints(f"{p} does not share endpoints with {first}")
        if p.condition is not None:
            raise ConditionalInBundle(f"conditional promise {p} cannot be bundled")
        bodies.extend(_components(p.body))
        scope |= p.scope
    return replace(first, body=BundleBody(tuple(bodies)), scope=frozenset(scope))


def discharge_conditional(p: Promise, assurance: Promise) -> Promise:
    """Combine ``b|C`` with a promise of ``T(C)`` into the unconditional ``b``."""
    if p.condition is None:
        raise NoMatchingAssurance(f"{p} is not conditional")
    if assurance.endpoints != p.endpoints:
        raise NoMatchingAssurance("assurance is not between the same agents")
    if assurance.condition is not None or assurance.body != assurance_body(p.condition):
        raise NoMatchingAssurance(f"assurance does not promise T({format_body(p.condition)})")
    return replace(p, condition=None)


def add_condition(p: Promise, condition: PromiseBody) -> Promise:
    return replace(p, condition=condition)


@dataclass(frozen=True)
class ValidationReport:
    promise: Promise
    flags: tuple[str, ...] = field(default=())

    @property
    def valid(self) -> bool:
        return not self.flags


def validate_promise(p: Promise, autonomous: Iterable[str]) -> ValidationReport:
    """Flag promises that try to oblige an autonomous third party.

    Kinds 2 and 4 (``S[T] -b-> ...`` with ``T != S``) have no influence on an
    autonomous ``T``.
    """
    flags = []
    if p.sender_subject != p.sender and p.sender_subject in set(autonomous):
        flags.append("invalid-obligation")
    return ValidationReport(p, tuple(flags))


def influential(promises: Iterable[Promise], autonomous: Iterable[str]) -> list[Promise]:
    autonomous = set(autonomous)
    return [p for p in promises if validate_promise(p, autonomous).valid]


def format_body(body: Body) -> str:
    if isinstance(body, BundleBody):
        return "{" + ",".join(format_body(b) for b in body.bodies) + "}"
    text = ("!" if body.negated else "") + body.polarity.value + body.ptype
    if body.constraint is not None:
        text += f"({body.constraint})"
    return text


def parse_body(text: str) -> Body:
    """Inverse of :func:`format_body`."""
    if text.startswith("{") and text.endswith("}"):
        inner = text[1:-1]
        parts = _split_bundle(inner)
        return BundleBody(tuple(_parse_single(part) for part in parts))
    return _parse_single(text)


def _split_bundle(inner: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    parts.append(inner[start:])
    return parts


def _parse_single(text: str) -> PromiseBody:
    neg = text.startswith("!")
    rest = text[1:] if neg else text
    polarity = Polarity.PLAIN
    if rest[:1] in ("+", "-"):
        polarity = Polarity(rest[0])
        rest = rest[1:]
    if rest.startswith(ASSERT_PREFIX):
        return PromiseBody(rest, None, neg, polarity)
    m = _BODY_RE.fullmatch(text)
    if m is None:
        raise ValueError(f"malformed promise body {text!r}")
    return PromiseBody(m["type"], m["con"], neg, polarity)

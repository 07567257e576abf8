"""Line-oriented ``.ptg`` graph files and DOT export.

One record per line, ``#`` starts a comment line::

    agent <id>
    incompatible <body> <body>
    promise <S>[<T>] -> <R>[<U>] : <body> [| <condition>] [scope=a,b,c]
    trust <A>[<B>] -> <C>[<D>] : <body> = <value>
    evidence <observer> <sender> <receiver> <type> kept=<n1> broken=<n0>
    reputation <source> -> <recipient> about <sender> <receiver> <body> value=<v> path=a,b,c

Bodies are written ``[!][+|-]type[(constraint)]``: ``!`` negates, ``+``
gives, ``-`` uses (``U(s)``), and ``{b1,b2}`` is a bundle.  Subjects in
brackets are optional.  Every agent must be declared before it is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .algebra import TrustEdge
from .errors import (
    DuplicateAgent,
    DuplicateRecord,
    GraphSyntaxError,
    TrustError,
    UndeclaredAgent,
)
from .expectation import Counts, EvidenceKey, EvidenceLedger
from .promises import (
    BundleBody,
    IncompatibilitySet,
    Promise,
    PromiseBody,
    check_agent_id,
    format_body,
    parse_body,
)
from .reputation import ReputationMessage

_ENDPOINT_RE = re.compile(r"(?P<name>[^\s\[\]]+?)(?:\[(?P<subj>[^\s\[\]]+)\])?")


@dataclass(eq=True)
class TrustGraph:
    agents: list[str] = field(default_factory=list)
    incompatibilities: IncompatibilitySet = field(default_factory=IncompatibilitySet)
    promises: list[Promise] = field(default_factory=list)
    trust_edges: list[TrustEdge] = field(default_factory=list)
    evidence: EvidenceLedger = field(default_factory=EvidenceLedger)
    reputations: list[ReputationMessage] = field(default_factory=list)

    def types(self) -> list[str]:
        seen = {}
        for e in self.trust_edges:
            if isinstance(e.body, PromiseBody):
                seen.setdefault(e.body.ptype, None)
        return list(seen)


class _Line:
    """Tokens of one line with their 1-based columns, for error reporting."""

    def __init__(self, number: int, text: str):
        self.number = number
        self.text = text
        self.tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]
        self.pos = 0

    def error(self, cls, message, col=None):
        if col is None:
            col = self.tokens[self.pos][1] if self.pos < len(self.tokens) else len(self.text) + 1
        return cls(message, self.number, col)

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def next(self, what: str) -> tuple[str, int]:
        if self.pos >= len(self.tokens):
            raise self.error(GraphSyntaxError, f"expected {what}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, literal: str):
        tok, col = self.next(repr(literal))
        if tok != literal:
            raise self.error(GraphSyntaxError, f"expected {literal!r}, got {tok!r}", col)

    def done(self):
        if self.pos < len(self.tokens):
            raise self.error(GraphSyntaxError, f"unexpected {self.tokens[self.pos][0]!r}")


class _Parser:
    def __init__(self):
        self.g = TrustGraph()
        self.declared: set[str] = set()
        self.inc_pairs = []

    def agent(self, line: _Line, name: str, col: int) -> str:
        if name not in self.declared:
            raise line.error(UndeclaredAgent, f"agent {name!r} used before declaration", col)
        return name

    def endpoint(self, line: _Line) -> tuple[str, str | None]:
        tok, col = line.next("agent")
        m = _ENDPOINT_RE.fullmatch(tok)
        if m is None:
            raise line.error(GraphSyntaxError, f"malformed endpoint {tok!r}", col)
        name = self.agent(line, m["name"], col)
        subj = m["subj"]
        if subj is not None:
            self.agent(line, subj, col + len(m["name"]) + 1)
        return name, subj

    def body(self, line: _Line, what="promise body"):
        tok, col = line.next(what)
        try:
            return parse_body(tok)
        except ValueError as exc:
            raise line.error(GraphSyntaxError, str(exc), col) from None

    def keyvalue(self, line: _Line, key: str) -> tuple[str, int]:
        tok, col = line.next(f"{key}=")
        if not tok.startswith(key + "="):
            raise line.error(GraphSyntaxError, f"expected {key}=..., got {tok!r}", col)
        return tok[len(key) + 1:], col

    def number(self, line: _Line, text: str, col: int, kind=float):
        try:
            return kind(text)
        except ValueError:
            raise line.error(GraphSyntaxError, f"bad number {text!r}", col) from None

    def agent_list(self, line: _Line, text: str, col: int) -> list[str]:
        names = [t for t in text.split(",") if t] if text else []
        return [self.agent(line, n, col) for n in names]

    # records

    def rec_agent(self, line: _Line):
        name, col = line.next("agent id")
        line.done()
        try:
            check_agent_id(name)
        except ValueError as exc:
            raise line.error(GraphSyntaxError, str(exc), col) from None
        if name in self.declared:
            raise line.error(DuplicateAgent, f"agent {name!r} declared twice", col)
        self.declared.add(name)
        self.g.agents.append(name)

    def rec_incompatible(self, line: _Line):
        a = self.body(line)
        b = self.body(line)
        line.done()
        if isinstance(a, BundleBody) or isinstance(b, BundleBody):
            raise line.error(GraphSyntaxError, "bundles cannot be declared incompatible")
        self.inc_pairs.append((a, b))

    def rec_promise(self, line: _Line):
        s, ss = self.endpoint(line)
        line.expect("->")
        r, rs = self.endpoint(line)
        line.expect(":")
        body = self.body(line)
        condition = None
        scope = None
        if line.peek() == "|":
            line.next("|")
            condition = self.body(line, "condition")
        if line.peek() is not None and line.peek().startswith("scope="):
            text, col = self.keyvalue(line, "scope")
            scope = frozenset(self.agent_list(line, text, col))
        line.done()
        self.g.promises.append(Promise(s, r, body, ss, rs, condition, scope))

    def rec_trust(self, line: _Line):
        a, asub = self.endpoint(line)
        line.expect("->")
        b, bsub = self.endpoint(line)
        line.expect(":")
        body = self.body(line)
        line.expect("=")
        tok, col = line.next("trust value")
        value = self.number(line, tok, col)
        line.done()
        self.g.trust_edges.append(TrustEdge(a, b, body, value, asub, bsub))

    def rec_evidence(self, line: _Line):
        names = [self.agent(line, *line.next("agent")) for _ in range(3)]
        ptype, tcol = line.next("promise type")
        kept, kcol = self.keyvalue(line, "kept")
        broken, bcol = self.keyvalue(line, "broken")
        line.done()
        try:
            PromiseBody(ptype)
        except ValueError as exc:
            raise line.error(GraphSyntaxError, str(exc), tcol) from None
        key = EvidenceKey(*names, ptype)
        if key in self.g.evidence:
            raise line.error(DuplicateRecord, f"second evidence record for {tuple(key)}", tcol)
        counts = Counts(self.number(line, kept, kcol, int), self.number(line, broken, bcol, int))
        self.g.evidence.set(key, counts)

    def rec_reputation(self, line: _Line):
        source = self.agent(line, *line.next("source"))
        line.expect("->")
        recipient = self.agent(line, *line.next("recipient"))
        line.expect("about")
        s = self.agent(line, *line.next("sender"))
        r = self.agent(line, *line.next("receiver"))
        body = self.body(line)
        text, col = self.keyvalue(line, "value")
        value = self.number(line, text, col)
        path = ()
        if line.peek() is not None:
            ptext, pcol = self.keyvalue(line, "path")
            path = tuple(self.agent_list(line, ptext, pcol))
        line.done()
        self.g.reputations.append(ReputationMessage(source, recipient, s, r, body, value, path))


_RECORDS = {
    "agent": _Parser.rec_agent,
    "incompatible": _Parser.rec_incompatible,
    "promise": _Parser.rec_promise,
    "trust": _Parser.rec_trust,
    "evidence": _Parser.rec_evidence,
    "reputation": _Parser.rec_reputation,
}


def parse_graph(text: str) -> TrustGraph:
    """Parse a graph file; the first problem raises with its line and column."""
    p = _Parser()
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        line = _Line(number, raw)
        kind, col = line.next("record kind")
        handler = _RECORDS.get(kind)
        if handler is None:
            raise line.error(GraphSyntaxError, f"unknown record kind {kind!r}", col)
        try:
            handler(p, line)
        except TrustError as exc:
            if getattr(exc, "line", None) is not None:
                raise
            raise line.error(GraphSyntaxError, str(exc), col) from None
        except ValueError as exc:
            raise line.error(GraphSyntaxError, str(exc), col) from None
    p.g.incompatibilities = IncompatibilitySet(p.inc_pairs)
    return p.g


def _endpoint(name: str, subject: str | None) -> str:
    return name if subject in (None, name) else f"{name}[{subject}]"


def _num(x: float) -> str:
    return repr(float(x))


def format_promise(p: Promise) -> str:
    parts = [
        "promise",
        _endpoint(p.sender, p.sender_subject),
        "->",
        _endpoint(p.receiver, p.receiver_subject),
        ":",
        format_body(p.body),
    ]
    if p.condition is not None:
        parts += ["|", format_body(p.condition)]
    if not p.default_scope:
        parts.append("scope=" + ",".join(sorted(p.scope)))
    return " ".join(parts)


def format_trust(e: TrustEdge) -> str:
    return (
        f"trust {_endpoint(e.truster, e.truster_subject)} -> {_endpoint(e.trustee, e.trustee_subject)}"
        f" : {format_body(e.body)} = {_num(e.value)}"
    )


def format_reputation(m: ReputationMessage) -> str:
    return (
        f"reputation {m.source} -> {m.recipient} about {m.about_sender} {m.about_receiver}"
        f" {format_body(m.body)} value={_num(m.value)} path={','.join(m.path)}"
    )


def serialize_graph(g: TrustGraph) -> str:
    """Canonical text form; ``parse_graph(serialize_graph(g)) == g``."""
    lines = [f"agent {a}" for a in g.agents]
    lines += [f"incompatible {format_body(a)} {format_body(b)}" for a, b in g.incompatibilities]
    lines += [format_promise(p) for p in g.promises]
    lines += [format_trust(e) for e in g.trust_edges]
    lines += [
        f"evidence {k.observer} {k.sender} {k.receiver} {k.ptype} kept={c.kept} broken={c.broken}"
        for k, c in g.evidence.items()
    ]
    lines += [format_reputation(m) for m in g.reputations]
    return "\n".join(lines) + ("\n" if lines else "")


def graph_from_scenario(scenario) -> TrustGraph:
    return TrustGraph(
        agents=list(scenario.agents),
        promises=list(scenario.promises),
        trust_edges=list(scenario.trust_edges),
    )


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: TrustGraph, name: str = "trust") -> str:
    """Promise arrows are dashed and labelled ``π:body``; trust arrows are
    solid, labelled ``τ:type=value`` and weighted by the value."""
    out = [f"digraph {_q(name)} {{"]
    for a in g.agents:
        out.append(f"  {_q(a)};")
    for p in g.promises:
        label = "π:" + format_body(p.body)
        if p.condition is not None:
            label += "|" + format_body(p.condition)
        out.append(f"  {_q(p.sender)} -> {_q(p.receiver)} [label={_q(label)}, style=dashed];")
    for e in g.trust_edges:
        label = f"τ:{format_body(e.body)}={e.value:.6g}"
        out.append(f"  {_q(e.truster)} -> {_q(e.trustee)} [label={_q(label)}, weight={e.value:.6g}];")
    out.append("}")
    return "\n".join(out) + "\n"

"""``promisetrust`` command line tool.

Subcommands: validate, trust, compose, community, reputation, scenario,
export-dot.  Exit status is 0 on success, 1 on a domain error and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .algebra import CompositionMode, Mode, compose, trust_from_expectation
from .architectures import (
    WotCategory,
    build_ttp_scenario,
    compose_wot,
    threshold_accept,
    wot_category_value,
)
from .community import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    build_matrix,
    community_trust,
    dense_eigen_oracle,
    remove_agent,
)
from .errors import TrustError
from .expectation import (
    FALLBACK_ORDER,
    BayesHypothesis,
    PolicyPrior,
    bayes_replay,
    initialize_prior,
    estimate,
    pooled_estimate,
    record_outcome,
)
from .graphfile import graph_from_scenario, parse_graph, serialize_graph, to_dot
from .promises import (
    IncompatibilitySet,
    Promise,
    PromiseBody,
    assurance_body,
    compose_bundle,
    detect_conflicts,
    discharge_conditional,
    format_body,
    parse_body,
    validate_promise,
)
from .reputation import (
    ReputationInbox,
    ReputationPolicy,
    apply_distortion,
    relay_along,
    relay_chain,
)


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _names(text: str) -> list[str]:
    return [x for x in text.split(",") if x]


def _assignments(text: str) -> dict[str, float]:
    out = {}
    for item in _names(text):
        name, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=value, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad number in {item!r}") from None
    return out


def _prior(text: str) -> PolicyPrior:
    try:
        return PolicyPrior.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x: float, digits: int | None) -> str:
    if digits is None:
        return f"{x:.6g}"
    return f"{x:.{digits}f}"


def _load(path: str):
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# subcommands


def cmd_validate(args) -> int:
    g = _load(args.input)
    autonomous = set(g.agents) if args.autonomous is None else set(args.autonomous)
    problems = 0
    for p in g.promises:
        report = validate_promise(p, autonomous)
        status = "ok" if report.valid else ",".join(report.flags)
        problems += not report.valid
        print(f"{status}\t{p}")
    for a, b in detect_conflicts(g.promises, g.incompatibilities):
        problems += 1
        print(f"conflict\t{a}\t{b}")
    by_endpoints = {}
    for p in g.promises:
        if p.condition is None:
            by_endpoints.setdefault(p.endpoints, []).append(p)
    for p in g.promises:
        if p.condition is None:
            continue
        wanted = assurance_body(p.condition)
        assurance = next(
            (q for q in by_endpoints.get(p.endpoints, []) if q.body == wanted), None
        )
        if assurance is not None:
            print(f"discharged\t{discharge_conditional(p, assurance)}")
        else:
            print(f"conditional\t{p}")
    if args.bundles:
        for group in by_endpoints.values():
            print(f"bundle\t{compose_bundle(group)}")
    return 1 if (args.strict and problems) else 0


def cmd_trust(args) -> int:
    g = _load(args.input)
    ledger = g.evidence
    key_parts = (args.observer, args.sender, args.receiver, args.type)
    mixture = args.mixture or None
    if args.record:
        if None in key_parts:
            raise UsageError("--record needs --observer, --sender, --receiver and --type")
        for outcome in args.record:
            record_outcome(ledger, key_parts, outcome == "kept")
        if args.out:
            Path(args.out).write_text(serialize_graph(g), encoding="utf-8")
    if args.pool:
        if None in key_parts[1:]:
            raise UsageError("--pool needs --sender, --receiver and --type")
        print(f"pooled={_fmt(pooled_estimate(ledger, *key_parts[1:]), args.round)}")
        return 0
    if all(k is not None for k in key_parts):
        keys = [key_parts]
    elif any(k is not None for k in key_parts):
        raise UsageError("give all of --observer, --sender, --receiver, --type or none")
    else:
        keys = list(ledger)
    for key in keys:
        value, rule = estimate(
            ledger, key, prior=args.prior, mixture=mixture, damnation=args.damnation, order=args.fallback
        )
        counts = ledger[key]
        fields = [*key, f"kept={counts.kept}", f"broken={counts.broken}", f"expectation={_fmt(value, args.round)}", f"rule={rule}"]
        if args.bayes:
            p_h = args.prior.value if args.prior is not None else 0.5
            h = BayesHypothesis(p_h, *args.bayes)
            h = bayes_replay(h, [True] * counts.kept + [False] * counts.broken)
            fields.append(f"bayes={_fmt(h.p_h, args.round)}")
        if args.emit_edges:
            observer, sender, receiver, ptype = key
            promise = Promise(sender, receiver, PromiseBody(ptype))
            edge = trust_from_expectation(promise, value, truster=observer, inferred=True)
            print(f"trust {edge.truster} -> {edge.trustee} : {ptype} = {value!r}")
        else:
            print(" ".join(fields))
    return 0


def cmd_compose(args) -> int:
    values = args.values
    bodies = [parse_body(b) for b in args.bodies] if args.bodies else [PromiseBody(f"b{i + 1}") for i in range(len(values))]
    if len(bodies) != len(values):
        raise UsageError("--bodies and --values differ in length")
    inc = IncompatibilitySet()
    if args.incompatible:
        inc = IncompatibilitySet(
            (a, b) for i, a in enumerate(bodies) for b in bodies[i + 1:] if a != b
        )
    mode = CompositionMode(Mode(args.mode), tuple(args.weights) if args.weights else None)
    result = compose(list(zip(bodies, values)), mode, inc)
    print(_fmt(result, args.round))
    if args.report:
        for b, v in zip(bodies, values):
            print(f"{format_body(b)}={_fmt(v, args.round)}")
    return 0


def cmd_community(args) -> int:
    g = _load(args.input)
    m = build_matrix(g.trust_edges, g.agents, args.type)
    if args.remove:
        for agent in args.remove:
            m = remove_agent(m, agent)
    res = community_trust(m, args.tol, args.max_iter)
    width = max([len("agent")] + [len(a) for a in res.roster])
    print(f"{'agent':<{width}}  {'S':>10}  {'W':>10}")
    for agent, s, w in res.rows():
        print(f"{agent:<{width}}  {_fmt(s, args.round):>10}  {_fmt(w, args.round):>10}")
    if args.kv:
        for agent, s, w in res.rows():
            print(f"S.{agent}={_fmt(s, args.round)}")
            print(f"W.{agent}={_fmt(w, args.round)}")
        print(f"lambda_S={_fmt(res.eigenvalue_s, args.round)}")
        print(f"lambda_W={_fmt(res.eigenvalue_w, args.round)}")
        print(f"iterations={res.iterations}")
        print(f"converged={str(res.converged).lower()}")
        print(f"degenerate={str(res.degenerate).lower()}")
    if args.oracle:
        for name, vec, lam, mat in (
            ("S", res.trusting, res.eigenvalue_s, m.entries),
            ("W", res.trustworthy, res.eigenvalue_w, m.entries.T),
        ):
            ov, olam = dense_eigen_oracle(mat)
            print(f"oracle_{name}_vector_diff={abs(ov - vec).max(initial=0.0):.3g}")
            print(f"oracle_{name}_eigenvalue_diff={abs(olam - lam):.3g}")
    return 0


def cmd_reputation(args) -> int:
    if args.action == "relay":
        if args.chain is not None:
            value, hops = relay_chain(args.initial, args.chain)
        else:
            if not (args.input and args.path):
                raise UsageError("relay needs --chain, or --input with --path")
            g = _load(args.input)
            relays = {
                (e.truster, e.trustee): e.value
                for e in g.trust_edges
                if getattr(e.body, "ptype", None) == args.relay_type
            }
            value, hops = relay_along(relays, args.path, args.initial)
        print(f"value={_fmt(value, args.round)} hops={hops}")
        return 0
    g = _load(args.input)
    messages = [m for m in g.reputations if m.recipient == args.agent]
    if args.distort:
        messages = [apply_distortion(m, args.distort) for m in messages]
    inbox = ReputationInbox(args.agent, messages)
    about = None
    if args.about:
        s, r, body = args.about.split(",")
        about = (s, r, parse_body(body))
    trust_in = args.source_trust or {m.source: 1.0 for m in messages}
    belief = inbox.fold(
        initialize_prior(args.prior), ReputationPolicy(args.w_new, args.w_old), trust_in, about
    )
    print(f"trust={_fmt(belief.probability, args.round)} weight={_fmt(belief.weight, None)} messages={len(messages)}")
    return 0


def cmd_scenario(args) -> int:
    if args.kind == "accept":
        if args.categories:
            values = [wot_category_value(c, args.prior) for c in args.categories]
        else:
            values = args.values or []
        print("accept" if threshold_accept(values, args.threshold) else "reject")
        return 0
    if args.kind == "ttp":
        scenario = build_ttp_scenario(
            args.users, args.authority, args.registered, args.user_trust, args.authority_trust
        )
    else:
        pairs = []
        for item in args.pairs:
            owner, sep, agent = item.partition(":")
            if not sep:
                raise UsageError(f"expected owner:agent, got {item!r}")
            pairs.append((owner, agent))
        scenario = compose_wot(pairs, args.judgement, args.prior)
    _emit(serialize_graph(graph_from_scenario(scenario)), args.out)
    return 0


def cmd_export_dot(args) -> int:
    g = _load(args.input)
    _emit(to_dot(g, Path(args.input).stem), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promisetrust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def rounding(p):
        p.add_argument("--round", type=int, default=None, metavar="N", help="print N decimals instead of 6 significant digits")

    p = sub.add_parser("validate", help="check promises for obligations, conflicts and conditionals")
    p.add_argument("--input", required=True)
    p.add_argument("--autonomous", type=_names, default=None, help="autonomous agents (default: all declared)")
    p.add_argument("--bundles", action="store_true", help="also print the bundle of each sender/receiver pair")
    p.add_argument("--strict", action="store_true", help="exit 1 if anything is flagged")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("trust", help="expectations from recorded evidence")
    p.add_argument("--input", required=True)
    for name in ("observer", "sender", "receiver", "type"):
        p.add_argument(f"--{name}")
    p.add_argument("--prior", type=_prior, default=None)
    p.add_argument("--mixture", type=_assignments, default=None, help="donor types, e.g. deliver=0.5,pay=0.5")
    p.add_argument("--fallback", type=_names, default=list(FALLBACK_ORDER), help="order of prior,transfer,neutral")
    p.add_argument("--damnation", action="store_true", help="a single broken promise means zero trust")
    p.add_argument("--pool", action="store_true", help="pool all observers' evidence")
    p.add_argument("--bayes", type=_floats, default=None, metavar="PEH,PENOTH", help="replay evidence through Bayes updates")
    p.add_argument("--emit-edges", action="store_true", help="print trust records instead of a table")
    p.add_argument("--record", action="append", choices=["kept", "broken"], help="record an outcome first")
    p.add_argument("--out", help="write the updated graph here after --record")
    rounding(p)
    p.set_defaults(func=cmd_trust)

    p = sub.add_parser("compose", help="expectation of a bundle of parallel promises")
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--values", type=_floats, required=True)
    p.add_argument("--weights", type=_floats, default=None)
    p.add_argument("--bodies", type=lambda s: s.split(";"), default=None, help="bodies separated by ';'")
    p.add_argument("--incompatible", action="store_true", help="declare the bodies mutually incompatible")
    p.add_argument("--report", action="store_true", help="also print the individual expectations")
    rounding(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("community", help="trustingness and trustworthiness vectors")
    p.add_argument("--input", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--remove", action="append", help="drop an agent first (repeatable)")
    p.add_argument("--kv", action="store_true", help="append key=value lines")
    p.add_argument("--oracle", action="store_true", help="cross-check against the dense reference solver (N <= 12)")
    rounding(p)
    p.set_defaults(func=cmd_community)

    p = sub.add_parser("reputation", help="relay and fold reputation")
    p.add_argument("action", choices=["relay", "fold"])
    p.add_argument("--input")
    p.add_argument("--initial", type=float, default=1.0)
    p.add_argument("--chain", type=_floats, default=None, help="relay trusts, nearest the valuator first")
    p.add_argument("--path", type=_names, default=None, help="agents from valuator to final recipient")
    p.add_argument("--relay-type", default="reputation")
    p.add_argument("--agent", help="recipient whose inbox is folded")
    p.add_argument("--prior", type=_prior, default=PolicyPrior("neutral"))
    p.add_argument("--w-new", type=float, default=1.0)
    p.add_argument("--w-old", type=float, default=1.0)
    p.add_argument("--source-trust", type=_assignments, default=None)
    p.add_argument("--distort", type=_assignments, default=None)
    p.add_argument("--about", help="sender,receiver,body")
    rounding(p)
    p.set_defaults(func=cmd_reputation)

    p = sub.add_parser("scenario", help="build trust architecture graphs or test acceptance")
    p.add_argument("kind", choices=["ttp", "wot", "accept"])
    p.add_argument("--users", type=_names)
    p.add_argument("--authority")
    p.add_argument("--registered", type=_names, default=None)
    p.add_argument("--user-trust", type=float, default=0.9)
    p.add_argument("--authority-trust", type=float, default=0.5)
    p.add_argument("--pairs", type=_names)
    p.add_argument("--judgement", choices=[c.value for c in WotCategory], default="somewhat")
    p.add_argument("--prior", type=_prior, default=PolicyPrior("neutral"))
    p.add_argument("--values", type=_floats)
    p.add_argument("--categories", type=_names)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("export-dot", help="Graphviz view of promises and trust")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenario":
        missing = {"ttp": ("users", "authority"), "wot": ("pairs",), "accept": ()}[args.kind]
        for name in missing:
            if getattr(args, name) is None:
                parser.error(f"scenario {args.kind} needs --{name}")
    if args.command == "reputation" and args.action == "fold" and not (args.input and args.agent):
        parser.error("reputation fold needs --input and --agent")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TrustError, ValueError, OSError) as exc:
        print(f"promisetrust: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

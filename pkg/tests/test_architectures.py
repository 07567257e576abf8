import pytest

from promisetrust.architectures import (
    IDENTITY,
    SIGNATURE,
    VERIFICATION,
    Scenario,
    WotCategory,
    build_ttp_scenario,
    build_wot_signing,
    compose_wot,
    threshold_accept,
    wot_category_value,
)
from promisetrust.algebra import TrustEdge
from promisetrust.community import build_matrix, community_trust
from promisetrust.errors import EmptyUserSet, EmptyValuations, SelfSigning
from promisetrust.expectation import NEUTRAL, TRUSTING
from promisetrust.promises import Polarity, Promise, PromiseBody


def test_ttp_counts():
    assert len(build_ttp_scenario(["u1", "u2", "u3"], "ca").promises) == 15
    assert len(build_ttp_scenario(["u1"], "ca", registered=[]).promises) == 3
    s = build_ttp_scenario(["u1", "u2"], "ca", registered=["u1"])
    assert len(s.promises) == 8
    assert len(s.trust_edges) == len(s.promises)


def test_ttp_star_shape():
    s = build_ttp_scenario(["u1", "u2"], "ca")
    for p in s.promises:
        assert "ca" in (p.sender, p.receiver)


def test_ttp_authority_most_trustworthy():
    users = ["u1", "u2", "u3", "u4"]
    s = build_ttp_scenario(users, "ca")
    res = community_trust(build_matrix(s.trust_edges, s.agents, VERIFICATION))
    assert res.most_trustworthy() == "ca"
    assert res.converged and not res.degenerate


def test_ttp_errors():
    with pytest.raises(EmptyUserSet):
        build_ttp_scenario([], "ca")
    with pytest.raises(ValueError):
        build_ttp_scenario(["ca"], "ca")
    with pytest.raises(ValueError):
        build_ttp_scenario(["u1"], "ca", registered=["u9"])


def test_wot_single_signing():
    s = build_wot_signing("owner", "agent")
    assert len(s.promises) == 4
    bodies = {(p.sender, p.body) for p in s.promises}
    assert ("owner", PromiseBody(IDENTITY)) in bodies
    assert ("agent", PromiseBody(IDENTITY, polarity=Polarity.USE)) in bodies
    assert ("agent", PromiseBody(SIGNATURE)) in bodies
    assert ("owner", PromiseBody(SIGNATURE, polarity=Polarity.USE)) in bodies


def test_wot_composition_counts_and_symmetry():
    pairs = [("a", "b"), ("b", "c"), ("c", "a")]
    s = compose_wot(pairs)
    assert len(s.promises) == 4 * len(pairs)
    for owner, agent in pairs:
        directions = {(p.sender, p.receiver) for p in s.promises if {p.sender, p.receiver} == {owner, agent}}
        assert directions == {(owner, agent), (agent, owner)}


def test_wot_self_signing():
    with pytest.raises(SelfSigning):
        build_wot_signing("a", "a")


def test_category_values():
    assert wot_category_value(WotCategory.DEFINITELY) == 1.0
    assert wot_category_value("somewhat") == 0.6
    assert wot_category_value("unknown", NEUTRAL) == 0.5
    assert wot_category_value("unknown", TRUSTING) == 1.0
    assert wot_category_value(WotCategory.UNTRUSTWORTHY) == 0.0


def test_signing_edges_follow_judgements():
    s = build_wot_signing("o", "a", "definitely", "untrustworthy")
    values = {e.body.ptype: e.value for e in s.trust_edges}
    assert values == {IDENTITY: 1.0, SIGNATURE: 0.0}


def test_threshold_accept():
    assert threshold_accept([1.0, 0.6], 0.7)
    assert not threshold_accept([0.0], 0.1)
    assert threshold_accept([0.3], 0.3)
    with pytest.raises(EmptyValuations):
        threshold_accept([], 0.5)


def test_scenario_rejects_unbacked_edges():
    p = Promise("s", "r", PromiseBody("x"))
    with pytest.raises(ValueError):
        Scenario("bad", (p,), (TrustEdge("r", "s", PromiseBody("y"), 0.5),))

"""Property tests for the invariants each module promises."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from promisetrust.algebra import (
    compose_and,
    compose_not,
    compose_or,
    compose_ranked,
    compose_xor,
    compose_xor_weighted,
)
from promisetrust.architectures import WotCategory, wot_category_value
from promisetrust.community import TrustMatrix, principal_eigenvector
from promisetrust.errors import AllWeightsZero, DegenerateSpectrum
from promisetrust.expectation import (
    BayesHypothesis,
    BeliefState,
    PolicyPrior,
    bayes_update,
    combine_ensembles,
    combine_weighted,
    frequentist_estimate,
)
from promisetrust.graphfile import TrustGraph, parse_graph, serialize_graph
from promisetrust.algebra import TrustEdge
from promisetrust.promises import (
    BundleBody,
    IncompatibilitySet,
    Polarity,
    Promise,
    PromiseBody,
    add_condition,
    assurance_body,
    compose_bundle,
    detect_conflicts,
    discharge_conditional,
    format_body,
    negate_body,
    parse_body,
)
from promisetrust.reputation import (
    ReputationPolicy,
    borrowed_trust,
    relay_chain,
    update_trust_with_reputation,
)

unit = st.floats(0.0, 1.0, allow_nan=False)
vectors = st.lists(unit, min_size=1, max_size=6)
tokens = st.text("abcxyz0123_.", min_size=1, max_size=5)
bodies = st.builds(
    PromiseBody,
    ptype=tokens.filter(lambda t: t[0] not in "-+"),
    constraint=st.none() | st.text("0123456789hms", max_size=4),
    negated=st.booleans(),
    polarity=st.sampled_from(list(Polarity)),
)
agents = st.sampled_from(["a", "b", "c"])


# promises


@given(bodies)
def test_negation_involution(b):
    assert negate_body(negate_body(b)) == b
    assert negate_body(b).ptype == b.ptype
    assert negate_body(b) != b


@given(bodies)
def test_body_text_roundtrip(b):
    assert parse_body(format_body(b)) == b


@given(st.lists(st.tuples(agents, agents, bodies), max_size=6), st.lists(st.tuples(bodies, bodies), max_size=3))
def test_conflicts_symmetric_in_order(raw, pairs):
    pairs = [(x, y) for x, y in pairs if x != y]
    inc = IncompatibilitySet(pairs)
    ps = [Promise(s, r, b) for s, r, b in raw]
    forward = {frozenset((id(p), id(q))) for p, q in detect_conflicts(ps, inc)}
    backward = {frozenset((id(p), id(q))) for p, q in detect_conflicts(ps[::-1], inc)}
    assert forward == backward


@given(st.lists(st.tuples(agents, agents, bodies), max_size=6))
def test_no_conflicts_without_incompatibility(raw):
    ps = [Promise(s, r, b) for s, r, b in raw]
    bodies_used = {p.body for p in ps}
    assume(not any(negate_body(b) in bodies_used for b in bodies_used))
    assert detect_conflicts(ps, IncompatibilitySet()) == []


@given(st.lists(bodies, min_size=1, max_size=5), st.randoms())
def test_bundle_order_independent(bs, rnd):
    ps = [Promise("a", "b", x) for x in bs]
    shuffled = ps[:]
    rnd.shuffle(shuffled)
    assert compose_bundle(ps) == compose_bundle(shuffled)
    assert compose_bundle(ps).body == BundleBody(tuple(bs))


@given(bodies, bodies)
def test_discharge_then_readd(b, c):
    p = Promise("a", "b", b, condition=c)
    free = discharge_conditional(p, Promise("a", "b", assurance_body(c)))
    assert free.condition is None
    assert add_condition(free, c) == p


# expectation


@given(st.lists(st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)), min_size=1, max_size=5))
def test_pooling_exact(counts):
    counts = [(k, b) for k, b in counts if k + b > 0]
    assume(counts)
    pooled = sum(k for k, _ in counts) / sum(k + b for k, b in counts)
    trials = [(frequentist_estimate((k, b)), k + b) for k, b in counts]
    assert combine_ensembles(trials) == pytest.approx(pooled, abs=1e-12)


@given(st.lists(unit, min_size=1, max_size=6), st.data())
def test_combine_weighted_linear(ps, data):
    raw = data.draw(st.lists(st.floats(0.01, 1.0), min_size=len(ps), max_size=len(ps)))
    total = math.fsum(raw)
    ws = [w / total for w in raw]
    assume(abs(math.fsum(ws) - 1.0) <= 1e-12)
    out = combine_weighted(list(zip(ps, ws)))
    assert min(ps) - 1e-15 <= out <= max(ps) + 1e-15
    assert combine_weighted([(1.0, w) for w in ws]) == pytest.approx(1.0, abs=1e-12)
    doubled = combine_weighted([(p / 2, w) for p, w in zip(ps, ws)])
    assert doubled == pytest.approx(out / 2, abs=1e-12)


@given(unit, unit, unit, unit, st.booleans())
def test_bayes_monotone_in_likelihood(ph, a, b, pen, positive):
    lo, hi = sorted((a, b))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p_lo = bayes_update(BayesHypothesis(ph, lo, pen), True).p_h
        p_hi = bayes_update(BayesHypothesis(ph, hi, pen), True).p_h
    assume(not (lo == 0 and pen == 0))
    assert p_hi >= p_lo
    assert 0.0 <= p_hi <= 1.0


@given(unit, st.floats(0.0, 1.0, exclude_min=True), st.lists(st.booleans(), max_size=20))
def test_bayes_uninformative_identity(ph, like, outcomes):
    h = BayesHypothesis(ph, like, like)
    assume(like < 1.0 or all(outcomes))
    for o in outcomes:
        h = bayes_update(h, o)
    assert h.p_h == ph


# composition


@given(vectors)
def test_gate_order_relations(vs):
    assert compose_and(vs) <= min(vs)
    assert compose_or(vs) >= max(vs)
    for f in (compose_and, compose_or):
        assert 0.0 <= f(vs) <= 1.0


@given(vectors, st.randoms())
def test_gates_commutative_associative(vs, rnd):
    shuffled = vs[:]
    rnd.shuffle(shuffled)
    k = rnd.randint(1, len(vs))
    for f in (compose_and, compose_or):
        assert f(shuffled) == pytest.approx(f(vs), abs=1e-12)
        regrouped = [f(vs[:k])] + ([f(vs[k:])] if vs[k:] else [])
        assert f(regrouped) == pytest.approx(f(vs), abs=1e-12)


@given(vectors, st.data())
def test_convex_gates_bounded(vs, data):
    ws = data.draw(st.lists(st.floats(0.0, 10.0), min_size=len(vs), max_size=len(vs)))
    if sum(ws) > 0:
        out = compose_xor_weighted(list(zip(vs, ws)))
        assert min(vs) <= out <= max(vs)
        total = math.fsum(ws)
        alphas = [w / total for w in ws]
        if abs(math.fsum(alphas) - 1.0) <= 1e-9:
            assert min(vs) <= compose_ranked(vs, alphas) <= max(vs)
    if any(vs):
        assert min(vs) <= compose_xor(vs) <= max(vs)
    else:
        with pytest.raises(AllWeightsZero):
            compose_xor(vs)


@given(unit)
def test_not_involution(x):
    assert compose_not(compose_not(x)) == x
    assert 0.0 <= compose_not(x) <= 1.0


# reputation


@given(unit, unit)
def test_borrowed_bounded(t, v):
    assert borrowed_trust(t, v) <= min(t, v)


@given(unit, st.lists(unit, max_size=8))
def test_relay_non_increasing(initial, chain):
    values = [relay_chain(initial, chain[:k])[0] for k in range(len(chain) + 1)]
    assert all(b <= a for a, b in zip(values, values[1:]))


@given(unit, unit, st.floats(0.01, 100), st.floats(0.01, 100))
def test_update_strictly_between(t, r, w_new, w_old):
    assume(abs(t - r) > 1e-6)
    out = update_trust_with_reputation(BeliefState(t), r, ReputationPolicy(w_new, w_old)).probability
    assert min(t, r) < out < max(t, r)


# community

entries = st.sampled_from([0.0, 0.0, 0.1, 0.25, 0.5, 0.8, 1.0])


def square(n):
    return arrays(np.float64, (n, n), elements=entries)


matrices = st.integers(1, 6).flatmap(square)


def solve(m):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrum)
        return principal_eigenvector(m)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_eigen_invariants(m):
    r = solve(m)
    if not r.converged:
        assume(False)
    v = r.vector
    assert np.all(v >= 0)
    if v.any():
        assert v.max() == 1.0
        assert np.abs(m @ v - r.eigenvalue * v).max() <= 10 * 1e-10 * r.eigenvalue
    # zero out-edges (empty row) means exactly zero trustingness
    assert np.all(v[~m.any(axis=1)] == 0.0)


@settings(max_examples=150, deadline=None)
@given(matrices, st.floats(0.1, 5.0), st.randoms())
def test_eigen_scale_and_permutation(m, c, rnd):
    base = solve(m)
    assume(base.converged and base.eigenvalue > 0)
    scaled = solve(m * c)
    assert np.allclose(scaled.vector, base.vector, atol=1e-7)
    assert scaled.eigenvalue == pytest.approx(c * base.eigenvalue, rel=1e-8)
    perm = list(range(len(m)))
    rnd.shuffle(perm)
    permuted = solve(m[np.ix_(perm, perm)])
    assert np.allclose(permuted.vector, base.vector[perm], atol=1e-7)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_proportional_vote(m):
    # trustworthiness: each agent's score is the trust-weighted sum of the
    # scores of those who trust it, divided by the eigenvalue
    r = solve(m.T)
    assume(r.converged and r.eigenvalue > 0)
    w = r.vector
    for j in range(len(w)):
        votes = sum(m[i, j] * w[i] for i in range(len(w)))
        assert votes == pytest.approx(r.eigenvalue * w[j], abs=1e-8)
    assert np.all(w[~m.any(axis=0)] == 0.0)


# architectures


@given(st.sampled_from(["trusting", "neutral", "untrusting", "0.3"]))
def test_category_order(prior):
    p = PolicyPrior.parse(prior)
    order = [WotCategory.DEFINITELY, WotCategory.SOMEWHAT, WotCategory.UNTRUSTWORTHY]
    values = [wot_category_value(c, p) for c in order]
    assert values == sorted(values, reverse=True)


# graph file


@settings(deadline=None)
@given(st.lists(st.tuples(agents, agents, bodies, unit), max_size=6, unique_by=lambda e: (e[0], e[1], e[2])))
def test_graph_roundtrip(raw):
    g = TrustGraph(
        agents=["a", "b", "c"],
        promises=[Promise(s, r, b) for s, r, b, _ in raw],
        trust_edges=[TrustEdge(r, s, b, v) for s, r, b, v in raw],
    )
    text = serialize_graph(g)
    assert parse_graph(text) == g
    assert serialize_graph(parse_graph(text)) == text

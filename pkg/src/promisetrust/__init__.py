"""Typed trust between autonomous agents, built on promises.

Trust is an agent's expectation that a particular promise will be kept.
This package represents the promises, estimates and composes those
expectations, relays them as reputation and ranks agents globally by the
principal eigenvectors of the trust matrix.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .algebra import (
    CompositionMode,
    Mode,
    TrustEdge,
    compose,
    compose_and,
    compose_not,
    compose_or,
    compose_ranked,
    compose_xor,
    compose_xor_weighted,
    trust_from_expectation,
)
from .architectures import (
    Scenario,
    WotCategory,
    build_ttp_scenario,
    build_wot_signing,
    compose_wot,
    threshold_accept,
    wot_category_value,
)
from .community import (
    CommunityTrustResult,
    TrustMatrix,
    build_matrix,
    community_trust,
    dense_eigen_oracle,
    principal_eigenvector,
    remove_agent,
)
from .expectation import (
    BayesHypothesis,
    BeliefState,
    Counts,
    EvidenceKey,
    EvidenceLedger,
    PolicyPrior,
    bayes_update,
    combine_ensembles,
    combine_weighted,
    damnation_policy,
    frequentist_estimate,
    initialize_prior,
    record_outcome,
    transfer_evidence,
)
from .graphfile import TrustGraph, parse_graph, serialize_graph, to_dot
from .promises import (
    BundleBody,
    IncompatibilitySet,
    Polarity,
    Promise,
    PromiseBody,
    compose_bundle,
    detect_conflicts,
    discharge_conditional,
    is_incompatible,
    negate_body,
    validate_promise,
)
from .reputation import (
    ReputationMessage,
    ReputationPolicy,
    TrustPromiseRecord,
    apply_distortion,
    borrowed_trust,
    relay_chain,
    update_trust_with_reputation,
)

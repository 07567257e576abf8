"""Global community trust from the typed trust matrix.

Row ``A``, column ``B`` of the matrix holds ``A``'s trust in ``B`` for one
promise type.  Trustingness is the principal eigenvector of the matrix,
trustworthiness that of its transpose; both are scaled so the largest
component is 1 (only ratios between components carry meaning).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import mpmath
import numpy as np
from scipy.sparse.csgraph import connected_components

from . import _backend
from .algebra import TrustEdge
from .errors import DegenerateSpectrum, DuplicateEdge, OracleSizeExceeded, UnknownAgent

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
# relative gap below which two strongly connected classes share the top eigenvalue
_TIE_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class TrustMatrix:
    roster: tuple[str, ...]
    ptype: str
    entries: np.ndarray

    def __post_init__(self):
        roster = tuple(self.roster)
        if len(set(roster)) != len(roster):
            raise ValueError("roster contains duplicates")
        entries = np.array(self.entries, dtype=np.float64, copy=True).reshape(len(roster), len(roster))
        if entries.size and (entries.min() < 0.0 or entries.max() > 1.0):
            raise ValueError("trust matrix entries must lie in [0, 1]")
        entries.flags.writeable = False
        object.__setattr__(self, "roster", roster)
        object.__setattr__(self, "entries", entries)

    def __eq__(self, other):
        if not isinstance(other, TrustMatrix):
            return NotImplemented
        return (
            self.roster == other.roster
            and self.ptype == other.ptype
            and np.array_equal(self.entries, other.entries)
        )

    __hash__ = None

    @property
    def size(self) -> int:
        return len(self.roster)

    def index(self, agent: str) -> int:
        try:
            return self.roster.index(agent)
        except ValueError:
            raise UnknownAgent(f"{agent!r} is not in the roster") from None

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        return float(self.entries[self.index(a), self.index(b)])

    def transpose(self) -> "TrustMatrix":
        return TrustMatrix(self.roster, self.ptype, self.entries.T)


def build_matrix(edges: Sequence[TrustEdge], roster: Sequence[str], ptype: str) -> TrustMatrix:
    """Trust matrix for one promise type; edges of other types are skipped."""
    roster = tuple(roster)
    pos = {a: i for i, a in enumerate(roster)}
    t = np.zeros((len(roster), len(roster)))
    seen = set()
    for e in edges:
        if getattr(e.body, "ptype", None) != ptype:
            continue
        for agent in (e.truster, e.trustee):
            if agent not in pos:
                raise UnknownAgent(f"{agent!r} is not in the roster")
        pair = (e.truster, e.trustee)
        if pair in seen:
            raise DuplicateEdge(f"second {ptype} edge {e.truster} -> {e.trustee}")
        seen.add(pair)
        t[pos[e.truster], pos[e.trustee]] = e.value
    return TrustMatrix(roster, ptype, t)


def remove_agent(m: TrustMatrix, agent: str) -> TrustMatrix:
    i = m.index(agent)
    keep = [j for j in range(m.size) if j != i]
    return TrustMatrix(
        tuple(a for a in m.roster if a != agent), m.ptype, m.entries[np.ix_(keep, keep)]
    )


class EigenResult(NamedTuple):
    vector: np.ndarray
    eigenvalue: float
    iterations: int
    converged: bool
    degenerate: bool = False


def _as_array(m) -> np.ndarray:
    a = m.entries if isinstance(m, TrustMatrix) else np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.size and a.min() < 0:
        raise ValueError("matrix must be non-negative")
    return np.ascontiguousarray(a, dtype=np.float64)


def _basic_classes(a: np.ndarray, rho: float, tol: float, max_iter: int) -> int:
    """Number of strongly connected classes whose own spectral radius equals
    ``rho``; more than one means the principal eigenvector is not unique."""
    ncomp, labels = connected_components(a > 0, directed=True, connection="strong")
    count = 0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        block = a[np.ix_(idx, idx)]
        if not block.any():
            continue
        _, r, _, _ = _backend.power_iterate(block, tol, max_iter)
        if r >= rho * (1.0 - _TIE_RTOL):
            count += 1
    return count


def principal_eigenvector(
    m, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, *, check_degenerate: bool = True
) -> EigenResult:
    """Principal eigenpair of a non-negative matrix by power iteration from
    the all-ones vector, normalised to a largest component of 1.

    A zero (or nilpotent) matrix gives the zero vector with eigenvalue 0.
    When the iteration does not settle within ``max_iter`` the best iterate
    is returned with ``converged=False``.  When the top eigenvalue is shared
    by several disconnected parts of the graph the answer depends on the
    start vector: ``degenerate`` is set, ``converged`` cleared and a
    :class:`DegenerateSpectrum` warning issued.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = _as_array(m)
    n = a.shape[0]
    if n == 0 or not a.any():
        return EigenResult(np.zeros(n), 0.0, 0, True)
    v, lam, it, converged = _backend.power_iterate(a, tol, max_iter)
    scale = a.sum(axis=1).max()
    if not v.any() or (converged and lam <= tol * scale):
        # nilpotent: every eigenvalue is zero, no Perron direction to report
        warnings.warn(DegenerateSpectrum("matrix is nilpotent; principal eigenvalue is 0"), stacklevel=2)
        return EigenResult(np.zeros(n), 0.0, it, True, True)
    degenerate = False
    if check_degenerate and _basic_classes(a, lam, tol, max_iter) > 1:
        degenerate = True
        warnings.warn(
            DegenerateSpectrum("top eigenvalue is shared; vector depends on the start vector"),
            stacklevel=2,
        )
    if not converged:
        warnings.warn(DegenerateSpectrum(f"no convergence after {it} iterations"), stacklevel=2)
    return EigenResult(v, float(lam), it, converged and not degenerate, degenerate)


@dataclass(frozen=True, eq=False)
class CommunityTrustResult:
    roster: tuple[str, ...]
    trusting: np.ndarray
    trustworthy: np.ndarray
    eigenvalue_s: float
    eigenvalue_w: float
    iterations: int
    converged: bool
    degenerate: bool = False

    def most_trustworthy(self) -> str | None:
        if not self.trustworthy.any():
            return None
        return self.roster[int(np.argmax(self.trustworthy))]

    def most_trusting(self) -> str | None:
        if not self.trusting.any():
            return None
        return self.roster[int(np.argmax(self.trusting))]

    def rows(self):
        return list(zip(self.roster, self.trusting.tolist(), self.trustworthy.tolist()))


def community_trust(
    m: TrustMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> CommunityTrustResult:
    """Trustingness ``S`` from ``m`` and trustworthiness ``W`` from its transpose."""
    s = principal_eigenvector(m.entries, tol, max_iter)
    w = principal_eigenvector(m.entries.T, tol, max_iter)
    return CommunityTrustResult(
        roster=m.roster,
        trusting=s.vector,
        trustworthy=w.vector,
        eigenvalue_s=s.eigenvalue,
        eigenvalue_w=w.eigenvalue,
        iterations=s.iterations + w.iterations,
        converged=s.converged and w.converged,
        degenerate=s.degenerate or w.degenerate,
    )


ORACLE_MAX_N = 12


def _charpoly(a: mpmath.matrix, n: int) -> list:
    """Coefficients of det(x I - A), highest degree first (Faddeev-LeVerrier)."""
    eye = mpmath.eye(n)
    mk = mpmath.zeros(n, n)
    coeffs = [mpmath.mpf(1)]
    for k in range(1, n + 1):
        mk = a * mk + coeffs[-1] * eye
        am = a * mk
        coeffs.append(-sum(am[i, i] for i in range(n)) / k)
    return coeffs


def dense_eigen_oracle(m, dps: int = 60) -> tuple[np.ndarray, float]:
    """Principal eigenpair by an independent route, for testing only.

    The Perron root is the characteristic polynomial's root of largest real
    part, found in extended precision; the vector is the null direction of
    ``A - rho I`` from an SVD.  Only for small matrices.
    """
    a = _as_array(m)
    n = a.shape[0]
    if n > ORACLE_MAX_N:
        raise OracleSizeExceeded(f"oracle limited to N <= {ORACLE_MAX_N}, got {n}")
    if n == 0:
        return np.zeros(0), 0.0
    with mpmath.workdps(dps):
        coeffs = _charpoly(mpmath.matrix(a.tolist()), n)
        zeros_at_origin = 0
        while len(coeffs) > 1 and abs(coeffs[-1]) < mpmath.mpf(10) ** (-dps // 2):
            coeffs.pop()
            zeros_at_origin += 1
        roots = [mpmath.mpf(0)] * zeros_at_origin
        if len(coeffs) > 1:
            roots += list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps))
        rho = float(max(mpmath.re(r) for r in roots))
    scale = a.sum(axis=1).max()
    if rho <= 1e-12 * scale:
        return np.zeros(n), 0.0
    _, _, vh = np.linalg.svd(a - rho * np.eye(n))
    v = vh[-1]
    if v.sum() < 0:
        v = -v
    v = v / v[np.argmax(np.abs(v))]
    v[np.abs(v) < 1e-13] = 0.0
    return v, rho

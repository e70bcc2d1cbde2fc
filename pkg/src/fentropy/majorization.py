"""Schur majorization utilities on classical probability vectors.

Includes the max-min subset formula for order statistics (a brute-force
oracle for sorting), the majorization predicate, the Ky Fan bracket on the
trace distance in terms of spectra, and the "concentrate the excess on the
largest coordinate" reduction used in the bound's proof.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .errors import ConditionError, DimensionError, ParameterError, SimplexError
from .states import as_probability_vector

PREFIX_TOL = 1e-12
SUBSET_CAP = 20


@dataclass(frozen=True, eq=False)
class SimplexPair:
    """Two probability vectors together with ``eps = E(p, q) = 0.5 * ||p - q||_1``."""

    p: np.ndarray
    q: np.ndarray
    eps: float

    def __post_init__(self):
        e = total_variation(self.p, self.q)
        if abs(e - self.eps) > 1e-12:
            raise SimplexError(f"stored eps {self.eps!r} does not match E(p, q) = {e!r}")

    @classmethod
    def of(cls, p, q) -> "SimplexPair":
        p = as_probability_vector(p)
        q = as_probability_vector(q)
        if p.shape != q.shape:
            raise DimensionError(f"length mismatch: {p.size} vs {q.size}")
        return cls(p, q, total_variation(p, q))

    @property
    def d(self) -> int:
        return self.p.size

    def to_dict(self) -> dict:
        return {"p": self.p.tolist(), "q": self.q.tolist(), "eps": float(self.eps)}


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionError(f"length mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.sum(np.abs(p - q)))


def decreasing_rearrangement(a) -> np.ndarray:
    return -np.sort(-np.asarray(a, dtype=float))


def increasing_rearrangement(a) -> np.ndarray:
    return np.sort(np.asarray(a, dtype=float))


def order_statistic_via_subsets(a, j: int) -> float:
    """The ``j``-th largest entry of ``a`` as ``max over |J| = j of min_{i in J} a_i``.

    Enumerates subsets, so it is capped at length 20.

    >>> order_statistic_via_subsets([3, 1, 2], 2)
    2.0
    """
    a = np.asarray(a, dtype=float)
    n = a.size
    if n > SUBSET_CAP:
        raise ParameterError(f"subset oracle is capped at length {SUBSET_CAP}, got {n}")
    if not 1 <= j <= n:
        raise ParameterError(f"order index j must be in [1, {n}], got {j}")
    vals = a.tolist()
    return float(max(min(vals[i] for i in J) for J in combinations(range(n), j)))


def majorizes(a, b, tol: float = PREFIX_TOL) -> bool:
    """True iff ``a`` majorizes ``b``: equal totals and dominating prefix sums of the sorted vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    ca = np.cumsum(decreasing_rearrangement(a))
    cb = np.cumsum(decreasing_rearrangement(b))
    if a.size == 0:
        return True
    if abs(ca[-1] - cb[-1]) > tol:
        return False
    return bool(np.all(ca >= cb - tol))


def ky_fan_bracket(p, q) -> tuple[float, float]:
    """``(0.5 ||p_down - q_down||_1, 0.5 ||p_up - q_down||_1)``.

    For density matrices with spectra ``p`` and ``q`` the trace distance lies
    between these two numbers.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionError(f"length mismatch: {p.shape} vs {q.shape}")
    qd = decreasing_rearrangement(q)
    lo = 0.5 * float(np.sum(np.abs(decreasing_rearrangement(p) - qd)))
    hi = 0.5 * float(np.sum(np.abs(increasing_rearrangement(p) - qd)))
    return lo, hi


def ky_fan_bracket_batch(P: np.ndarray, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise :func:`ky_fan_bracket` for ``(n, d)`` arrays of spectra."""
    qd = -np.sort(-Q, axis=1)
    lo = 0.5 * np.sum(np.abs(-np.sort(-P, axis=1) - qd), axis=1)
    hi = 0.5 * np.sum(np.abs(np.sort(P, axis=1) - qd), axis=1)
    return lo, hi


@dataclass
class MajorizationCertificate:
    """Checked facts about a reduction step, with their numerical slacks.

    ``prefix_slack`` is the smallest prefix-sum margin of the new head over
    the old one; ``convex_sum_gain`` maps function labels to
    ``sum f(p*) - sum f(p)`` over the head; ``dominance_slack`` is
    ``min_{i<=k} (p*_i - q_i)``.
    """

    k: int
    eps: float
    majorizes: bool
    prefix_slack: float
    convex_sum_gain: dict = field(default_factory=dict)
    dominance_slack: float = 0.0

    @property
    def holds(self) -> bool:
        return (
            self.majorizes
            and all(g >= -1e-12 for g in self.convex_sum_gain.values())
            and self.dominance_slack >= -1e-12
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        out["holds"] = self.holds
        return out


def reduction_step(pair: SimplexPair, k: int, functions=None, tol: float = 1e-12):
    """Move all of the head's excess onto its first coordinate.

    Requires ``p_i >= q_i`` for ``i <= k``, ``p_i <= q_i`` for ``i > k`` and
    ``q_1 >= ... >= q_k`` (1-based).  Returns ``p*`` with
    ``p*_1 = q_1 + eps``, ``p*_i = q_i`` for ``2 <= i <= k`` and the tail of
    ``p`` unchanged, plus a :class:`MajorizationCertificate`.
    """
    p, q = pair.p, pair.q
    d = p.size
    if not 1 <= k <= d:
        raise ConditionError(f"k must be in [1, {d}], got {k}")
    head = slice(0, k)
    if np.any(p[head] < q[head] - tol):
        i = int(np.argmax(q[head] - p[head]))
        raise ConditionError(f"condition p_i >= q_i for i <= k fails at i = {i + 1}")
    if np.any(p[k:] > q[k:] + tol):
        i = k + int(np.argmax(p[k:] - q[k:]))
        raise ConditionError(f"condition p_i <= q_i for i > k fails at i = {i + 1}")
    if np.any(np.diff(q[head]) > tol):
        raise ConditionError("condition q_1 >= ... >= q_k fails")
    eps = float(np.sum(p[head] - q[head]))
    if abs(eps - pair.eps) > 1e-10:
        raise ConditionError(f"head excess {eps!r} differs from E(p, q) = {pair.eps!r}")

    p_star = p.copy()
    p_star[head] = q[head]
    p_star[0] = q[0] + eps

    cs = np.cumsum(decreasing_rearrangement(p_star[head])) - np.cumsum(decreasing_rearrangement(p[head]))
    if functions is None:
        from .entropy import BUILTINS, builtin

        functions = [builtin(n, alpha=2.0) if n == "tsallis" else builtin(n) for n in BUILTINS]
    gains = {}
    for f in functions:
        gains[f.label] = float(np.sum(f(np.clip(p_star[head], 0, f.t_max))) - np.sum(f(p[head])))
    cert = MajorizationCertificate(
        k=k,
        eps=eps,
        majorizes=majorizes(p_star[head], p[head]),
        prefix_slack=float(cs.min()),
        convex_sum_gain=gains,
        dominance_slack=float(np.min(p_star[head] - q[head])),
    )
    return p_star, cert

"""Closed-form continuity bounds for f-entropies and the states attaining them.

For a convex ``f`` and dimension ``d`` the sharp bound at trace distance
``eps`` (and total trace ``t``, normally 1) is::

    delta(eps) = f(t) - f(t - eps) - (d - 1) * (f(eps / (d - 1)) - f(0))

It rises on ``[0, t (1 - 1/d)]`` and falls afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import ConvexFunction, binary_entropy
from .errors import ParameterError
from .majorization import SimplexPair
from .states import DensityMatrix

PEAK_TOL = 1e-12


@dataclass(frozen=True)
class BoundQuery:
    f: ConvexFunction
    d: int
    eps: float
    t: float = 1.0

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ParameterError(f"d must be an integer >= 2, got {self.d!r}")
        if not (0.0 <= self.eps <= self.t):
            raise ParameterError(f"need 0 <= eps <= t, got eps={self.eps!r}, t={self.t!r}")
        if self.t > self.f.t_max:
            raise ParameterError(f"t={self.t!r} exceeds the domain [0, {self.f.t_max:g}] of {self.f.name}")

    @property
    def peak(self) -> float:
        return self.t * (1.0 - 1.0 / self.d)


@dataclass(frozen=True)
class BoundResult:
    value: float
    query: BoundQuery
    regime: str

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        q = self.query
        return {
            "value": self.value,
            "f": q.f.label,
            "d": q.d,
            "eps": q.eps,
            "t": q.t,
            "regime": self.regime,
        }


def regime(eps: float, d: int, t: float = 1.0) -> str:
    peak = t * (1.0 - 1.0 / d)
    if abs(eps - peak) <= PEAK_TOL:
        return "peak"
    return "rising" if eps < peak else "falling"


def _delta(f: ConvexFunction, d: int, t: float, eps) -> np.ndarray:
    eps = np.asarray(eps, dtype=float)
    return f(t) - f(t - eps) - (d - 1) * (f(eps / (d - 1)) - f(0.0))


def audenaert_bound(eps: float, d: int) -> float:
    """``h(eps) + eps log2(d - 1)``, the von Neumann special case."""
    if int(d) != d or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps!r}")
    return binary_entropy(eps) + eps * math.log2(d - 1)


def f_bound_trace_t(f: ConvexFunction, d: int, t: float, eps: float) -> BoundResult:
    """Bound for positive operators of common trace ``t`` (``eps`` must not exceed ``t``)."""
    q = BoundQuery(f, d, float(eps), float(t))
    return BoundResult(float(_delta(f, d, q.t, q.eps)), q, regime(q.eps, d, q.t))


def f_bound(f: ConvexFunction, d: int, eps: float) -> BoundResult:
    """Sharp bound on ``|S_f(rho) - S_f(sigma)|`` at trace distance ``eps`` in dimension ``d``.

    >>> from fentropy.entropy import builtin
    >>> f_bound(builtin("tsallis", alpha=2), 3, 0.5).value
    0.625
    """
    if f.t_max < 1.0:
        raise ParameterError(f"{f.name} must be defined on [0, 1], domain ends at {f.t_max:g}")
    return f_bound_trace_t(f, d, 1.0, eps)


def f_bound_grid(f: ConvexFunction, d: int, eps_grid, t: float = 1.0) -> np.ndarray:
    """Vectorized bound values over an array of ``eps``."""
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size and (eps.min() < 0 or eps.max() > t):
        raise ParameterError(f"eps grid must lie in [0, {t:g}]")
    return np.asarray(_delta(f, d, t, eps), dtype=float)


def modulus_of_continuity(f: ConvexFunction, d: int, eps: float) -> float:
    """Supremum of ``|S_f(rho) - S_f(sigma)|`` over pairs with trace distance at most ``eps``."""
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps!r}")
    return f_bound(f, d, min(eps, 1.0 - 1.0 / d)).value


def extremal_family(d: int, eps: float, x: float) -> SimplexPair:
    """``p = (x, 1-x, 0, ..., 0)`` and ``q = (x - eps, r, ..., r)`` with ``r = (1-x+eps)/(d-1)``.

    The returned pair carries its actual ``E(p, q)``; it equals ``eps`` when
    ``r >= 1 - x``.
    """
    if int(d) != d or d < 2:
        raise ParameterError(f"d must be an integer >= 2, got {d!r}")
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"eps must be in [0, 1], got {eps!r}")
    if not eps <= x <= 1.0:
        raise ParameterError(f"need eps <= x <= 1, got x={x!r}, eps={eps!r}")
    p = np.zeros(d)
    p[0] = x
    p[1] = 1.0 - x
    q = np.full(d, (1.0 - x + eps) / (d - 1))
    q[0] = x - eps
    return SimplexPair.of(p, q)


def extremal_pair(d: int, eps: float) -> tuple[DensityMatrix, DensityMatrix]:
    """Commuting pair ``diag(1, 0, ..., 0)`` and ``diag(1-eps, eps/(d-1), ...)`` attaining the bound."""
    pair = extremal_family(d, eps, 1.0)
    return (
        DensityMatrix(np.diag(pair.p).astype(complex)),
        DensityMatrix(np.diag(pair.q).astype(complex)),
    )

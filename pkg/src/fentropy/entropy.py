"""Convex functions and the entropies built from them.

A :class:`ConvexFunction` is a vectorized callable on ``[0, t_max]``.  The
associated f-entropy of a density matrix is ``S_f(rho) = -tr f(rho)``; von
Neumann (``x log2 x``) and Tsallis (``(x**a - x)/(a - 1)``) entropies are the
builtin cases.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, ParameterError, ValidationError
from .linalg import clamp_spectrum
from .states import DensityMatrix

CONVEXITY_GRID = 1024
CONVEXITY_TOL = 1e-9

BUILTINS = ("shannon", "tsallis", "gini_simpson", "natural_xlogx")


class ConvexityWarning(UserWarning):
    pass


def _xlogx(x: np.ndarray, log) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * log(safe), 0.0)


@dataclass(frozen=True, eq=False)
class ConvexFunction:
    """A continuous convex ``f`` on ``[0, t_max]``.

    ``func`` must accept and return float arrays and already encode any
    endpoint convention (such as ``0 log 0 = 0``).
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    t_max: float = 1.0
    params: dict = field(default_factory=dict)

    @property
    def domain(self) -> tuple[float, float]:
        return (0.0, self.t_max)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.size and (x.min() < 0 or x.max() > self.t_max):
            raise DomainError(
                f"{self.name}: argument range [{x.min():.6g}, {x.max():.6g}] outside [0, {self.t_max:g}]"
            )
        out = np.asarray(self.func(x), dtype=float)
        return out if out.ndim else float(out)

    @property
    def label(self) -> str:
        if "alpha" in self.params and self.name == "tsallis":
            return f"tsallis({self.params['alpha']:g})"
        return self.name


def midpoint_convexity_defect(f: ConvexFunction, n: int = CONVEXITY_GRID) -> float:
    """Largest ``f((x+y)/2) - (f(x)+f(y))/2`` over all pairs of an ``n``-point grid."""
    x = np.linspace(0.0, f.t_max, n)
    fx = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ValidationError(f"{f.name} is not finite on [0, {f.t_max:g}]")
    mid = 0.5 * (x[:, None] + x[None, :])
    fm = np.asarray(f(mid.ravel()), dtype=float).reshape(mid.shape)
    return float(np.max(fm - 0.5 * (fx[:, None] + fx[None, :])))


def check_convexity(f: ConvexFunction, strict: bool = False) -> ConvexFunction:
    defect = midpoint_convexity_defect(f)
    if defect > CONVEXITY_TOL:
        msg = f"{f.name} fails the sampled midpoint convexity check (defect {defect:.3e})"
        if strict:
            raise ValidationError(msg)
        warnings.warn(msg, ConvexityWarning, stacklevel=2)
    return f


def builtin(name: str, alpha: float | None = None, t_max: float = 1.0) -> ConvexFunction:
    """Look up a builtin convex function.

    >>> builtin("tsallis", alpha=2)(0.5)
    -0.25
    """
    if t_max <= 0:
        raise ParameterError(f"t_max must be positive, got {t_max!r}")
    if name == "shannon":
        return ConvexFunction("shannon", lambda x: _xlogx(x, np.log2), t_max)
    if name == "natural_xlogx":
        return ConvexFunction("natural_xlogx", lambda x: _xlogx(x, np.log), t_max)
    if name == "gini_simpson":
        return ConvexFunction("gini_simpson", lambda x: x * x - x, t_max, {"alpha": 2.0})
    if name == "tsallis":
        if alpha is None or not alpha > 1:
            raise ParameterError(f"tsallis needs alpha > 1, got {alpha!r}")
        a = float(alpha)
        if a == 2.0:
            func = lambda x: x * x - x  # noqa: E731  (bit-identical to gini_simpson)
        else:
            func = lambda x: (np.power(x, a) - x) / (a - 1.0)  # noqa: E731
        return ConvexFunction("tsallis", func, t_max, {"alpha": a})
    raise ParameterError(f"unknown convex function {name!r}; choose from {', '.join(BUILTINS)}")


def custom(name: str, func: Callable, t_max: float = 1.0, strict: bool = False) -> ConvexFunction:
    """Wrap a user callable, running the sampled convexity check."""
    return check_convexity(ConvexFunction(name, func, float(t_max)), strict=strict)


def tabulated(x, fx, name: str = "table", strict: bool = False) -> ConvexFunction:
    """Piecewise-linear interpolant of tabulated data on ``[0, x[-1]]``.

    The abscissae must be strictly increasing and start at 0.
    """
    x = np.asarray(x, dtype=float)
    fx = np.asarray(fx, dtype=float)
    if x.ndim != 1 or x.shape != fx.shape or x.size < 2:
        raise ValidationError("table needs at least two (x, fx) rows")
    if np.any(np.diff(x) <= 0):
        raise ValidationError("table abscissae must be strictly increasing")
    if x[0] != 0.0:
        raise ValidationError(f"table must start at x = 0, starts at {x[0]!r}")
    if not np.all(np.isfinite(fx)):
        raise ValidationError("table values must be finite")
    f = ConvexFunction(name, lambda u: np.interp(u, x, fx), float(x[-1]), {"table": True})
    # slopes must be nondecreasing; the grid check alone can miss narrow kinks
    slopes = np.diff(fx) / np.diff(x)
    if np.any(np.diff(slopes) < -CONVEXITY_TOL):
        msg = f"{name}: tabulated data is not convex (slopes decrease)"
        if strict:
            raise ValidationError(msg)
        warnings.warn(msg, ConvexityWarning, stacklevel=2)
    return check_convexity(f, strict=strict)


def load_table(path, strict: bool = False) -> ConvexFunction:
    """Read a CSV with header ``x,fx``."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames] != ["x", "fx"]:
            raise ValidationError(f"{path}: expected header 'x,fx', got {reader.fieldnames}")
        try:
            rows = [(float(r["x"]), float(r["fx"])) for r in reader]
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"{path}: {exc}") from exc
    if not rows:
        raise ValidationError(f"{path}: empty table")
    x, fx = zip(*rows)
    return tabulated(x, fx, name=path.stem, strict=strict)


def _spectrum(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.spectrum
    return np.asarray(rho, dtype=float)


def entropy_from_spectrum(lam, f: ConvexFunction) -> np.ndarray:
    """``-sum_i f(lam_i)`` along the last axis."""
    lam = clamp_spectrum(lam, *f.domain)
    return -np.sum(np.asarray(f(lam), dtype=float), axis=-1)


def f_entropy(rho, f: ConvexFunction) -> float:
    """``S_f(rho) = -tr f(rho)``; ``rho`` may also be given as its spectrum."""
    return float(entropy_from_spectrum(_spectrum(rho), f))


def von_neumann(rho) -> float:
    return f_entropy(rho, builtin("shannon"))


def renyi(rho, alpha: float) -> float:
    """Renyi entropy ``log2 tr(rho**alpha) / (1 - alpha)`` for ``alpha > 1``."""
    if not alpha > 1:
        raise ParameterError(f"renyi needs alpha > 1, got {alpha!r}")
    lam = clamp_spectrum(_spectrum(rho), 0.0, 1.0)
    val = float(np.log2(np.sum(lam ** alpha)) / (1.0 - alpha))
    return max(val, 0.0)


def tsallis_from_renyi(r: float, alpha: float) -> float:
    return (1.0 - 2.0 ** ((1.0 - alpha) * r)) / (alpha - 1.0)


def binary_entropy(eps: float) -> float:
    """``h(eps) = -eps log2 eps - (1-eps) log2(1-eps)``, with ``h(0) = h(1) = 0``."""
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"binary entropy needs eps in [0, 1], got {eps!r}")
    return float(-_xlogx(eps, np.log2) - _xlogx(1.0 - eps, np.log2))
